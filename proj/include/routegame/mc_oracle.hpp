#pragma once

#include <cstdint>

#include "routegame/model.hpp"

namespace routegame::mc {

inline constexpr std::int64_t kStepCap = 1'000'000;

// Counter-based generator: the k-th output of stream `key` is a SplitMix64
// finalization of key + k * golden-gamma. Streams are keyed by
// (seed, episode index), so an episode's draws never depend on which worker
// runs it or in which order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct Episode {
  bool succeeded = false;
  double total_latency = 0.0;
  double total_cost = 0.0;
  std::int64_t steps = 0;
  bool truncated = false;
};

// Runs one session of the routing chain until Success or Abandon (or the step
// cap, which marks the episode truncated).
Episode simulate_episode(const GameConfig& cfg, const ProviderPolicy& policy, UserResponse response,
                         CounterRng& rng, std::int64_t step_cap = kStepCap);

struct McEstimate {
  Outcomes mean;
  Outcomes std_error;  // sample standard deviation / sqrt(n), per functional
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::int64_t max_steps_hit = 0;
  double mean_steps = 0.0;

  // Usable as an oracle value only when no episode was truncated.
  bool accepted() const { return max_steps_hit == 0; }
};

// Mean and standard error of S, L, C, U, J over n independent episodes.
// workers = 0 uses the hardware concurrency. Bit-identical for a fixed seed
// regardless of the worker count.
McEstimate estimate(const GameConfig& cfg, const ProviderPolicy& policy, UserResponse response,
                    std::int64_t n, std::uint64_t seed, unsigned workers = 0);

}  // namespace routegame::mc

#include "routegame/mc_oracle.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "routegame/errors.hpp"
#include "routegame/parallel.hpp"

namespace routegame::mc {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
// Episodes per aggregation chunk. Fixed so the reduction tree does not
// depend on the worker count.
constexpr std::int64_t kChunk = 8192;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Running mean and sum of squared deviations (Welford), mergeable with Chan's
// pairwise update.
struct Moments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double total = na + nb;
    const double d = o.mean - mean;
    mean += d * nb / total;
    m2 += o.m2 + d * d * na * nb / total;
    n += o.n;
  }

  double std_error_of_mean() const {
    if (n < 2) return 0.0;
    const double var = m2 / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }
};

struct ChunkStats {
  std::array<Moments, 5> f;  // S, L, C, U, J
  double steps = 0.0;
  std::int64_t truncated = 0;
};

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + kGamma))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + kGamma * ++counter_); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

Episode simulate_episode(const GameConfig& cfg, const ProviderPolicy& policy, UserResponse response,
                         CounterRng& rng, std::int64_t step_cap) {
  const double q = response.q();
  const double s = policy.s();
  Route at = policy.route();
  Episode ep;
  while (true) {
    if (ep.steps >= step_cap) {
      ep.truncated = true;
      return ep;
    }
    const ModelParams& m = cfg.model(at);
    ++ep.steps;
    ep.total_latency += m.t;
    ep.total_cost += m.c;
    if (rng.uniform() < m.p) {
      ep.succeeded = true;
      return ep;
    }
    if (rng.uniform() < q) return ep;  // abandoned
    if (at == Route::Model1 && rng.uniform() < s) at = Route::Model2;
  }
}

McEstimate estimate(const GameConfig& cfg, const ProviderPolicy& policy, UserResponse response,
                    std::int64_t n, std::uint64_t seed, unsigned workers) {
  if (n < 1000) throw ValidationError("mc estimate: n must be >= 1000");

  const std::int64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<ChunkStats> partial(static_cast<std::size_t>(chunks));
  const double V = cfg.value();
  const double P = cfg.penalty();

  parallel_for(partial.size(), workers, [&](std::size_t k) {
    ChunkStats& st = partial[k];
    const std::int64_t lo = static_cast<std::int64_t>(k) * kChunk;
    const std::int64_t hi = std::min(n, lo + kChunk);
    for (std::int64_t e = lo; e < hi; ++e) {
      CounterRng rng(seed, static_cast<std::uint64_t>(e));
      const Episode ep = simulate_episode(cfg, policy, response, rng);
      const double S = ep.succeeded ? 1.0 : 0.0;
      st.f[0].push(S);
      st.f[1].push(ep.total_latency);
      st.f[2].push(ep.total_cost);
      st.f[3].push(V * S - ep.total_latency);
      st.f[4].push(ep.total_cost + P * (1.0 - S));
      st.steps += static_cast<double>(ep.steps);
      if (ep.truncated) ++st.truncated;
    }
  });

  ChunkStats total;
  for (const ChunkStats& st : partial) {
    for (std::size_t j = 0; j < total.f.size(); ++j) total.f[j].merge(st.f[j]);
    total.steps += st.steps;
    total.truncated += st.truncated;
  }

  McEstimate est;
  est.n = n;
  est.seed = seed;
  est.max_steps_hit = total.truncated;
  est.mean_steps = total.steps / static_cast<double>(n);
  est.mean = {total.f[0].mean, total.f[1].mean, total.f[2].mean, total.f[3].mean, total.f[4].mean};
  est.std_error = {total.f[0].std_error_of_mean(), total.f[1].std_error_of_mean(),
                   total.f[2].std_error_of_mean(), total.f[3].std_error_of_mean(),
                   total.f[4].std_error_of_mean()};
  return est;
}

}  // namespace routegame::mc

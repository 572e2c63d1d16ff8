#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "routegame/model.hpp"
#include "routegame/provider.hpp"

namespace routegame {

struct UserOptimum {
  ProviderPolicy policy{Route::Model1, 0.0};
  double q = 0.0;
  double U = 0.0;
};

// The (i, s) a utility-maximizing user would pick, with their best response.
UserOptimum user_optimal_route(const GameConfig& cfg);

// The regime's zero-gap condition with both sides of the comparison.
//   item 1 (BothPositive): sign(cop1 - cop2) == sign(xi2/p2 - xi1/p1)
//   item 2 (BothNegative): sign(xi2 - xi1) == sign(P - incr)
//   item 3 (mixed signs):  xi_{i*} > 0 and s* == 0
struct AlignmentPredicate {
  int item = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  // Distance to the nearest discontinuity of the predicate (including the
  // regime boundaries xi = 0).
  double margin = 0.0;
};

struct MisalignmentReport {
  double delta_u = 0.0;
  UserOptimum user_opt;
  Equilibrium provider_opt;
  bool aligned = false;
  AlignmentPredicate predicate;
};

inline constexpr double kAlignedTol = 1e-9;
inline constexpr double kPredicateBand = 1e-6;

// Throws InternalError if the predicate and the numeric gap disagree on a
// config farther than kPredicateBand from the predicate boundary.
MisalignmentReport misalignment_gap(const GameConfig& cfg);

enum class ThrottleVariant { Model1, Model2, Both };

std::string_view to_string(ThrottleVariant variant);

struct ThrottleOutcome {
  ThrottleVariant variant = ThrottleVariant::Both;
  double t1_hat = 0.0;
  double t2_hat = 0.0;
  double j_post = 0.0;
  double gain = 0.0;
};

struct ThrottleReport {
  double j_pre = 0.0;
  double j_post = 0.0;  // best of the three variants
  double gain = 0.0;    // j_pre - j_post
  double t1_hat = 0.0;
  double t2_hat = 0.0;
  ThrottleVariant best = ThrottleVariant::Both;
  double delta_u_post = 0.0;
  std::array<ThrottleOutcome, 3> variants;  // Model1, Model2, Both

  const ThrottleOutcome& variant(ThrottleVariant v) const {
    return variants[static_cast<std::size_t>(v)];
  }
};

// Re-solves the game with latencies raised to V p_i + epsilon (never lowered)
// for model 1, model 2 and both.
ThrottleReport throttle_analysis(const GameConfig& cfg, double epsilon = 1e-6);

// One sweep axis: a raw parameter (p1 p2 t1 t2 c1 c2 V P) or a composite.
// xi1 / xi2 set t_i = V p_i - xi at fixed V and p; cop_gap sets
// c2 = p2 (c1/p1 - gap) at fixed c1.
struct AxisSpec {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;

  // "name:lo:hi"
  static AxisSpec parse(std::string_view text);
};

struct SweepOptions {
  // When set, every cell reports the user response to this fixed policy
  // instead of solving the provider problem.
  std::optional<ProviderPolicy> fixed_policy;
  double epsilon = 1e-6;
  unsigned workers = 0;
};

struct SweepRecord {
  double a1 = 0.0;
  double a2 = 0.0;
  bool feasible = false;
  Regime regime = Regime::BothPositive;
  int i_star = 0;
  double s_star = 0.0;
  double q_star = 0.0;
  double S = 0.0;
  double U = 0.0;
  double J = 0.0;
  double delta_u = 0.0;
  double throttle_gain = 0.0;  // gain of throttling both models
};

// Row-major grid, axis1 outer. Throws ValidationError for an unknown axis or
// when no cell yields a valid config.
std::vector<SweepRecord> sweep(const GameConfig& base, const AxisSpec& axis1, const AxisSpec& axis2,
                               int n1, int n2, const SweepOptions& options = {});

inline constexpr std::string_view kSweepCsvHeader =
    "a1,a2,regime,i_star,s_star,q_star,S,U,J,delta_U,throttle_gain,feasible";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

}  // namespace routegame

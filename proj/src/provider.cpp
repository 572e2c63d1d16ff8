#include "routegame/provider.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "routegame/errors.hpp"
#include "routegame/numeric.hpp"
#include "routegame/user_response.hpp"

namespace routegame {

namespace {

// Candidates whose costs differ by at most this much are ties.
constexpr double kCostTieTol = 1e-12;
// A theorem policy may trail the candidate argmin by at most this much.
constexpr double kAgreementTol = 1e-9;
constexpr int kInteriorGrid = 1024;

Candidate evaluate(const GameConfig& cfg, const ProviderPolicy& policy) {
  const ProviderPolicy canon = policy.canonical();
  const double q = user_best_response(cfg, canon).q_star;
  const double J = expected_outcomes(cfg, canon, UserResponse(q)).J;
  return {canon, q, J};
}

// Lower cost wins; ties go to the lower route, then the lower s.
bool better(const Candidate& a, const Candidate& b) {
  if (a.J < b.J - kCostTieTol) return true;
  if (a.J > b.J + kCostTieTol) return false;
  const int ia = route_index(a.policy.route());
  const int ib = route_index(b.policy.route());
  if (ia != ib) return ia < ib;
  return a.policy.s() < b.policy.s();
}

const Candidate& argmin(const std::vector<Candidate>& cands) {
  const Candidate* best = &cands.front();
  for (const Candidate& c : cands) {
    if (better(c, *best)) best = &c;
  }
  return *best;
}

struct TheoremPick {
  ProviderPolicy policy;
  Provenance provenance;
  double s_lo;
  double s_hi;
  bool tie = false;
};

Equilibrium assemble(const GameConfig& cfg, std::vector<Candidate> cands, const TheoremPick& pick) {
  const Candidate theorem = evaluate(cfg, pick.policy);
  cands.push_back(theorem);
  const Candidate best = argmin(cands);
  if (theorem.J > best.J + kAgreementTol) {
    throw InternalError("provider optimum: " + std::string(to_string(pick.provenance)) +
                        " policy is not the candidate argmin (J=" + std::to_string(theorem.J) +
                        " vs " + std::to_string(best.J) + ")");
  }

  Equilibrium eq;
  eq.policy = best.policy;
  eq.q_star = best.q;
  eq.outcomes = expected_outcomes(cfg, best.policy, UserResponse(best.q));
  eq.provenance = pick.provenance;
  eq.boundary_tie = pick.tie;
  if (best.policy == theorem.policy) {
    eq.s_admissible_lo = pick.s_lo;
    eq.s_admissible_hi = pick.s_hi;
  } else {
    eq.s_admissible_lo = eq.s_admissible_hi = best.policy.s();
  }
  cands.pop_back();
  eq.candidates = std::move(cands);
  return eq;
}

TheoremPick static_pick(Route route, Provenance provenance, bool tie = false) {
  return {ProviderPolicy(route, 0.0), provenance, 0.0, 0.0, tie};
}

std::vector<Candidate> static_candidates(const GameConfig& cfg) {
  return {evaluate(cfg, ProviderPolicy(Route::Model1, 0.0)),
          evaluate(cfg, ProviderPolicy(Route::Model1, 1.0)),
          evaluate(cfg, ProviderPolicy(Route::Model2, 0.0))};
}

// min over s in (s_low, s_high) of J1(s, q_dagger(s)): uniform grid, then a
// bracketed refinement around the best grid point.
Candidate interior_minimum(const GameConfig& cfg, double s_low, double s_high) {
  const auto cost = [&](double s) { return evaluate(cfg, ProviderPolicy(Route::Model1, s)).J; };
  const double h = (s_high - s_low) / (kInteriorGrid + 1);
  int best_k = 1;
  double best_j = INFINITY;
  for (int k = 1; k <= kInteriorGrid; ++k) {
    const double j = cost(s_low + h * k);
    if (j < best_j) {
      best_j = j;
      best_k = k;
    }
  }
  double s_best = s_low + h * best_k;
  const numeric::Minimum refined =
      numeric::minimize(cost, s_low + h * (best_k - 1), s_low + h * (best_k + 1));
  if (refined.fx < best_j && refined.x > s_low && refined.x < s_high) s_best = refined.x;
  return evaluate(cfg, ProviderPolicy(Route::Model1, s_best));
}

}  // namespace

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::Thm3Case1: return "Thm3Case1";
    case Provenance::Thm3Case2: return "Thm3Case2";
    case Provenance::Thm4Case1: return "Thm4Case1";
    case Provenance::Thm4Case2: return "Thm4Case2";
    case Provenance::Thm4Case3: return "Thm4Case3";
    case Provenance::Thm4Case4: return "Thm4Case4";
    case Provenance::Thm5Case1: return "Thm5Case1";
    case Provenance::Thm5Case2: return "Thm5Case2";
    case Provenance::Thm5Case3: return "Thm5Case3";
    case Provenance::FiveCandidateSearch: return "FiveCandidateSearch";
    case Provenance::BruteForce: return "BruteForce";
  }
  return "?";
}

double cascade_penalty_threshold(const GameConfig& cfg, double s) {
  const ModelParams& m1 = cfg.m1();
  const ModelParams& m2 = cfg.m2();
  return (m1.c * (1.0 - s) + m2.c * s / m2.p) / (m1.p + (1.0 - m1.p) * s);
}

ThresholdPenalties threshold_penalties(const GameConfig& cfg) {
  ThresholdPenalties tp;
  tp.cop1 = cost_of_pass(cfg.m1());
  tp.cop2 = cost_of_pass(cfg.m2());
  tp.incr = incremental_cost_ratio(cfg);
  tp.P1 = (tp.cop2 - cfg.m1().c) / (1.0 - cfg.m1().p);
  if (net_values(cfg).regime == Regime::NegPos) {
    tp.P2 = cascade_penalty_threshold(cfg, threshold_s0(cfg));
  }
  return tp;
}

Equilibrium optimize_same_sign(const GameConfig& cfg) {
  const NetValues nv = net_values(cfg);
  const double P = cfg.penalty();
  const ThresholdPenalties tp = threshold_penalties(cfg);

  if (nv.regime == Regime::BothPositive) {
    const bool tie = std::abs(tp.cop1 - tp.cop2) <= kThresholdTol;
    const Route route = tp.cop1 <= tp.cop2 + kThresholdTol ? Route::Model1 : Route::Model2;
    return assemble(cfg, static_candidates(cfg), static_pick(route, Provenance::Thm3Case1, tie));
  }
  if (nv.regime == Regime::BothNegative) {
    const bool tie = std::abs(P - tp.incr) <= kThresholdTol;
    if (P <= tp.incr + kThresholdTol) {
      // The user abandons after any failure, so s never matters.
      TheoremPick pick{ProviderPolicy(Route::Model1, 0.0), Provenance::Thm3Case2, 0.0, 1.0, tie};
      return assemble(cfg, static_candidates(cfg), pick);
    }
    return assemble(cfg, static_candidates(cfg), static_pick(Route::Model2, Provenance::Thm3Case2, tie));
  }
  throw RegimeError("optimize_same_sign requires BothPositive or BothNegative but the config is " +
                    std::string(to_string(nv.regime)));
}

Equilibrium optimize_neg_pos(const GameConfig& cfg) {
  const double s0 = threshold_s0(cfg);  // throws RegimeError outside NegPos
  const double P = cfg.penalty();
  const ThresholdPenalties tp = threshold_penalties(cfg);

  std::vector<Candidate> cands = {
      evaluate(cfg, ProviderPolicy(Route::Model1, 0.0)),
      evaluate(cfg, ProviderPolicy(Route::Model1, s0)),
      evaluate(cfg, ProviderPolicy(Route::Model1, 1.0)),
      evaluate(cfg, ProviderPolicy(Route::Model2, 0.0)),
  };

  if (tp.cop1 > tp.cop2 + kThresholdTol) {
    if (P > tp.P1 + kThresholdTol) {
      return assemble(cfg, cands, static_pick(Route::Model2, Provenance::Thm4Case2));
    }
    const bool tie = P >= tp.P1 - kThresholdTol;
    return assemble(cfg, cands, static_pick(Route::Model1, Provenance::Thm4Case1, tie));
  }
  if (tp.cop1 < tp.cop2 - kThresholdTol) {
    const double P2 = *tp.P2;
    if (P > P2 + kThresholdTol) {
      TheoremPick pick{ProviderPolicy(Route::Model1, s0), Provenance::Thm4Case4, s0, s0};
      return assemble(cfg, cands, pick);
    }
    const bool tie = P >= P2 - kThresholdTol;
    return assemble(cfg, cands, static_pick(Route::Model1, Provenance::Thm4Case3, tie));
  }

  // cop1 == cop2: the case table is silent, fall back to the candidate argmin.
  const Candidate best = argmin(cands);
  TheoremPick pick{best.policy, Provenance::FiveCandidateSearch, best.policy.s(), best.policy.s(),
                   true};
  return assemble(cfg, cands, pick);
}

Equilibrium optimize_pos_neg(const GameConfig& cfg) {
  const double s_high = threshold_s_high(cfg);  // throws RegimeError outside PosNeg
  const double s_low = threshold_s_low(cfg);
  const double P = cfg.penalty();
  const ThresholdPenalties tp = threshold_penalties(cfg);

  std::vector<Candidate> cands = {
      evaluate(cfg, ProviderPolicy(Route::Model1, 0.0)),
      evaluate(cfg, ProviderPolicy(Route::Model1, s_low)),
  };
  if (s_high - s_low > 1e-9) cands.push_back(interior_minimum(cfg, s_low, s_high));
  cands.push_back(evaluate(cfg, ProviderPolicy(Route::Model1, s_high)));
  cands.push_back(evaluate(cfg, ProviderPolicy(Route::Model1, 1.0)));
  // Routed straight to model 2 the user abandons on the first failure.
  cands.push_back(evaluate(cfg, ProviderPolicy(Route::Model2, 0.0)));

  const Candidate best = argmin(cands);
  const double tol = kThresholdTol;

  if (tp.cop1 < std::min(P, tp.cop2) - tol) {
    if (!(best.policy == ProviderPolicy(Route::Model1, 0.0))) {
      throw InternalError("optimize_pos_neg: search disagrees with the route-to-model-1 case");
    }
    return assemble(cfg, cands, static_pick(Route::Model1, Provenance::Thm5Case1));
  }
  if (P < std::min(tp.cop1, tp.incr) - tol) {
    if (best.policy.route() != Route::Model1 || best.policy.s() < s_high - 1e-6) {
      throw InternalError("optimize_pos_neg: search disagrees with the cascade-on-failure case");
    }
    TheoremPick pick{ProviderPolicy(Route::Model1, s_high), Provenance::Thm5Case2, s_high, 1.0};
    return assemble(cfg, cands, pick);
  }
  if (tp.incr + tol < P && P < tp.cop2 - tol && tp.cop2 < tp.cop1 - tol) {
    if (best.policy.route() != Route::Model2) {
      throw InternalError("optimize_pos_neg: search disagrees with the route-to-model-2 case");
    }
    return assemble(cfg, cands, static_pick(Route::Model2, Provenance::Thm5Case3));
  }

  TheoremPick pick{best.policy, Provenance::FiveCandidateSearch, best.policy.s(), best.policy.s()};
  if (best.policy.route() == Route::Model1 && best.q >= 1.0) {
    // q = 1 makes every s in [s_high, 1] cost the same.
    pick.s_lo = best.policy.s();
    pick.s_hi = 1.0;
  }
  return assemble(cfg, cands, pick);
}

Equilibrium solve_equilibrium(const GameConfig& cfg) {
  switch (net_values(cfg).regime) {
    case Regime::BothPositive:
    case Regime::BothNegative:
      return optimize_same_sign(cfg);
    case Regime::NegPos:
      return optimize_neg_pos(cfg);
    case Regime::PosNeg:
      return optimize_pos_neg(cfg);
  }
  throw InternalError("solve_equilibrium: unknown regime");
}

Equilibrium brute_force_optimum(const GameConfig& cfg, int s_points, int q_points) {
  if (s_points < 101) throw ValidationError("brute_force_optimum: s_points must be >= 101");
  if (q_points < 101) throw ValidationError("brute_force_optimum: q_points must be >= 101");

  std::vector<double> s_grid;
  s_grid.reserve(s_points + 3);
  for (int k = 0; k < s_points; ++k) s_grid.push_back(static_cast<double>(k) / (s_points - 1));
  switch (net_values(cfg).regime) {
    case Regime::NegPos:
      s_grid.push_back(threshold_s0(cfg));
      break;
    case Regime::PosNeg:
      s_grid.push_back(threshold_s_low(cfg));
      s_grid.push_back(threshold_s_high(cfg));
      break;
    default:
      break;
  }
  std::sort(s_grid.begin(), s_grid.end());
  s_grid.erase(std::unique(s_grid.begin(), s_grid.end()), s_grid.end());

  const double dq = 1.0 / (q_points - 1);
  // Utility-maximizing q by grid search; near-ties go to the smaller q (the
  // user stays when indifferent).
  const auto respond = [&](const ProviderPolicy& policy) {
    const auto utility = [&](double q) {
      return expected_outcomes(cfg, policy, UserResponse(q)).U;
    };
    int best_k = 0;
    double best_u = utility(0.0);
    for (int k = 1; k < q_points; ++k) {
      const double u = utility(k * dq);
      if (u > best_u + kThresholdTol) {
        best_u = u;
        best_k = k;
      }
    }
    double q = best_k * dq;
    const double lo = std::max(0.0, (best_k - 1) * dq);
    const double hi = std::min(1.0, (best_k + 1) * dq);
    const numeric::Minimum refined = numeric::minimize([&](double x) { return -utility(x); }, lo, hi);
    if (-refined.fx > best_u + 1e-13) q = std::clamp(refined.x, 0.0, 1.0);
    return q;
  };

  std::vector<Candidate> cands;
  cands.reserve(s_grid.size() + 1);
  for (double s : s_grid) {
    const ProviderPolicy policy(Route::Model1, s);
    const double q = respond(policy);
    cands.push_back({policy, q, expected_outcomes(cfg, policy, UserResponse(q)).J});
  }
  {
    const ProviderPolicy policy(Route::Model2, 0.0);
    const double q = respond(policy);
    cands.push_back({policy, q, expected_outcomes(cfg, policy, UserResponse(q)).J});
  }

  const Candidate best = argmin(cands);
  Equilibrium eq;
  eq.policy = best.policy;
  eq.q_star = best.q;
  eq.outcomes = expected_outcomes(cfg, best.policy, UserResponse(best.q));
  eq.provenance = Provenance::BruteForce;
  eq.s_admissible_lo = eq.s_admissible_hi = best.policy.s();
  eq.candidates = std::move(cands);
  return eq;
}

}  // namespace routegame

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "routegame/model.hpp"

namespace routegame {

// Which closed-form case, or which search, produced an equilibrium.
enum class Provenance {
  Thm3Case1,  // both models value-dominated: cost-of-pass rule
  Thm3Case2,  // both latency-dominated: penalty vs incremental cost ratio
  Thm4Case1,  // NegPos, cop1 > cop2, P < P1: (1, 0)
  Thm4Case2,  // NegPos, cop1 > cop2, P > P1: (2, 0)
  Thm4Case3,  // NegPos, cop1 < cop2, P < P2: (1, 0)
  Thm4Case4,  // NegPos, cop1 < cop2, P > P2: (1, s0)
  Thm5Case1,  // PosNeg, cop1 < min(P, cop2): (1, 0)
  Thm5Case2,  // PosNeg, P < min(cop1, incr): (1, s) with s in [s_high, 1]
  Thm5Case3,  // PosNeg, incr < P < cop2 < cop1: (2, 0)
  FiveCandidateSearch,  // no closed-form case applies; argmin over the candidates
  BruteForce,
};

std::string_view to_string(Provenance provenance);

// One evaluated (policy, best response) pair.
struct Candidate {
  ProviderPolicy policy;
  double q = 0.0;
  double J = 0.0;
};

struct Equilibrium {
  ProviderPolicy policy{Route::Model1, 0.0};
  double q_star = 0.0;
  Outcomes outcomes;
  Provenance provenance = Provenance::FiveCandidateSearch;
  // Closed interval of cascade probabilities with the same cost; the policy
  // reports its lower end.
  double s_admissible_lo = 0.0;
  double s_admissible_hi = 0.0;
  // Set when the dispatch sat exactly on a theorem threshold (P = P1, P = P2,
  // cop1 = cop2) and the tie rule chose the policy.
  bool boundary_tie = false;
  std::vector<Candidate> candidates;
};

// Penalty thresholds of the NegPos provider problem.
struct ThresholdPenalties {
  double P1 = 0.0;    // (c2/p2 - c1) / (1 - p1)
  std::optional<double> P2;  // J1(s0, 0) rearranged; defined only in NegPos
  double cop1 = 0.0;  // c1 / p1
  double cop2 = 0.0;  // c2 / p2
  double incr = 0.0;  // (c2 - c1) / (p2 - p1)
};

ThresholdPenalties threshold_penalties(const GameConfig& cfg);

// The P2 expression (c1 (1-s) + c2 s / p2) / (p1 + (1-p1) s) at an arbitrary s.
double cascade_penalty_threshold(const GameConfig& cfg, double s);

// Closed-form provider optimum per regime. Each also evaluates the finite
// candidate set that the proofs reduce the problem to, returns its argmin,
// and throws InternalError if the theorem's policy is not optimal.
Equilibrium optimize_same_sign(const GameConfig& cfg);
Equilibrium optimize_neg_pos(const GameConfig& cfg);
Equilibrium optimize_pos_neg(const GameConfig& cfg);

Equilibrium solve_equilibrium(const GameConfig& cfg);

// Grid oracle for solve_equilibrium: uniform s grid (plus the analytic
// thresholds), user response by grid argmax of U with local refinement,
// provider argmin of J. Independent of the theorem dispatch.
Equilibrium brute_force_optimum(const GameConfig& cfg, int s_points = 1001, int q_points = 1001);

}  // namespace routegame

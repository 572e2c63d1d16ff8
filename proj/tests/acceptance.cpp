// Acceptance suite: one PASS/FAIL line per criterion. argv[1] is the path of
// the routing-game executable (used by the determinism check).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "routegame/analysis.hpp"
#include "routegame/errors.hpp"
#include "routegame/mc_oracle.hpp"
#include "routegame/provider.hpp"
#include "routegame/user_response.hpp"
#include "support/oracles.hpp"

using namespace routegame;
using rgtest::make_config;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fixed(double x, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

constexpr std::array<Regime, 4> kRegimes = {Regime::BothPositive, Regime::BothNegative,
                                            Regime::NegPos, Regime::PosNeg};

// --- 1: closed forms against the Monte-Carlo chain ---------------------------

Verdict closed_form_vs_simulation() {
  rgtest::ConfigSampler sampler(1001);
  int checks = 0;
  int hits = 0;
  int truncated = 0;
  for (int k = 0; k < 50; ++k) {
    const GameConfig cfg = sampler.in(kRegimes[k % 4]);
    const double sa = sampler.uniform(0.0, 1.0);
    const double sb = sampler.uniform(0.0, 1.0);
    const auto best = [&](Route r, double s) {
      return user_best_response(cfg, ProviderPolicy(r, s)).q_star;
    };
    const std::array<std::pair<ProviderPolicy, double>, 5> cases = {{
        {ProviderPolicy(Route::Model1, 0.0), best(Route::Model1, 0.0)},
        {ProviderPolicy(Route::Model1, sa), sampler.uniform(0.0, 1.0)},
        {ProviderPolicy(Route::Model1, 1.0), sampler.uniform(0.0, 1.0)},
        {ProviderPolicy(Route::Model2, 0.0), sampler.uniform(0.0, 1.0)},
        {ProviderPolicy(Route::Model1, sb), best(Route::Model1, sb)},
    }};
    for (int j = 0; j < 5; ++j) {
      const auto& [pol, q] = cases[j];
      const Outcomes closed = expected_outcomes(cfg, pol, UserResponse(q));
      const mc::McEstimate est =
          mc::estimate(cfg, pol, UserResponse(q), 200'000, static_cast<std::uint64_t>(k * 5 + j));
      if (!est.accepted()) ++truncated;
      for (auto m : {&Outcomes::S, &Outcomes::L, &Outcomes::C, &Outcomes::U, &Outcomes::J}) {
        ++checks;
        const double err = std::abs(closed.*m - est.mean.*m);
        // The 1e-12 term only absorbs rounding when a functional has zero variance.
        if (est.accepted() && err <= 4.0 * est.std_error.*m + 1e-12 * (1.0 + std::abs(closed.*m))) {
          ++hits;
        }
      }
    }
  }
  const double rate = static_cast<double>(hits) / checks;
  return {rate >= 0.99 && truncated == 0,
          std::to_string(hits) + "/" + std::to_string(checks) + " checks within 4 SE (" +
              fixed(100 * rate) + "%), truncated estimates: " + std::to_string(truncated)};
}

// --- 2: best response against a q grid ---------------------------------------

Verdict best_response_optimality() {
  rgtest::ConfigSampler sampler(2002);
  int bad = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const GameConfig cfg = sampler.in(kRegimes[k % 4]);
    const Route route = k % 5 == 0 ? Route::Model2 : Route::Model1;
    const double s = sampler.uniform(0.0, 1.0);
    const double q = user_best_response(cfg, ProviderPolicy(route, s)).q_star;
    const double u = rgtest::chain_oracle(cfg, route, s, q).U;
    const double grid = rgtest::grid_best_q(cfg, route, s, 1001).U;
    worst = std::max(worst, grid - u);
    if (u < grid - 1e-9) ++bad;
  }
  return {bad == 0, "1000 configs, violations: " + std::to_string(bad) +
                        ", worst grid excess: " + sci(worst)};
}

// --- 3: closed-form dispatch against brute force ------------------------------

std::optional<Provenance> expected_case(const GameConfig& cfg) {
  constexpr double d = 1e-9;
  const double x1 = rgtest::xi(cfg, 1);
  const double x2 = rgtest::xi(cfg, 2);
  const double cop1 = rgtest::cop(cfg, 1);
  const double cop2 = rgtest::cop(cfg, 2);
  const double inc = rgtest::incr(cfg);
  const double P = cfg.penalty();
  const double p1 = cfg.m1().p;
  const double p2 = cfg.m2().p;
  switch (rgtest::regime_of(x1, x2)) {
    case Regime::BothPositive: return Provenance::Thm3Case1;
    case Regime::BothNegative: return Provenance::Thm3Case2;
    case Regime::NegPos: {
      const double P1 = (cop2 - cfg.m1().c) / (1 - p1);
      const double s0 = rgtest::s0_direct(cfg);
      const double P2 = (cfg.m1().c * (1 - s0) + cfg.m2().c * s0 / p2) / (p1 + (1 - p1) * s0);
      if (cop1 > cop2 + d && P < P1 - d) return Provenance::Thm4Case1;
      if (cop1 > cop2 + d && P > P1 + d) return Provenance::Thm4Case2;
      if (cop1 < cop2 - d && P < P2 - d) return Provenance::Thm4Case3;
      if (cop1 < cop2 - d && P > P2 + d) return Provenance::Thm4Case4;
      return std::nullopt;
    }
    case Regime::PosNeg:
      if (cop1 < std::min(P, cop2) - d) return Provenance::Thm5Case1;
      if (P < std::min(cop1, inc) - d) return Provenance::Thm5Case2;
      if (inc + d < P && P < cop2 - d && cop2 < cop1 - d) return Provenance::Thm5Case3;
      if (std::abs(cop1 - P) > d && std::abs(cop1 - cop2) > d && std::abs(P - inc) > d &&
          std::abs(P - cop2) > d) {
        return Provenance::FiveCandidateSearch;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

Verdict theorem_vs_brute_force() {
  rgtest::ConfigSampler sampler(3003);
  int j_bad = 0;
  int prov_checked = 0;
  int prov_bad = 0;
  double worst = 0.0;
  std::map<std::string, int> seen;
  for (int k = 0; k < 1000; ++k) {
    const GameConfig cfg = sampler.in(kRegimes[k % 4]);
    const Equilibrium eq = solve_equilibrium(cfg);
    const Equilibrium bf = brute_force_optimum(cfg, 1001, 1001);
    const double diff = std::abs(eq.outcomes.J - bf.outcomes.J);
    worst = std::max(worst, diff);
    if (diff > 1e-6) ++j_bad;
    ++seen[std::string(to_string(eq.provenance))];
    if (const auto want = expected_case(cfg)) {
      ++prov_checked;
      if (*want != eq.provenance) ++prov_bad;
    }
  }
  std::string cases;
  for (const auto& [name, count] : seen) cases += " " + name + "=" + std::to_string(count);
  return {j_bad == 0 && prov_bad == 0,
          "J mismatches: " + std::to_string(j_bad) + " (worst " + sci(worst) +
              "), provenance mismatches: " + std::to_string(prov_bad) + "/" +
              std::to_string(prov_checked) + ";" + cases};
}

// --- 4: user-response quadrant map -------------------------------------------

Verdict user_response_map() {
  // p = (0.25, 0.75), V = 1 keeps every (xi1, xi2) in [-0.2, 0.2]^2 a valid game.
  const GameConfig base = make_config(0.25, 0.75, 0.1, 0.3, 0.1, 0.4, 1.0, 0.5);
  constexpr double s = 0.25;
  SweepOptions opt;
  opt.fixed_policy = ProviderPolicy(Route::Model1, s);
  const auto recs = sweep(base, AxisSpec::parse("xi1:-0.2:0.2"), AxisSpec::parse("xi2:-0.2:0.2"),
                          101, 101, opt);
  int mismatches = 0;
  int infeasible = 0;
  int interior = 0;
  int interior_outside = 0;
  int on_threshold = 0;
  std::map<Regime, int> cells;
  for (const SweepRecord& r : recs) {
    if (!r.feasible) {
      ++infeasible;
      continue;
    }
    const GameConfig cfg = make_config(0.25, 0.75, 0.25 - r.a1, 0.75 - r.a2, 0.1, 0.4, 1.0, 0.5);
    const Regime regime = rgtest::regime_of(cfg);
    ++cells[regime];
    if (regime != r.regime) ++mismatches;
    // Expected category: 0 stay, 1 abandon, 2 interior. A cell whose threshold
    // equals s up to rounding takes the tie rule: stay at s0 and s_L, abandon at s_H.
    constexpr double tie = 1e-12;
    int want = 0;
    switch (regime) {
      case Regime::BothPositive: want = 0; break;
      case Regime::BothNegative: want = 1; break;
      case Regime::NegPos: {
        const double s0 = rgtest::s0_direct(cfg);
        on_threshold += std::abs(s - s0) <= tie;
        want = s < s0 - tie ? 1 : 0;
        break;
      }
      case Regime::PosNeg: {
        const double sl = rgtest::s_low_bisect(cfg);
        const double sh = rgtest::s_high_direct(cfg);
        on_threshold += std::abs(s - sl) <= tie || std::abs(s - sh) <= tie;
        want = s <= sl + tie ? 0 : s >= sh - tie ? 1 : 2;
        break;
      }
    }
    const double u = rgtest::chain_oracle(cfg, Route::Model1, s, r.q_star).U;
    if (u < rgtest::grid_best_q(cfg, Route::Model1, s, 1001).U - 1e-9) ++mismatches;
    const int got = r.q_star == 0.0 ? 0 : r.q_star == 1.0 ? 1 : 2;
    if (got != want) ++mismatches;
    if (got == 2) {
      ++interior;
      if (regime != Regime::PosNeg) ++interior_outside;
      const rgtest::GridBest g = rgtest::grid_best_q(cfg, Route::Model1, s, 10001);
      if (std::abs(g.q - r.q_star) > 2e-4) ++mismatches;
    }
  }
  const bool all_quadrants = cells.size() == 4;
  return {mismatches == 0 && infeasible == 0 && interior > 0 && interior_outside == 0 && all_quadrants,
          "101x101 cells, mismatches: " + std::to_string(mismatches) +
              ", interior cells: " + std::to_string(interior) + " (outside PosNeg: " +
              std::to_string(interior_outside) + "), cells on a threshold: " +
              std::to_string(on_threshold) + ", infeasible: " + std::to_string(infeasible)};
}

// --- 5: provider policy regions ----------------------------------------------

// 0: (1, 0); 1: (1, s > 0); 2: (2, 0)
int policy_class(int i, double s) { return i == 2 ? 2 : s > 0.0 ? 1 : 0; }

struct RegionCheck {
  int cells = 0;
  int mismatches = 0;
  int unexcused = 0;
  int boundaries = 0;
  std::array<int, 3> classes{};
};

// Mismatches between swept and analytic classes are allowed only in cells
// adjacent (8-neighbourhood) to a change of the analytic label.
RegionCheck compare_regions(const std::vector<SweepRecord>& recs, int n1, int n2,
                            const std::function<int(const SweepRecord&)>& analytic) {
  RegionCheck out;
  std::vector<int> label(recs.size(), -2);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    if (recs[k].feasible) label[k] = analytic(recs[k]);
  }
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n2; ++b) {
      const std::size_t k = static_cast<std::size_t>(a * n2 + b);
      if (!recs[k].feasible) continue;
      ++out.cells;
      const int got = policy_class(recs[k].i_star, recs[k].s_star);
      ++out.classes[got];
      if (b + 1 < n2 && recs[k + 1].feasible &&
          got != policy_class(recs[k + 1].i_star, recs[k + 1].s_star)) {
        ++out.boundaries;
      }
      if (got == label[k]) continue;
      ++out.mismatches;
      bool near_curve = label[k] == -1;
      for (int da = -1; da <= 1 && !near_curve; ++da) {
        for (int db = -1; db <= 1; ++db) {
          const int x = a + da;
          const int y = b + db;
          if (x < 0 || y < 0 || x >= n1 || y >= n2) continue;
          if (label[static_cast<std::size_t>(x * n2 + y)] != label[k]) near_curve = true;
        }
      }
      if (!near_curve) ++out.unexcused;
    }
  }
  return out;
}

Verdict policy_regions() {
  // NegPos: xi = (-0.1, 0.4), c1 fixed at 0.1.
  constexpr int n1 = 81;
  constexpr int n2 = 99;
  const GameConfig np = make_config(0.3, 0.9, 0.4, 0.5, 0.1, 0.36, 1.0, 0.5);
  const auto np_recs = sweep(np, AxisSpec::parse("cop_gap:-0.6:0.2"), AxisSpec::parse("P:0.02:1"), n1, n2);
  const RegionCheck a = compare_regions(np_recs, n1, n2, [](const SweepRecord& r) {
    const double c2 = 0.9 * (0.1 / 0.3 - r.a1);
    const GameConfig cfg = make_config(0.3, 0.9, 0.4, 0.5, 0.1, c2, 1.0, r.a2);
    const double cop1 = rgtest::cop(cfg, 1);
    const double cop2 = rgtest::cop(cfg, 2);
    if (cop1 == cop2) return -1;
    if (cop1 > cop2) {
      const double P1 = (cop2 - 0.1) / 0.7;
      return r.a2 < P1 ? 0 : 2;
    }
    const double s0 = rgtest::s0_direct(cfg);
    const double P2 = (0.1 * (1 - s0) + c2 * s0 / 0.9) / (0.3 + 0.7 * s0);
    return r.a2 < P2 ? 0 : 1;
  });

  // PosNeg: xi = (0.5, -0.1), c1 fixed at 0.5. Cells outside the sufficient
  // conditions are labelled by the five-candidate minimum from the chain oracle.
  constexpr int m1 = 61;
  constexpr int m2 = 75;
  const GameConfig pn = make_config(0.6, 0.8, 0.1, 0.9, 0.5, 0.6, 1.0, 0.6);
  const auto pn_recs = sweep(pn, AxisSpec::parse("cop_gap:-0.4:0.2"), AxisSpec::parse("P:0.02:1.5"), m1, m2);
  int five_candidate_cells = 0;
  const RegionCheck b = compare_regions(pn_recs, m1, m2, [&](const SweepRecord& r) {
    const double c2 = 0.8 * (0.5 / 0.6 - r.a1);
    const GameConfig cfg = make_config(0.6, 0.8, 0.1, 0.9, 0.5, c2, 1.0, r.a2);
    const double cop1 = rgtest::cop(cfg, 1);
    const double cop2 = rgtest::cop(cfg, 2);
    const double inc = rgtest::incr(cfg);
    const double P = r.a2;
    if (cop1 < std::min(P, cop2)) return 0;
    if (P < std::min(cop1, inc)) return 1;
    if (inc < P && P < cop2 && cop2 < cop1) return 2;
    ++five_candidate_cells;
    const double sl = rgtest::s_low_bisect(cfg);
    const double sh = rgtest::s_high_direct(cfg);
    const auto J = [&](Route route, double s) {
      return rgtest::chain_oracle(cfg, route, s, rgtest::grid_best_q(cfg, route, s, 201).q).J;
    };
    std::vector<std::pair<double, int>> cands = {
        {J(Route::Model1, 0.0), 0}, {J(Route::Model1, sl), 1}, {J(Route::Model1, 1.0), 1},
        {J(Route::Model2, 0.0), 2}};
    for (int k = 1; k < 40; ++k) cands.push_back({J(Route::Model1, sl + (sh - sl) * k / 40.0), 1});
    const auto best = std::min_element(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
      return x.first < y.first - 1e-12;
    });
    return best->second;
  });

  const bool np_ok = a.unexcused == 0 && a.classes[0] > 0 && a.classes[1] > 0 && a.classes[2] > 0;
  const bool pn_ok = b.unexcused == 0 && b.classes[0] > 0 && b.classes[1] > 0 && b.classes[2] > 0;
  const auto describe = [](const char* name, const RegionCheck& c) {
    return std::string(name) + ": " + std::to_string(c.cells) + " cells, " +
           std::to_string(c.boundaries) + " boundary crossings, off-curve mismatches " +
           std::to_string(c.unexcused) + " (near-curve " + std::to_string(c.mismatches - c.unexcused) + ")";
  };
  return {np_ok && pn_ok, describe("NegPos", a) + "; " + describe("PosNeg", b) +
                              ", five-candidate cells " + std::to_string(five_candidate_cells)};
}

// --- 6: misalignment iff -----------------------------------------------------

int sign(double x) { return (x > 0) - (x < 0); }

Verdict misalignment_iff() {
  rgtest::ConfigSampler sampler(6006);
  constexpr double band = 1e-6;
  int evaluated = 0;
  int excluded = 0;
  int exceptions = 0;
  int disagreements = 0;
  int user_opt_beaten = 0;
  std::map<Regime, std::array<int, 2>> split;  // aligned, misaligned
  for (Regime regime : kRegimes) {
    for (int k = 0; k < 10'000; ++k) {
      const GameConfig cfg = sampler.in(regime);
      const double x1 = rgtest::xi(cfg, 1);
      const double x2 = rgtest::xi(cfg, 2);
      MisalignmentReport rep;
      try {
        rep = misalignment_gap(cfg);
      } catch (const InternalError&) {
        ++exceptions;
        continue;
      }
      bool predicate = false;
      double margin = std::min(std::abs(x1), std::abs(x2));
      switch (regime) {
        case Regime::BothPositive: {
          const double lhs = rgtest::cop(cfg, 1) - rgtest::cop(cfg, 2);
          const double rhs = x2 / cfg.m2().p - x1 / cfg.m1().p;
          predicate = sign(lhs) == sign(rhs);
          margin = std::min({margin, std::abs(lhs), std::abs(rhs)});
          break;
        }
        case Regime::BothNegative: {
          const double lhs = x2 - x1;
          const double rhs = cfg.penalty() - rgtest::incr(cfg);
          predicate = sign(lhs) == sign(rhs);
          margin = std::min({margin, std::abs(lhs), std::abs(rhs)});
          break;
        }
        default: {
          const Equilibrium& eq = rep.provider_opt;
          const double xs = eq.policy.route() == Route::Model1 ? x1 : x2;
          predicate = xs > 0 && eq.policy.s() == 0.0;
          if (eq.policy.s() > 0.0) margin = std::min(margin, eq.policy.s());
          break;
        }
      }
      if (margin < band) {
        ++excluded;
        continue;
      }
      ++evaluated;
      const bool zero_gap = rep.delta_u <= 1e-9;
      if (predicate != zero_gap) ++disagreements;
      ++split[regime][zero_gap ? 0 : 1];
      // The reported user optimum must not be beaten by a policy grid.
      if (k % 10 == 0) {
        double grid = rgtest::grid_best_q(cfg, Route::Model2, 0.0, 201).U;
        for (int j = 0; j <= 20; ++j) {
          grid = std::max(grid, rgtest::grid_best_q(cfg, Route::Model1, j / 20.0, 201).U);
        }
        if (rep.user_opt.U < grid - 1e-9) ++user_opt_beaten;
      }
    }
  }
  bool both_sides = true;
  for (const auto& [r, counts] : split) both_sides = both_sides && counts[0] > 0 && counts[1] > 0;
  return {exceptions == 0 && disagreements == 0 && user_opt_beaten == 0 && both_sides,
          std::to_string(evaluated) + " configs (" + std::to_string(excluded) +
              " in the boundary band), disagreements: " + std::to_string(disagreements) +
              ", exceptions: " + std::to_string(exceptions) +
              ", user optimum beaten by grid: " + std::to_string(user_opt_beaten)};
}

// --- 7: throttling -------------------------------------------------------------

GameConfig with_penalty(const GameConfig& cfg, double P) {
  return GameConfig::create(cfg.m1(), cfg.m2(), cfg.value(), P);
}

double full_throttle_gain(const GameConfig& cfg) {
  return throttle_analysis(cfg).variant(ThrottleVariant::Both).gain;
}

double static_gain_formula(const GameConfig& cfg) {
  const double P = cfg.penalty();
  return std::min(rgtest::cop(cfg, 1), rgtest::cop(cfg, 2)) -
         std::min(cfg.m1().c + P * (1 - cfg.m1().p), cfg.m2().c + P * (1 - cfg.m2().p));
}

Verdict throttling() {
  rgtest::ConfigSampler sampler(7007);
  int negative = 0;
  double worst_gain = 0.0;
  for (int k = 0; k < 10'000; ++k) {
    const GameConfig raw = sampler.any();
    const double mc = std::min(rgtest::cop(raw, 1), rgtest::cop(raw, 2));
    const GameConfig cfg = with_penalty(raw, sampler.uniform(0.0, 1.0) * mc + 1e-9);
    const ThrottleReport rep = throttle_analysis(cfg);
    const double g = std::min(rep.gain, rep.variant(ThrottleVariant::Both).gain);
    worst_gain = std::min(worst_gain, g);
    if (g < -1e-9) ++negative;
  }

  int formula_bad = 0;
  double worst_formula = 0.0;
  int collinear_bad = 0;
  double worst_collinear = 0.0;
  for (int k = 0; k < 10'000; ++k) {
    const GameConfig raw = sampler.in(Regime::BothPositive);
    const double mc = std::min(rgtest::cop(raw, 1), rgtest::cop(raw, 2));
    const GameConfig cfg = with_penalty(raw, sampler.uniform(0.0, 1.0) * mc + 1e-9);
    const double err = std::abs(full_throttle_gain(cfg) - static_gain_formula(cfg));
    worst_formula = std::max(worst_formula, err);
    if (err > 1e-9) ++formula_bad;
    if (k % 10 != 0) continue;
    // Three penalties on one linear piece: the inner minimum switches models at P = incr.
    const double inc = rgtest::incr(raw);
    const double lo = inc < mc && sampler.uniform(0.0, 1.0) < 0.5 ? inc : 0.0;
    const double hi = lo > 0.0 ? mc : std::min(mc, inc);
    const double Pa = lo + 0.1 * (hi - lo);
    const double Pb = lo + 0.45 * (hi - lo);
    const double Pc = lo + 0.9 * (hi - lo);
    const double ga = full_throttle_gain(with_penalty(raw, Pa));
    const double gb = full_throttle_gain(with_penalty(raw, Pb));
    const double gc = full_throttle_gain(with_penalty(raw, Pc));
    const double dev = std::abs(gb - (ga + (gc - ga) * (Pb - Pa) / (Pc - Pa)));
    worst_collinear = std::max(worst_collinear, dev);
    if (dev > 1e-9) ++collinear_bad;
  }

  // P sweeps across the dashed line P = min cost-of-pass.
  int flips_bad = 0;
  for (int k = 0; k < 8; ++k) {
    const GameConfig base = sampler.in(Regime::BothPositive);
    const double mc = std::min(rgtest::cop(base, 1), rgtest::cop(base, 2));
    const AxisSpec axis{"P", 0.3 * mc, 1.7 * mc};
    const auto recs = sweep(base, axis, AxisSpec{"V", base.value(), base.value()}, 80, 1);
    for (const SweepRecord& r : recs) {
      if (!r.feasible) continue;
      if (r.a1 < mc - 1e-12 && !(r.throttle_gain > 0.0)) ++flips_bad;
      if (r.a1 > mc + 1e-12 && !(r.throttle_gain < 0.0)) ++flips_bad;
    }
  }
  return {negative == 0 && formula_bad == 0 && collinear_bad == 0 && flips_bad == 0,
          "gain < -1e-9: " + std::to_string(negative) + "/10000 (min " + sci(worst_gain) +
              "); static formula misses: " + std::to_string(formula_bad) + " (worst " +
              sci(worst_formula) + "); collinearity misses: " + std::to_string(collinear_bad) +
              " (worst " + sci(worst_collinear) + "); sign-flip violations on P sweeps: " +
              std::to_string(flips_bad)};
}

// --- 8: structural properties -----------------------------------------------

Verdict structural_properties() {
  rgtest::ConfigSampler sampler(8008);
  constexpr int n = 10'000;
  std::array<int, 6> bad{};

  for (int k = 0; k < n; ++k) {
    // Provider objective monotone in s for fixed q.
    const GameConfig cfg = sampler.any();
    const double q = sampler.uniform(0.0, 1.0);
    int ups = 0;
    int downs = 0;
    double prev = expected_outcomes(cfg, ProviderPolicy(Route::Model1, 0.0), UserResponse(q)).J;
    for (int j = 1; j <= 10; ++j) {
      const double cur =
          expected_outcomes(cfg, ProviderPolicy(Route::Model1, j / 10.0), UserResponse(q)).J;
      ups += cur > prev + 1e-13;
      downs += cur < prev - 1e-13;
      prev = cur;
    }
    if (ups > 0 && downs > 0) ++bad[0];
  }

  for (int k = 0; k < n; ++k) {
    // Utility envelopes and their monotonicity in q.
    const GameConfig cfg = sampler.any();
    const double x1 = rgtest::xi(cfg, 1);
    const double x2 = rgtest::xi(cfg, 2);
    const double p1 = cfg.m1().p;
    const double p2 = cfg.m2().p;
    const double s = sampler.uniform(0.0, 1.0);
    const double q = sampler.uniform(0.0, 1.0);
    const auto alpha = [&](double qq) { return (1 - p1) * (1 - qq); };
    const auto u_plus = [&](double a) { return (x1 + x2 * a * s / p2) / (1 - a * (1 - s)); };
    const auto u_minus = [&](double a) { return (x1 + x2 * a * s) / (1 - a * (1 - s)); };
    const double u = expected_outcomes(cfg, ProviderPolicy(Route::Model1, s), UserResponse(q)).U;
    const double lo = x2 >= 0 ? u_minus(alpha(q)) : u_plus(alpha(q));
    const double hi = x2 >= 0 ? u_plus(alpha(q)) : u_minus(alpha(q));
    if (u < lo - 1e-12 || u > hi + 1e-12) ++bad[1];

    const double q2 = std::min(1.0, q + sampler.uniform(0.01, 0.5));
    const double k_plus = x1 * (1 - s) + x2 * s / p2;
    const double k_minus = x1 * (1 - s) + x2 * s;
    const double dp = u_plus(alpha(q2)) - u_plus(alpha(q));
    const double dm = u_minus(alpha(q2)) - u_minus(alpha(q));
    if (k_plus > 1e-12 && dp > 1e-14) ++bad[2];
    if (k_plus < -1e-12 && dp < -1e-14) ++bad[2];
    if (k_minus > 1e-12 && dm > 1e-14) ++bad[2];
    if (k_minus < -1e-12 && dm < -1e-14) ++bad[2];
  }

  for (int k = 0; k < n; ++k) {
    // P1 against the incremental cost ratio.
    const GameConfig cfg = sampler.any();
    const ThresholdPenalties tp = threshold_penalties(cfg);
    const double P1 = (rgtest::cop(cfg, 2) - cfg.m1().c) / (1 - cfg.m1().p);
    const double inc = rgtest::incr(cfg);
    if (std::abs(tp.P1 - P1) > 1e-12 * (1 + std::abs(P1))) ++bad[3];
    if (rgtest::cop(cfg, 1) > rgtest::cop(cfg, 2) ? !(P1 > inc) : !(P1 <= inc * (1 + 1e-12))) {
      ++bad[3];
    }
  }

  for (int k = 0; k < n;) {
    // P2 strictly between the costs-of-pass.
    const GameConfig cfg = sampler.in(Regime::NegPos);
    const double cop1 = rgtest::cop(cfg, 1);
    const double cop2 = rgtest::cop(cfg, 2);
    if (!(cop1 < cop2)) continue;
    ++k;
    const ThresholdPenalties tp = threshold_penalties(cfg);
    if (!tp.P2 || !(*tp.P2 > cop1 && *tp.P2 < cop2)) ++bad[4];
  }

  for (int k = 0; k < n; ++k) {
    // Success floor and the cost ratio as a convex combination.
    const GameConfig cfg = sampler.any();
    const double s = sampler.uniform(0.0, 1.0);
    const double q = sampler.uniform(0.0, 1.0);
    const Outcomes o = expected_outcomes(cfg, ProviderPolicy(Route::Model1, s), UserResponse(q));
    if (o.S < cfg.m1().p - 1e-15) ++bad[5];
    const double beta = 1.0 / (cfg.m2().p + (1 - cfg.m2().p) * q);
    const double ratio = (cfg.m1().c * (1 - s) + beta * cfg.m2().c * s) /
                         (cfg.m1().p * (1 - s) + beta * cfg.m2().p * s);
    const double lo = std::min(rgtest::cop(cfg, 1), rgtest::cop(cfg, 2));
    const double hi = std::max(rgtest::cop(cfg, 1), rgtest::cop(cfg, 2));
    if (ratio < lo * (1 - 1e-12) || ratio > hi * (1 + 1e-12)) ++bad[5];
  }

  const char* names[] = {"monotone-in-s", "envelopes", "envelope-slopes", "P1-order",
                         "P2-between", "success-floor/cost-ratio"};
  std::string detail = std::to_string(n) + " inputs each;";
  bool ok = true;
  for (int j = 0; j < 6; ++j) {
    detail += std::string(" ") + names[j] + "=" + std::to_string(bad[j]);
    ok = ok && bad[j] == 0;
  }
  return {ok, detail + " failures"};
}

// --- 9: byte-identical CLI output ---------------------------------------------

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  status = pclose(pipe);
  return out;
}

Verdict cli_determinism(const std::string& exe) {
  namespace fs = std::filesystem;
  const fs::path cfg_path = fs::temp_directory_path() / "routegame_acceptance_cfg.json";
  std::ofstream(cfg_path)
      << R"({"p1": 0.6, "p2": 0.8, "t1": 0.1, "t2": 0.9, "c1": 0.5, "c2": 0.6, "V": 1, "P": 0.6})";
  const std::string base = "\"" + exe + "\" ";
  const std::string cfg = " --config \"" + cfg_path.string() + "\"";
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"solve", base + "solve" + cfg},
      {"sweep", base + "sweep" + cfg + " --axis1 cop_gap:-0.4:0.2 --axis2 P:0.02:1.5 --res 25x25"},
      {"simulate", base + "simulate" + cfg + " --i 1 --s 0.8 --n 100000 --seed 17"},
  };
  const std::vector<std::pair<std::string, std::string>> worker_variants = {
      {"sweep", " --workers 1"}, {"sweep", " --workers 3"},
      {"simulate", " --workers 1"}, {"simulate", " --workers 3"}};
  std::string detail;
  bool ok = true;
  for (const auto& [name, cmd] : runs) {
    int s1 = 0;
    int s2 = 0;
    const std::string a = run_capture(cmd, s1);
    const std::string b = run_capture(cmd, s2);
    bool same = s1 == 0 && s2 == 0 && !a.empty() && a == b;
    for (const auto& [vname, flag] : worker_variants) {
      if (vname != name) continue;
      int s3 = 0;
      same = same && run_capture(cmd + flag, s3) == a && s3 == 0;
    }
    ok = ok && same;
    detail += name + (same ? " identical" : " DIFFERS") + " (" + std::to_string(a.size()) + " bytes); ";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-routing-game>\n";
    return 2;
  }
  const std::string exe = argv[1];
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0: no runtime bound
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "closed forms vs Monte-Carlo oracle", 60, closed_form_vs_simulation},
      {2, "best-response optimality", 10, best_response_optimality},
      {3, "closed-form provider optimum vs brute force", 120, theorem_vs_brute_force},
      {4, "user-response quadrant map", 0, user_response_map},
      {5, "provider policy regions", 0, policy_regions},
      {6, "alignment predicate iff zero gap", 0, misalignment_iff},
      {7, "throttling gain", 0, throttling},
      {8, "structural property suite", 0, structural_properties},
      {9, "byte-identical CLI output", 0, [&] { return cli_determinism(exe); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = v.pass;
    std::string timing = fixed(secs) + " s";
    if (c.budget_s > 0) {
      timing += " of " + fixed(c.budget_s, 0) + " s budget";
      pass = pass && secs <= c.budget_s;
    }
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": "
              << v.detail << " [" << timing << "]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

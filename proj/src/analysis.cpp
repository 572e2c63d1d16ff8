#include "routegame/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "routegame/errors.hpp"
#include "routegame/format.hpp"
#include "routegame/parallel.hpp"
#include "routegame/user_response.hpp"

namespace routegame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign(double x) { return (x > 0.0) - (x < 0.0); }

UserOptimum user_optimum_at(const GameConfig& cfg, Route route) {
  const ProviderPolicy policy(route, 0.0);
  const double q = user_best_response(cfg, policy).q_star;
  return {policy, q, expected_outcomes(cfg, policy, UserResponse(q)).U};
}

AlignmentPredicate alignment_predicate(const GameConfig& cfg, const NetValues& nv,
                                       const Equilibrium& eq) {
  const double p1 = cfg.m1().p;
  const double p2 = cfg.m2().p;
  const double regime_margin = std::min(std::abs(nv.xi1), std::abs(nv.xi2));
  AlignmentPredicate pred;
  switch (nv.regime) {
    case Regime::BothPositive:
      pred.item = 1;
      pred.lhs = cost_of_pass(cfg.m1()) - cost_of_pass(cfg.m2());
      pred.rhs = nv.xi2 / p2 - nv.xi1 / p1;
      pred.holds = sign(pred.lhs) == sign(pred.rhs);
      pred.margin = std::min({std::abs(pred.lhs), std::abs(pred.rhs), regime_margin});
      break;
    case Regime::BothNegative:
      pred.item = 2;
      pred.lhs = nv.xi2 - nv.xi1;
      pred.rhs = cfg.penalty() - incremental_cost_ratio(cfg);
      pred.holds = sign(pred.lhs) == sign(pred.rhs);
      pred.margin = std::min({std::abs(pred.lhs), std::abs(pred.rhs), regime_margin});
      break;
    case Regime::NegPos:
    case Regime::PosNeg: {
      pred.item = 3;
      pred.lhs = eq.policy.route() == Route::Model1 ? nv.xi1 : nv.xi2;
      pred.rhs = eq.policy.s();
      pred.holds = pred.lhs > 0.0 && pred.rhs == 0.0;
      pred.margin = std::min({std::abs(pred.lhs), pred.rhs > 0.0 ? pred.rhs : kInf, regime_margin});
      break;
    }
  }
  return pred;
}

std::array<double, 2> throttled_latencies(const GameConfig& cfg, ThrottleVariant variant,
                                          double epsilon) {
  const double V = cfg.value();
  const auto raise = [&](const ModelParams& m) { return std::max(m.t, V * m.p + epsilon); };
  double t1 = cfg.m1().t;
  double t2 = cfg.m2().t;
  if (variant != ThrottleVariant::Model2) t1 = raise(cfg.m1());
  if (variant != ThrottleVariant::Model1) t2 = raise(cfg.m2());
  return {t1, t2};
}

// Applies one axis value. Raw parameters first, composites afterwards, so a
// composite sees the final V, p and c1.
bool is_composite(const std::string& name) {
  return name == "xi1" || name == "xi2" || name == "cop_gap";
}

struct RawParams {
  ModelParams m1;
  ModelParams m2;
  double V = 0.0;
  double P = 0.0;
};

void apply_axis(RawParams& r, const std::string& name, double x) {
  if (name == "p1") r.m1.p = x;
  else if (name == "p2") r.m2.p = x;
  else if (name == "t1") r.m1.t = x;
  else if (name == "t2") r.m2.t = x;
  else if (name == "c1") r.m1.c = x;
  else if (name == "c2") r.m2.c = x;
  else if (name == "V") r.V = x;
  else if (name == "P") r.P = x;
  else if (name == "xi1") r.m1.t = r.V * r.m1.p - x;
  else if (name == "xi2") r.m2.t = r.V * r.m2.p - x;
  else if (name == "cop_gap") r.m2.c = r.m2.p * (r.m1.c / r.m1.p - x);
  else throw ValidationError("unknown sweep axis '" + name + "'");
}

void check_axis(const AxisSpec& axis) {
  static const char* known[] = {"p1", "p2", "t1", "t2", "c1", "c2", "V", "P", "xi1", "xi2", "cop_gap"};
  if (std::find(std::begin(known), std::end(known), axis.name) == std::end(known)) {
    throw ValidationError("unknown sweep axis '" + axis.name +
                          "' (expected one of p1 p2 t1 t2 c1 c2 V P xi1 xi2 cop_gap)");
  }
  if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi)) {
    throw ValidationError("sweep axis '" + axis.name + "' needs finite bounds");
  }
}

double axis_value(const AxisSpec& axis, int k, int n) {
  if (n == 1) return axis.lo;
  return axis.lo + (axis.hi - axis.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

UserOptimum user_optimal_route(const GameConfig& cfg) {
  const NetValues nv = net_values(cfg);
  switch (nv.regime) {
    case Regime::BothPositive:
      // Model 1 (without cascading) wins iff xi1/p1 >= xi2/p2.
      return user_optimum_at(cfg, nv.xi1 / cfg.m1().p >= nv.xi2 / cfg.m2().p ? Route::Model1
                                                                              : Route::Model2);
    case Regime::BothNegative:
      // The user abandons after one pass either way.
      return user_optimum_at(cfg, nv.xi1 >= nv.xi2 ? Route::Model1 : Route::Model2);
    case Regime::NegPos:
      return user_optimum_at(cfg, Route::Model2);
    case Regime::PosNeg:
      return user_optimum_at(cfg, Route::Model1);
  }
  throw InternalError("user_optimal_route: unknown regime");
}

MisalignmentReport misalignment_gap(const GameConfig& cfg) {
  const NetValues nv = net_values(cfg);
  MisalignmentReport rep;
  rep.provider_opt = solve_equilibrium(cfg);
  rep.user_opt = user_optimal_route(cfg);
  rep.delta_u = rep.user_opt.U - rep.provider_opt.outcomes.U;
  rep.aligned = rep.delta_u <= kAlignedTol;
  rep.predicate = alignment_predicate(cfg, nv, rep.provider_opt);
  if (rep.predicate.margin > kPredicateBand && rep.predicate.holds != rep.aligned) {
    throw InternalError("misalignment_gap: alignment predicate (item " +
                        std::to_string(rep.predicate.item) + ") says " +
                        (rep.predicate.holds ? "aligned" : "misaligned") + " but delta_U = " +
                        format_double(rep.delta_u));
  }
  return rep;
}

std::string_view to_string(ThrottleVariant variant) {
  switch (variant) {
    case ThrottleVariant::Model1: return "Model1";
    case ThrottleVariant::Model2: return "Model2";
    case ThrottleVariant::Both: return "Both";
  }
  return "?";
}

ThrottleReport throttle_analysis(const GameConfig& cfg, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ValidationError("throttle_analysis: epsilon must be > 0");
  }
  ThrottleReport rep;
  rep.j_pre = solve_equilibrium(cfg).outcomes.J;

  std::optional<GameConfig> best_cfg;
  for (ThrottleVariant v : {ThrottleVariant::Model1, ThrottleVariant::Model2, ThrottleVariant::Both}) {
    const auto [t1, t2] = throttled_latencies(cfg, v, epsilon);
    const GameConfig throttled = cfg.with_latencies(t1, t2);
    ThrottleOutcome& out = rep.variants[static_cast<std::size_t>(v)];
    out.variant = v;
    out.t1_hat = t1;
    out.t2_hat = t2;
    out.j_post = solve_equilibrium(throttled).outcomes.J;
    out.gain = rep.j_pre - out.j_post;
    // Strict improvement needed, so ties keep the lighter throttle.
    if (!best_cfg || out.j_post < rep.j_post - kThresholdTol) {
      best_cfg = throttled;
      rep.j_post = out.j_post;
      rep.best = v;
      rep.t1_hat = t1;
      rep.t2_hat = t2;
    }
  }
  rep.gain = rep.j_pre - rep.j_post;
  rep.delta_u_post = misalignment_gap(*best_cfg).delta_u;
  return rep;
}

AxisSpec AxisSpec::parse(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
      text.find(':', c2 + 1) != std::string_view::npos) {
    throw ValidationError("axis must look like name:lo:hi, got '" + std::string(text) + "'");
  }
  AxisSpec axis;
  axis.name = std::string(text.substr(0, c1));
  axis.lo = parse_number(text.substr(c1 + 1, c2 - c1 - 1), "axis lower bound");
  axis.hi = parse_number(text.substr(c2 + 1), "axis upper bound");
  check_axis(axis);
  return axis;
}

std::vector<SweepRecord> sweep(const GameConfig& base, const AxisSpec& axis1, const AxisSpec& axis2,
                               int n1, int n2, const SweepOptions& options) {
  check_axis(axis1);
  check_axis(axis2);
  if (axis1.name == axis2.name) throw ValidationError("sweep axes must name different parameters");
  if (n1 < 1 || n2 < 1) throw ValidationError("sweep resolution must be at least 1x1");

  std::vector<SweepRecord> records(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
  parallel_for(records.size(), options.workers, [&](std::size_t idx) {
    const int k1 = static_cast<int>(idx / static_cast<std::size_t>(n2));
    const int k2 = static_cast<int>(idx % static_cast<std::size_t>(n2));
    SweepRecord& rec = records[idx];
    rec.a1 = axis_value(axis1, k1, n1);
    rec.a2 = axis_value(axis2, k2, n2);

    RawParams raw{base.m1(), base.m2(), base.value(), base.penalty()};
    for (const auto& [axis, x] : {std::pair{&axis1, rec.a1}, std::pair{&axis2, rec.a2}}) {
      if (!is_composite(axis->name)) apply_axis(raw, axis->name, x);
    }
    for (const auto& [axis, x] : {std::pair{&axis1, rec.a1}, std::pair{&axis2, rec.a2}}) {
      if (is_composite(axis->name)) apply_axis(raw, axis->name, x);
    }

    std::optional<GameConfig> cfg;
    try {
      cfg = GameConfig::create(raw.m1, raw.m2, raw.V, raw.P);
    } catch (const ValidationError&) {
      rec.feasible = false;
      rec.s_star = rec.q_star = rec.S = rec.U = rec.J = rec.delta_u = rec.throttle_gain = kNaN;
      return;
    }

    rec.feasible = true;
    rec.regime = net_values(*cfg).regime;
    if (options.fixed_policy) {
      const ProviderPolicy policy = options.fixed_policy->canonical();
      const double q = user_best_response(*cfg, policy).q_star;
      const Outcomes out = expected_outcomes(*cfg, policy, UserResponse(q));
      rec.i_star = route_index(policy.route());
      rec.s_star = policy.s();
      rec.q_star = q;
      rec.S = out.S;
      rec.U = out.U;
      rec.J = out.J;
      rec.delta_u = user_optimal_route(*cfg).U - out.U;
    } else {
      const MisalignmentReport mis = misalignment_gap(*cfg);
      const Equilibrium& eq = mis.provider_opt;
      rec.i_star = route_index(eq.policy.route());
      rec.s_star = eq.policy.s();
      rec.q_star = eq.q_star;
      rec.S = eq.outcomes.S;
      rec.U = eq.outcomes.U;
      rec.J = eq.outcomes.J;
      rec.delta_u = mis.delta_u;
    }
    rec.throttle_gain = throttle_analysis(*cfg, options.epsilon).variant(ThrottleVariant::Both).gain;
  });

  const bool any = std::any_of(records.begin(), records.end(),
                               [](const SweepRecord& r) { return r.feasible; });
  if (!any) {
    throw ValidationError("sweep over " + axis1.name + " x " + axis2.name +
                          " produced no valid config in any cell");
  }
  return records;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRecord& r : records) {
    out << format_double(r.a1) << ',' << format_double(r.a2) << ',';
    if (r.feasible) {
      out << to_string(r.regime) << ',' << r.i_star << ',';
    } else {
      out << "NA,0,";
    }
    out << format_double(r.s_star) << ',' << format_double(r.q_star) << ',' << format_double(r.S)
        << ',' << format_double(r.U) << ',' << format_double(r.J) << ','
        << format_double(r.delta_u) << ',' << format_double(r.throttle_gain) << ','
        << (r.feasible ? 1 : 0) << '\n';
  }
}

}  // namespace routegame

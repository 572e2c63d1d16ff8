#include "routegame/user_response.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "routegame/errors.hpp"
#include "routegame/numeric.hpp"

namespace routegame {

namespace {

constexpr double kResidualTol = 1e-10;
// Slack for accepting a quadratic root that rounding pushed just outside [0, 1].
constexpr double kRootSlack = 1e-9;

std::string describe(const GameConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "{p1=" << cfg.m1().p << ", p2=" << cfg.m2().p << ", t1=" << cfg.m1().t
     << ", t2=" << cfg.m2().t << ", c1=" << cfg.m1().c << ", c2=" << cfg.m2().c
     << ", V=" << cfg.value() << ", P=" << cfg.penalty() << "}";
  return os.str();
}

NetValues require_regime(const GameConfig& cfg, Regime wanted, const char* op) {
  const NetValues nv = net_values(cfg);
  if (nv.regime != wanted) {
    throw RegimeError(std::string(op) + " requires regime " + std::string(to_string(wanted)) +
                      " but the config is " + std::string(to_string(nv.regime)));
  }
  return nv;
}

// Model-1 utility at (s, q).
double utility1(const GameConfig& cfg, double s, double q) {
  return expected_outcomes(cfg, ProviderPolicy(Route::Model1, s), UserResponse(q)).U;
}

double polish(const QuadraticF& f, double x) {
  const double slope = 2.0 * f.a * x + f.b;
  if (slope == 0.0) return x;
  const double next = x - f(x) / slope;
  return std::abs(f(next)) < std::abs(f(x)) ? std::clamp(next, 0.0, 1.0) : x;
}

ResponseKind kind_of(double q) {
  if (q <= 0.0) return ResponseKind::Stay;
  if (q >= 1.0) return ResponseKind::Abandon;
  return ResponseKind::Interior;
}

}  // namespace

std::string_view to_string(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::Stay: return "Stay";
    case ResponseKind::Abandon: return "Abandon";
    case ResponseKind::Interior: return "Interior";
  }
  return "?";
}

QuadraticF QuadraticF::at(const GameConfig& cfg, double s) {
  const NetValues nv = net_values(cfg);
  const double p1 = cfg.m1().p;
  const double p2 = cfg.m2().p;
  const double k = (1.0 - p1) * (1.0 - p2);
  const double w = (1.0 - s) * (1.0 - p2);
  QuadraticF f;
  f.c0 = nv.xi1 * (1.0 - s) * p2 * p2 + nv.xi2 * s * (1.0 - k * (1.0 - s));
  f.b = 2.0 * w * (nv.xi1 * p2 + nv.xi2 * s * (1.0 - p1));
  f.a = w * (nv.xi1 * (1.0 - p2) - nv.xi2 * s * (1.0 - p1));
  return f;
}

double first_order_condition(const GameConfig& cfg, double s, double q) {
  const NetValues nv = net_values(cfg);
  const double p1 = cfg.m1().p;
  const double p2 = cfg.m2().p;
  const double m = p2 + (1.0 - p2) * q;
  const double r = 1.0 - q;
  return nv.xi1 * (1.0 - s) * m * m +
         nv.xi2 * s * (1.0 - (1.0 - p1) * (1.0 - p2) * (1.0 - s) * r * r);
}

double threshold_s0(const GameConfig& cfg) {
  const NetValues nv = require_regime(cfg, Regime::NegPos, "threshold_s0");
  return -nv.xi1 / (nv.xi2 / cfg.m2().p - nv.xi1);
}

double threshold_s_high(const GameConfig& cfg) {
  const NetValues nv = require_regime(cfg, Regime::PosNeg, "threshold_s_high");
  return nv.xi1 / (nv.xi1 - nv.xi2);
}

double threshold_s_low(const GameConfig& cfg) {
  const NetValues nv = require_regime(cfg, Regime::PosNeg, "threshold_s_low");
  const double p1 = cfg.m1().p;
  const double p2 = cfg.m2().p;
  const double k = (1.0 - p1) * (1.0 - p2);
  // F(s, 0) = ks xi2 s^2 + (xi2 (1 - k) - xi1 p2^2) s + xi1 p2^2, concave in s
  // with F(0, 0) >= 0 > F(1, 0) = xi2.
  const double a = nv.xi2 * k;
  const double b = nv.xi2 * (1.0 - k) - nv.xi1 * p2 * p2;
  const double c0 = nv.xi1 * p2 * p2;
  const QuadraticF f{a, b, c0};

  const numeric::QuadraticRoots roots = numeric::solve_quadratic(a, b, c0);
  double best = -1.0;
  double best_residual = INFINITY;
  for (int r = 0; r < roots.count; ++r) {
    const double x = roots.roots[r];
    if (x < -kRootSlack || x > 1.0 + kRootSlack) continue;
    const double clamped = polish(f, std::clamp(x, 0.0, 1.0));
    const double residual = std::abs(f(clamped));
    if (residual < best_residual) {
      best = clamped;
      best_residual = residual;
    }
  }
  if (best < 0.0 || best_residual > kResidualTol) {
    throw InternalError("threshold_s_low: F(., 0) has no root in [0, 1] for config " +
                        describe(cfg));
  }
  return best;
}

double q_dagger(const GameConfig& cfg, double s) {
  const double s_low = threshold_s_low(cfg);
  const double s_high = threshold_s_high(cfg);
  if (!(s > s_low)) {
    throw ValidationError("q_dagger: s <= s_low, the best response is q = 0 (stay)");
  }
  if (!(s < s_high)) {
    throw ValidationError("q_dagger: s >= s_high, the best response is q = 1 (abandon)");
  }

  const QuadraticF f = QuadraticF::at(cfg, s);
  std::vector<double> candidates;
  const numeric::QuadraticRoots roots = numeric::solve_quadratic(f.a, f.b, f.c0);
  for (int r = 0; r < roots.count; ++r) {
    const double x = roots.roots[r];
    if (x >= -kRootSlack && x <= 1.0 + kRootSlack) {
      candidates.push_back(polish(f, std::clamp(x, 0.0, 1.0)));
    }
  }
  if (candidates.empty()) {
    // F(s, 0) < 0 < F(s, 1) holds analytically inside (s_low, s_high); only a
    // degenerate discriminant lands here.
    candidates.push_back(numeric::bisect_root([&](double q) { return f(q); }, 0.0, 1.0));
  }

  double best = candidates.front();
  if (candidates.size() > 1) {
    double best_u = utility1(cfg, s, best);
    for (std::size_t k = 1; k < candidates.size(); ++k) {
      const double u = utility1(cfg, s, candidates[k]);
      if (u > best_u) {
        best = candidates[k];
        best_u = u;
      }
    }
  }
  if (std::abs(f(best)) > kResidualTol) {
    throw InternalError("q_dagger: residual above tolerance for config " + describe(cfg));
  }
  return best;
}

BestResponse user_best_response(const GameConfig& cfg, const ProviderPolicy& policy) {
  const NetValues nv = net_values(cfg);
  BestResponse br;
  br.regime = nv.regime;

  if (policy.route() == Route::Model2) {
    br.q_star = nv.xi2 < 0.0 ? 1.0 : 0.0;
    br.kind = kind_of(br.q_star);
    return br;
  }

  const double s = policy.s();
  switch (nv.regime) {
    case Regime::BothPositive:
      br.q_star = 0.0;
      break;
    case Regime::BothNegative:
      br.q_star = 1.0;
      break;
    case Regime::NegPos: {
      const double s0 = threshold_s0(cfg);
      br.thresholds.s0 = s0;
      br.q_star = s < s0 - kThresholdTol ? 1.0 : 0.0;
      break;
    }
    case Regime::PosNeg: {
      const double s_low = threshold_s_low(cfg);
      const double s_high = threshold_s_high(cfg);
      br.thresholds.s_low = s_low;
      br.thresholds.s_high = s_high;
      if (s <= s_low + kThresholdTol) {
        br.q_star = 0.0;
      } else if (s >= s_high - kThresholdTol) {
        br.q_star = 1.0;
      } else {
        br.q_star = q_dagger(cfg, s);
      }
      break;
    }
  }
  br.kind = kind_of(br.q_star);
  return br;
}

}  // namespace routegame

#include "routegame/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "routegame/errors.hpp"

namespace routegame {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& invariant) {
  if (!ok) throw ValidationError("invalid game config: violates " + invariant);
}

void check_model(const ModelParams& m, const char* tag) {
  const std::string idx(tag);
  require(std::isfinite(m.p) && m.p > 0.0 && m.p < 1.0,
          "0 < p" + idx + " < 1 (p" + idx + "=" + fmt(m.p) + ")");
  require(std::isfinite(m.c) && m.c >= 0.0 && m.c <= 1.0,
          "0 <= c" + idx + " <= 1 (c" + idx + "=" + fmt(m.c) + ")");
}

void check_shared(const ModelParams& m1, const ModelParams& m2, double value, double penalty) {
  check_model(m1, "1");
  check_model(m2, "2");
  require(m1.p < m2.p, "p1 < p2 (p1=" + fmt(m1.p) + ", p2=" + fmt(m2.p) + ")");
  require(m1.c < m2.c, "c1 < c2 (c1=" + fmt(m1.c) + ", c2=" + fmt(m2.c) + ")");
  require(std::isfinite(value) && value > 0.0, "V > 0 (V=" + fmt(value) + ")");
  require(std::isfinite(penalty) && penalty > 0.0, "P > 0 (P=" + fmt(penalty) + ")");
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::BothPositive: return "BothPositive";
    case Regime::BothNegative: return "BothNegative";
    case Regime::NegPos: return "NegPos";
    case Regime::PosNeg: return "PosNeg";
  }
  return "?";
}

int route_index(Route route) { return static_cast<int>(route); }

GameConfig GameConfig::create(const ModelParams& m1, const ModelParams& m2, double value,
                              double penalty) {
  check_shared(m1, m2, value, penalty);
  for (const auto& [m, idx] : {std::pair{m1, "1"}, std::pair{m2, "2"}}) {
    require(std::isfinite(m.t) && m.t >= 0.0 && m.t <= 1.0,
            std::string("0 <= t") + idx + " <= 1 (t" + idx + "=" + fmt(m.t) + ")");
  }
  require(m1.t < m2.t, "t1 < t2 (t1=" + fmt(m1.t) + ", t2=" + fmt(m2.t) + ")");
  return GameConfig(m1, m2, value, penalty);
}

GameConfig GameConfig::with_latencies(double t1, double t2) const {
  require(std::isfinite(t1) && t1 >= 0.0, "t1 >= 0 (t1=" + fmt(t1) + ")");
  require(std::isfinite(t2) && t2 >= 0.0, "t2 >= 0 (t2=" + fmt(t2) + ")");
  GameConfig out = *this;
  out.m1_.t = t1;
  out.m2_.t = t2;
  return out;
}

const ModelParams& GameConfig::model(Route route) const {
  return route == Route::Model1 ? m1_ : m2_;
}

ProviderPolicy::ProviderPolicy(Route route, double s) : route_(route), s_(s) {
  if (route != Route::Model1 && route != Route::Model2) {
    throw ValidationError("invalid policy: route must be 1 or 2");
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw ValidationError("invalid policy: violates 0 <= s <= 1 (s=" + fmt(s) + ")");
  }
}

ProviderPolicy ProviderPolicy::canonical() const {
  return route_ == Route::Model2 ? ProviderPolicy(Route::Model2, 0.0) : *this;
}

UserResponse::UserResponse(double q) : q_(q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("invalid user response: violates 0 <= q <= 1 (q=" + fmt(q) + ")");
  }
}

Regime classify(double xi1, double xi2) {
  const bool pos1 = xi1 >= 0.0;
  const bool pos2 = xi2 >= 0.0;
  if (pos1 && pos2) return Regime::BothPositive;
  if (!pos1 && !pos2) return Regime::BothNegative;
  return pos2 ? Regime::NegPos : Regime::PosNeg;
}

NetValues net_values(const GameConfig& cfg) {
  NetValues nv;
  nv.xi1 = cfg.value() * cfg.m1().p - cfg.m1().t;
  nv.xi2 = cfg.value() * cfg.m2().p - cfg.m2().t;
  nv.regime = classify(nv.xi1, nv.xi2);
  return nv;
}

double continue_probability(const GameConfig& cfg, double q) {
  return (1.0 - cfg.m1().p) * (1.0 - q);
}

double expected_model2_calls(const GameConfig& cfg, double q) {
  const double p2 = cfg.m2().p;
  return 1.0 / (p2 + (1.0 - p2) * q);
}

double cost_of_pass(const ModelParams& m) { return m.c / m.p; }

double incremental_cost_ratio(const GameConfig& cfg) {
  return (cfg.m2().c - cfg.m1().c) / (cfg.m2().p - cfg.m1().p);
}

Outcomes expected_outcomes(const GameConfig& cfg, const ProviderPolicy& policy,
                           UserResponse response) {
  const double q = response.q();
  const double beta = expected_model2_calls(cfg, q);
  const ModelParams& m1 = cfg.m1();
  const ModelParams& m2 = cfg.m2();

  Outcomes out;
  if (policy.route() == Route::Model2) {
    out.S = beta * m2.p;
    out.L = beta * m2.t;
    out.C = beta * m2.c;
  } else {
    const double s = policy.s();
    const double alpha = continue_probability(cfg, q);
    const double denom = 1.0 - alpha * (1.0 - s);
    // p1 > 0 keeps alpha < 1, so this only trips on a corrupted config.
    if (!(denom > 0.0)) {
      throw InternalError("expected_outcomes: non-positive absorption denominator");
    }
    const double escalate = alpha * beta * s;
    out.S = (m1.p + escalate * m2.p) / denom;
    out.L = (m1.t + escalate * m2.t) / denom;
    out.C = (m1.c + escalate * m2.c) / denom;
  }
  // Rounding can push a certain success a few ulps above 1.
  out.S = std::min(out.S, 1.0);
  out.U = cfg.value() * out.S - out.L;
  out.J = out.C + cfg.penalty() * (1.0 - out.S);
  return out;
}

}  // namespace routegame

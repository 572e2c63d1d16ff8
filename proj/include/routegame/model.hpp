#pragma once

#include <string_view>

namespace routegame {

// Absolute tolerance used when comparing a quantity against a threshold.
inline constexpr double kThresholdTol = 1e-12;

// One LLM: per-pass success probability, user latency and provider compute cost.
struct ModelParams {
  double p = 0.5;
  double t = 0.0;
  double c = 0.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class Route : int { Model1 = 1, Model2 = 2 };

// Quadrant of (sign xi1, sign xi2). A net value of exactly zero counts as
// value-dominated (the user is indifferent and stays), so the four labels
// partition the plane.
enum class Regime { BothPositive, BothNegative, NegPos, PosNeg };

std::string_view to_string(Regime regime);
int route_index(Route route);

// All game parameters. Construction validates the invariants; an instance
// is therefore always a valid game.
class GameConfig {
 public:
  // Strict validation: 0 < p1 < p2 < 1, 0 <= t1 < t2 <= 1, 0 <= c1 < c2 <= 1,
  // V > 0, P > 0. Throws ValidationError naming the violated invariant.
  static GameConfig create(const ModelParams& m1, const ModelParams& m2, double value,
                           double penalty);

  // Same game with replaced latencies. Only t >= 0 is enforced: throttled
  // latencies may exceed 1 and may reverse the t1 < t2 ordering.
  GameConfig with_latencies(double t1, double t2) const;

  const ModelParams& m1() const { return m1_; }
  const ModelParams& m2() const { return m2_; }
  const ModelParams& model(Route route) const;
  double value() const { return value_; }
  double penalty() const { return penalty_; }

  friend bool operator==(const GameConfig&, const GameConfig&) = default;

 private:
  GameConfig(const ModelParams& m1, const ModelParams& m2, double value, double penalty)
      : m1_(m1), m2_(m2), value_(value), penalty_(penalty) {}

  ModelParams m1_;
  ModelParams m2_;
  double value_;
  double penalty_;
};

// Initial route i and cascade probability s. s is stored but inert when the
// route is Model2.
class ProviderPolicy {
 public:
  ProviderPolicy(Route route, double s);

  Route route() const { return route_; }
  double s() const { return s_; }
  // s forced to 0 for Model2 so that equal policies compare equal.
  ProviderPolicy canonical() const;

  friend bool operator==(const ProviderPolicy&, const ProviderPolicy&) = default;

 private:
  Route route_;
  double s_;
};

// Stationary abandonment probability q chosen by the user.
class UserResponse {
 public:
  explicit UserResponse(double q);
  double q() const { return q_; }

 private:
  double q_;
};

// Expected session functionals for one (i, s, q).
struct Outcomes {
  double S = 0.0;  // probability the session absorbs in Success
  double L = 0.0;  // expected total user latency
  double C = 0.0;  // expected provider service cost
  double U = 0.0;  // V * S - L
  double J = 0.0;  // C + P * (1 - S)
};

struct NetValues {
  double xi1 = 0.0;
  double xi2 = 0.0;
  Regime regime = Regime::BothPositive;
};

Regime classify(double xi1, double xi2);
NetValues net_values(const GameConfig& cfg);

// Probability that model 1 fails and the user stays for another pass.
double continue_probability(const GameConfig& cfg, double q);
// Expected number of model-2 passes once a session sits in model 2.
double expected_model2_calls(const GameConfig& cfg, double q);

double cost_of_pass(const ModelParams& m);
// (c2 - c1) / (p2 - p1): extra cost per unit of extra success probability.
double incremental_cost_ratio(const GameConfig& cfg);

Outcomes expected_outcomes(const GameConfig& cfg, const ProviderPolicy& policy,
                           UserResponse response);

}  // namespace routegame

#pragma once

#include <optional>
#include <string_view>

#include "routegame/model.hpp"

namespace routegame {

enum class ResponseKind { Stay, Abandon, Interior };

std::string_view to_string(ResponseKind kind);

// Cascade thresholds of the model-1 best response. s0 is set in NegPos,
// s_low and s_high in PosNeg.
struct ResponseThresholds {
  std::optional<double> s0;
  std::optional<double> s_low;
  std::optional<double> s_high;
};

struct BestResponse {
  double q_star = 0.0;
  ResponseKind kind = ResponseKind::Stay;
  Regime regime = Regime::BothPositive;
  ResponseThresholds thresholds;
};

// First-order condition of the user's problem in PosNeg, as a quadratic in q
// for a fixed cascade probability s:
//   F(s, q) = xi1 (1-s) (p2 + (1-p2) q)^2 + xi2 s (1 - (1-p1)(1-p2)(1-s)(1-q)^2)
// F has the sign of -dU1/dq, so the interior optimum is its root in [0, 1].
struct QuadraticF {
  double a = 0.0;
  double b = 0.0;
  double c0 = 0.0;

  static QuadraticF at(const GameConfig& cfg, double s);
  double operator()(double q) const { return (a * q + b) * q + c0; }
};

// F(s, q) evaluated directly from its factored definition.
double first_order_condition(const GameConfig& cfg, double s, double q);

// NegPos only: -xi1 / (xi2/p2 - xi1). Below it the user abandons model 1.
double threshold_s0(const GameConfig& cfg);
// PosNeg only: xi1 / (xi1 - xi2). At or above it the user abandons.
double threshold_s_high(const GameConfig& cfg);
// PosNeg only: the root of F(s, 0) in [0, 1]. At or below it the user stays.
double threshold_s_low(const GameConfig& cfg);

// PosNeg only, s strictly inside (s_low, s_high): the abandonment probability
// that solves F(s, q) = 0.
double q_dagger(const GameConfig& cfg, double s);

BestResponse user_best_response(const GameConfig& cfg, const ProviderPolicy& policy);

}  // namespace routegame

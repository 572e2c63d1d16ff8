#pragma once

#include <array>
#include <functional>

namespace routegame::numeric {

// Real roots of a x^2 + b x + c, ascending. Uses the cancellation-free pair
// r1 = qq / a, r2 = c / qq with qq = -(b + sign(b) sqrt(b^2 - 4ac)) / 2.
struct QuadraticRoots {
  std::array<double, 2> roots{};
  int count = 0;
};

QuadraticRoots solve_quadratic(double a, double b, double c);

struct Minimum {
  double x = 0.0;
  double fx = 0.0;
};

// Local minimum of f on [lo, hi] (Brent: golden-section steps with parabolic
// acceleration). x is accurate to about sqrt(machine epsilon) relative.
Minimum minimize(const std::function<double(double)>& f, double lo, double hi);

// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double x_tol = 1e-15);

}  // namespace routegame::numeric

#include "routegame/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "routegame/errors.hpp"

namespace routegame::numeric {

QuadraticRoots solve_quadratic(double a, double b, double c) {
  QuadraticRoots out;
  if (a == 0.0) {
    if (b != 0.0) {
      out.roots[0] = -c / b;
      out.count = 1;
    }
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (b + std::copysign(sq, b));
  if (qq == 0.0) {
    // b == 0 and c == 0: double root at the origin.
    out.roots[0] = 0.0;
    out.count = 1;
    return out;
  }
  double r1 = qq / a;
  double r2 = c / qq;
  if (r1 > r2) std::swap(r1, r2);
  out.roots = {r1, r2};
  out.count = 2;
  return out;
}

Minimum minimize(const std::function<double(double)>& f, double lo, double hi) {
  constexpr int bits = std::numeric_limits<double>::digits / 2;
  std::uintmax_t max_iter = 200;
  const auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, bits, max_iter);
  return {x, fx};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double x_tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw InternalError("bisect_root: no sign change on the bracket");
  }
  for (int it = 0; it < 200 && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace routegame::numeric

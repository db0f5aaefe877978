#pragma once
// Gaussian curvature of the ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1,
// its closed-form extrema, and the admissibility region K >= 1 expressed
// both in semi-axis lengths and in perturbation parameters
// (a, b, c) = (1 + alpha eps, 1 + beta eps, 1 + gamma eps).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "ellspec/error.hpp"

namespace ellspec {

/// Two semi-axes are equal when |a - b| <= kAxisEqualityTol * max(a, b).
inline constexpr double kAxisEqualityTol = 1e-10;
/// Slack applied to every K >= 1 test.
inline constexpr double kCurvatureSlack = 1e-12;
/// gaussian_curvature rejects points whose implicit-equation residual exceeds this.
inline constexpr double kOnSurfaceTol = 1e-9;

struct SurfacePoint {
  double x = 0, y = 0, z = 0;
  friend bool operator==(const SurfacePoint &, const SurfacePoint &) = default;
};

class Ellipsoid {
public:
  Ellipsoid(double a, double b, double c) : axes_{a, b, c} {
    for (double v : axes_)
      if (!(v > 0) || !std::isfinite(v))
        throw InvalidInput("ellipsoid semi-axes must be positive and finite");
  }

  double a() const noexcept { return axes_[0]; }
  double b() const noexcept { return axes_[1]; }
  double c() const noexcept { return axes_[2]; }
  const std::array<double, 3> &axes() const noexcept { return axes_; }

  /// |x^2/a^2 + y^2/b^2 + z^2/c^2 - 1|
  double residual(const SurfacePoint &p) const noexcept {
    const double q = (p.x / a()) * (p.x / a()) + (p.y / b()) * (p.y / b()) +
                     (p.z / c()) * (p.z / c());
    return std::abs(q - 1.0);
  }
  bool contains(const SurfacePoint &p, double tol = kOnSurfaceTol) const noexcept {
    return residual(p) <= tol;
  }

  /// Surface point at polar angle theta (from +z) and azimuth phi.
  SurfacePoint point_at(double theta, double phi) const noexcept {
    return {a() * std::sin(theta) * std::cos(phi),
            b() * std::sin(theta) * std::sin(phi), c() * std::cos(theta)};
  }

  friend bool operator==(const Ellipsoid &, const Ellipsoid &) = default;

private:
  std::array<double, 3> axes_;
};

struct PerturbationParams {
  double alpha = 0, beta = 0, gamma = 0, epsilon = 0;
  friend bool operator==(const PerturbationParams &,
                         const PerturbationParams &) = default;
};

struct CurvatureExtrema {
  double k_min = 0, k_max = 0;
  SurfacePoint argmin, argmax;
};

enum class EllipsoidClass { Sphere, BiaxialAAB, BiaxialABB, Triaxial };

inline std::string_view to_string(EllipsoidClass c) noexcept {
  switch (c) {
  case EllipsoidClass::Sphere:
    return "sphere";
  case EllipsoidClass::BiaxialAAB:
    return "biaxial_aab";
  case EllipsoidClass::BiaxialABB:
    return "biaxial_abb";
  case EllipsoidClass::Triaxial:
    return "triaxial";
  }
  return "unknown";
}

namespace detail {

/// Permutation sorting the three values descending (stable).
inline std::array<int, 3> descending_order(const std::array<double, 3> &v) {
  std::array<int, 3> idx{0, 1, 2};
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return v[i] > v[j]; });
  return idx;
}

inline bool axes_equal(double u, double v) noexcept {
  return std::abs(u - v) <= kAxisEqualityTol * std::max(std::abs(u), std::abs(v));
}

inline SurfacePoint axis_point(int axis, double length) noexcept {
  SurfacePoint p;
  (axis == 0 ? p.x : axis == 1 ? p.y : p.z) = length;
  return p;
}

inline EllipsoidClass classify_sorted(double big, double mid, double small) noexcept {
  const bool top = axes_equal(big, mid);
  const bool bottom = axes_equal(mid, small);
  if (top && bottom)
    return EllipsoidClass::Sphere;
  if (top)
    return EllipsoidClass::BiaxialAAB;
  if (bottom)
    return EllipsoidClass::BiaxialABB;
  return EllipsoidClass::Triaxial;
}

} // namespace detail

/// K(p) = 1 / (a^2 b^2 c^2 (x^2/a^4 + y^2/b^4 + z^2/c^4)^2).
inline double gaussian_curvature(const Ellipsoid &e, const SurfacePoint &p) {
  if (!e.contains(p))
    throw InvalidInput("point does not lie on the ellipsoid");
  const double a2 = e.a() * e.a(), b2 = e.b() * e.b(), c2 = e.c() * e.c();
  const double h = p.x * p.x / (a2 * a2) + p.y * p.y / (b2 * b2) +
                   p.z * p.z / (c2 * c2);
  return 1.0 / (a2 * b2 * c2 * h * h);
}

/// With axes sorted A >= B >= C: K_max = A^2/(B^2 C^2) at the end of the
/// longest axis, K_min = C^2/(A^2 B^2) at the end of the shortest. Points
/// are reported in the caller's axis order.
inline CurvatureExtrema curvature_extrema(const Ellipsoid &e) {
  const auto &ax = e.axes();
  const auto ord = detail::descending_order(ax);
  const double A = ax[ord[0]], B = ax[ord[1]], C = ax[ord[2]];
  CurvatureExtrema out;
  out.k_max = (A * A) / (B * B * C * C);
  out.k_min = (C * C) / (A * A * B * B);
  out.argmax = detail::axis_point(ord[0], A);
  out.argmin = detail::axis_point(ord[2], C);
  return out;
}

inline EllipsoidClass classify(const Ellipsoid &e) {
  const auto &ax = e.axes();
  const auto ord = detail::descending_order(ax);
  return detail::classify_sorted(ax[ord[0]], ax[ord[1]], ax[ord[2]]);
}

/// K_min >= 1 via the case split on the sorted axes A >= B >= C:
/// sphere and BiaxialABB need A <= 1, BiaxialAAB needs C >= A^2,
/// Triaxial needs C >= A B (each of which forces A <= 1).
inline bool axis_admissible(const Ellipsoid &e) {
  const auto &ax = e.axes();
  const auto ord = detail::descending_order(ax);
  const double A = ax[ord[0]], B = ax[ord[1]], C = ax[ord[2]];
  // K >= 1 - slack  <=>  sqrt(K) >= sqrt(1 - slack)
  const double root_slack = std::sqrt(1.0 - kCurvatureSlack);
  switch (detail::classify_sorted(A, B, C)) {
  case EllipsoidClass::Sphere:
  case EllipsoidClass::BiaxialABB:
    return 1.0 / A >= root_slack;
  case EllipsoidClass::BiaxialAAB:
    return C / (A * A) >= root_slack;
  case EllipsoidClass::Triaxial:
    return C / (A * B) >= root_slack;
  }
  return false;
}

//==============================================================================
/// Subset of (0, inf) of the form (0, upper) or (0, upper].
struct EpsilonInterval {
  bool empty = true;
  double upper = 0;
  bool upper_closed = false;
  /// Governing inequality in words, e.g. "triaxial: eps <= (gamma-alpha-beta)/(alpha*beta)".
  std::string condition;
  /// Input indices in descending order: params[order[0]] >= params[order[1]] >= params[order[2]].
  std::array<int, 3> order{0, 1, 2};

  bool contains(double eps) const noexcept {
    if (empty || !(eps > 0))
      return false;
    return upper_closed ? eps <= upper : eps < upper;
  }
  bool bounded() const noexcept {
    return !empty && upper != std::numeric_limits<double>::infinity();
  }
};

inline std::string to_string(const EpsilonInterval &iv) {
  if (iv.empty)
    return "empty";
  if (!iv.bounded())
    return "(0,inf)";
  char buf[64];
  std::snprintf(buf, sizeof buf, "(0,%.17g%c", iv.upper, iv.upper_closed ? ']' : ')');
  return buf;
}

namespace detail {

inline bool params_equal(double u, double v) noexcept {
  return std::abs(u - v) <=
         kAxisEqualityTol * std::max({1.0, std::abs(u), std::abs(v)});
}

/// Tightens iv to also require 1 + g eps > 0 for the smallest coefficient g.
inline void intersect_positive_axes(EpsilonInterval &iv, double g) {
  if (g >= 0)
    return;
  const double limit = -1.0 / g;
  if (limit < iv.upper || (limit == iv.upper && iv.upper_closed)) {
    iv.upper = limit;
    iv.upper_closed = false;
  }
}

} // namespace detail

/// All eps > 0 for which the ellipsoid (1 + alpha eps, 1 + beta eps,
/// 1 + gamma eps) is valid and has K >= 1 everywhere. Inputs are sorted
/// descending first (alpha >= beta >= gamma below).
inline EpsilonInterval epsilon_admissible_interval(double alpha, double beta,
                                                   double gamma) {
  const std::array<double, 3> in{alpha, beta, gamma};
  for (double v : in)
    if (!std::isfinite(v))
      throw InvalidInput("perturbation coefficients must be finite");
  EpsilonInterval iv;
  iv.order = detail::descending_order(in);
  const double a = in[iv.order[0]], b = in[iv.order[1]], g = in[iv.order[2]];
  const bool top = detail::params_equal(a, b);
  const bool bottom = detail::params_equal(b, g);
  constexpr double inf = std::numeric_limits<double>::infinity();

  auto open_to_inf = [&] {
    iv.empty = false;
    iv.upper = inf;
    iv.upper_closed = false;
  };

  if (top && bottom) {
    iv.condition = "sphere: alpha <= 0";
    if (a > 0)
      return iv;
    open_to_inf();
  } else if (bottom) {
    // the two smallest axes coincide: K_min = 1/A^2
    iv.condition = "biaxial_abb: alpha <= 0, eps < -1/beta";
    if (a > 0)
      return iv;
    open_to_inf();
  } else if (top) {
    // the two largest axes coincide: K_min = C^2/A^4
    iv.condition = "biaxial_aab: alpha < 0, 2 alpha < gamma, eps <= (gamma - 2 alpha)/alpha^2";
    if (!(a < 0) || !(g > 2 * a))
      return iv;
    iv.empty = false;
    iv.upper = (g - 2 * a) / (a * a);
    iv.upper_closed = true;
  } else {
    iv.condition = "triaxial: 0 > alpha > beta > gamma > alpha + beta, "
                   "eps <= (gamma - alpha - beta)/(alpha beta)";
    if (!(a < 0) || !(g > a + b))
      return iv;
    iv.empty = false;
    iv.upper = (g - a - b) / (a * b);
    iv.upper_closed = true;
  }
  detail::intersect_positive_axes(iv, g);
  return iv;
}

/// (1 + alpha eps, 1 + beta eps, 1 + gamma eps); rejects non-positive axes.
inline Ellipsoid ellipsoid_from_params(const PerturbationParams &p) {
  const double a = 1.0 + p.alpha * p.epsilon;
  const double b = 1.0 + p.beta * p.epsilon;
  const double c = 1.0 + p.gamma * p.epsilon;
  if (!(a > 0) || !(b > 0) || !(c > 0))
    throw InvalidInput("perturbation parameters give a non-positive semi-axis");
  return Ellipsoid(a, b, c);
}

} // namespace ellspec

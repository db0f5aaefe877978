#pragma once
// First-order eigenvalue coefficients lambda1 of the Laplace-Beltrami
// operator on the near-spherical ellipsoid (1 + alpha eps, 1 + beta eps,
// 1 + gamma eps): Lambda(eps) = l(l+1) + lambda1 eps + O(eps^2).
//
// Biaxial ellipsoids have a closed form in (l, m). Triaxial ellipsoids split
// each level into the spectra of four symmetric tridiagonal matrices, one per
// symmetry class of real spherical harmonics with the z axis as pole:
//   CosEven  cos(m phi), m = 0, 2, ..., 2k      entries a_p,  b_p
//   SinEven  sin(m phi), m = 2, ..., 2k         entries a_p,  b_p (p >= 1)
//   CosOdd   cos(m phi), m = 1, 3, ...          entries phi_p, psi_p
//   SinOdd   sin(m phi), m = 1, 3, ...          entries phi~_0, phi_p, psi_p
// where l = 2k or 2k + 1 and position p corresponds to m = 2p (even
// families) or m = 2p + 1 (odd families).

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ellspec/eigensolve.hpp"
#include "ellspec/error.hpp"
#include "ellspec/geometry.hpp"

namespace ellspec {

/// Which pair of axes coincides for the biaxial closed form.
/// AAB: (1 + alpha eps, 1 + alpha eps, 1 + beta eps), symmetric about z.
/// ABB: (1 + alpha eps, 1 + beta eps, 1 + beta eps), symmetric about x.
enum class Symmetry { AAB, ABB };

enum class MatrixFamily { CosEven, SinEven, CosOdd, SinOdd };

inline constexpr std::array<MatrixFamily, 4> kAllFamilies{
    MatrixFamily::CosEven, MatrixFamily::SinEven, MatrixFamily::CosOdd,
    MatrixFamily::SinOdd};

inline std::string_view to_string(MatrixFamily f) noexcept {
  switch (f) {
  case MatrixFamily::CosEven:
    return "cos_even";
  case MatrixFamily::SinEven:
    return "sin_even";
  case MatrixFamily::CosOdd:
    return "cos_odd";
  case MatrixFamily::SinOdd:
    return "sin_odd";
  }
  return "unknown";
}

namespace detail {

inline double level_eigenvalue(int l) noexcept {
  return static_cast<double>(l) * (l + 1);
}

/// (2l - 1)(2l + 3)
inline double coupling_denominator(int l) noexcept {
  return static_cast<double>(2 * l - 1) * (2 * l + 3);
}

/// -2 p l(l+1) + (p - d) 2l(l+1)/((2l+3)(2l-1)) (2l^2 - 2m^2 + 2l - 1),
/// p = coefficient of the coinciding pair, d = the distinct axis.
inline double biaxial_closed_form(int l, int m, double pair, double distinct) noexcept {
  const double L = level_eigenvalue(l);
  const double shape = 2.0 * l * l - 2.0 * m * m + 2.0 * l - 1.0;
  return -2.0 * pair * L +
         (pair - distinct) * (2.0 * L / coupling_denominator(l)) * shape;
}

} // namespace detail

/// Closed-form lambda1(l, m) for a biaxial ellipsoid.
inline double biaxial_lambda1(int l, int m, double alpha, double beta,
                              Symmetry symmetry) {
  if (l < 0)
    throw InvalidInput("level l must be non-negative");
  if (m < -l || m > l)
    throw InvalidInput("mode index must satisfy |m| <= l");
  return symmetry == Symmetry::AAB ? detail::biaxial_closed_form(l, m, alpha, beta)
                                   : detail::biaxial_closed_form(l, m, beta, alpha);
}

//==============================================================================
struct FamilyDimensions {
  std::array<int, 4> dims{};
  int operator[](MatrixFamily f) const noexcept { return dims[static_cast<int>(f)]; }
  int total() const noexcept { return dims[0] + dims[1] + dims[2] + dims[3]; }
};

inline FamilyDimensions matrix_dimensions(int l) {
  if (l < 1)
    throw InvalidInput("matrix families exist only for l >= 1");
  const int k = l / 2;
  const int odd = (l % 2 == 1) ? k + 1 : k;
  return {{k + 1, k, odd, odd}};
}

namespace detail {

struct TriaxialEntries {
  int l;
  double alpha, beta, gamma;

  double L() const noexcept { return level_eigenvalue(l); }
  double D() const noexcept { return coupling_denominator(l); }

  double a(int p) const noexcept {
    const double shape = double(l) * l + 4.0 * p * p + l - 1.0;
    return -(2.0 * gamma * L() + (alpha + beta - 2.0 * gamma) * (2.0 * L() / D()) * shape);
  }
  double b(int p) const noexcept {
    const double radicand = double(l - 2 * p - 1) * (l - 2 * p) * (l + 2 * p + 1) *
                            (l + 2 * p + 2);
    const double v = (beta - alpha) * (L() / D()) * std::sqrt(radicand);
    return p == 0 ? -std::sqrt(2.0) * v : -v;
  }
  double phi(int p) const noexcept {
    if (p == 0)
      return -((1.5 * alpha + 0.5 * beta - 2.0 * gamma) * (2.0 * L() * L() / D()) +
               2.0 * L() * gamma);
    const double sym = double(l) * l + 4.0 * p * p + 4.0 * p + l;
    const double polar = 2.0 * l * l - 8.0 * p * p - 8.0 * p + 2.0 * l - 3.0;
    return -((alpha + beta) * (2.0 * L() / D()) * sym + 2.0 * gamma * (L() / D()) * polar);
  }
  double phi_tilde0() const noexcept {
    return -((1.5 * beta + 0.5 * alpha - 2.0 * gamma) * (2.0 * L() * L() / D()) +
             2.0 * L() * gamma);
  }
  /// Couples m = 2p + 1 and m = 2p + 3; p = 0 uses the same expression.
  double psi(int p) const noexcept {
    const double radicand = double(l - 2 * p - 2) * (l - 2 * p - 1) * (l + 2 * p + 2) *
                            (l + 2 * p + 3);
    return -((beta - alpha) * (L() / D()) * std::sqrt(radicand));
  }
};

} // namespace detail

/// The tridiagonal matrix of one symmetry family at level l. Entries are
/// stored with the sign that makes the eigenvalues equal lambda1.
inline SymmetricTridiagonal build_matrix(int l, MatrixFamily family, double alpha,
                                         double beta, double gamma) {
  const int n = matrix_dimensions(l)[family];
  if (n < 1)
    throw InvalidInput("matrix family is empty at this level");
  const detail::TriaxialEntries t{l, alpha, beta, gamma};
  std::vector<double> diag(n), off(n - 1);
  switch (family) {
  case MatrixFamily::CosEven:
    for (int p = 0; p < n; ++p)
      diag[p] = t.a(p);
    for (int p = 0; p + 1 < n; ++p)
      off[p] = t.b(p);
    break;
  case MatrixFamily::SinEven:
    for (int p = 0; p < n; ++p)
      diag[p] = t.a(p + 1);
    for (int p = 0; p + 1 < n; ++p)
      off[p] = t.b(p + 1);
    break;
  case MatrixFamily::CosOdd:
  case MatrixFamily::SinOdd:
    for (int p = 0; p < n; ++p)
      diag[p] = t.phi(p);
    if (family == MatrixFamily::SinOdd)
      diag[0] = t.phi_tilde0();
    for (int p = 0; p + 1 < n; ++p)
      off[p] = t.psi(p);
    break;
  }
  return SymmetricTridiagonal(std::move(diag), std::move(off));
}

//==============================================================================
/// Identifies one first-order value: a tridiagonal family and eigenvalue
/// position (triaxial), or an azimuthal index m (biaxial/sphere).
struct ModeLabel {
  std::optional<MatrixFamily> family;
  int position = 0;
  std::optional<int> m;

  std::string to_string() const {
    char buf[48];
    if (family)
      std::snprintf(buf, sizeof buf, "%.*s[%d]",
                    static_cast<int>(ellspec::to_string(*family).size()),
                    ellspec::to_string(*family).data(), position);
    else
      std::snprintf(buf, sizeof buf, "m=%d", m.value_or(0));
    return buf;
  }
  friend bool operator==(const ModeLabel &, const ModeLabel &) = default;
};

struct FirstOrderEigenvalue {
  int l = 0;
  ModeLabel label;
  double lambda1 = 0;
  int multiplicity = 1;
};

/// The 2l + 1 first-order coefficients at level l >= 1, from the four
/// tridiagonal families, ascending.
inline std::vector<FirstOrderEigenvalue> first_order_spectrum(int l, double alpha,
                                                              double beta, double gamma) {
  const auto dims = matrix_dimensions(l);
  std::vector<FirstOrderEigenvalue> out;
  out.reserve(2 * l + 1);
  for (MatrixFamily f : kAllFamilies) {
    if (dims[f] == 0)
      continue;
    const auto ev = tridiag_eigenvalues(build_matrix(l, f, alpha, beta, gamma));
    for (std::size_t i = 0; i < ev.size(); ++i)
      out.push_back({l, ModeLabel{f, static_cast<int>(i), std::nullopt}, ev[i], 1});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto &x, const auto &y) { return x.lambda1 < y.lambda1; });
  return out;
}

//==============================================================================
/// How assemble_spectrum evaluates lambda1 for a parameter set.
enum class SpectrumRoute { Sphere, Biaxial, Triaxial };

inline std::string_view to_string(SpectrumRoute r) noexcept {
  switch (r) {
  case SpectrumRoute::Sphere:
    return "sphere";
  case SpectrumRoute::Biaxial:
    return "biaxial";
  case SpectrumRoute::Triaxial:
    return "triaxial";
  }
  return "unknown";
}

struct SpectrumEntry {
  int l = 0;
  ModeLabel label;
  double lambda1 = 0;
  /// l(l+1) + lambda1 eps; the O(eps^2) remainder is not modelled.
  double value = 0;
  /// Degeneracy of the branch this entry belongs to (biaxial m != 0 gives 2).
  int multiplicity = 1;
  /// Value left the window [l(l+1) - 2l, l(l+1) + 2l), or this cluster's span
  /// touches an adjacent cluster's span.
  bool window_flag = false;
};

namespace detail {

struct BiaxialShape {
  double pair = 0, distinct = 0;
};

/// Detects two coinciding coefficients; any axis may be the distinct one.
inline std::optional<BiaxialShape> biaxial_shape(const PerturbationParams &p) {
  if (params_equal(p.alpha, p.beta))
    return BiaxialShape{p.alpha, p.gamma};
  if (params_equal(p.beta, p.gamma))
    return BiaxialShape{p.beta, p.alpha};
  if (params_equal(p.alpha, p.gamma))
    return BiaxialShape{p.alpha, p.beta};
  return std::nullopt;
}

} // namespace detail

inline SpectrumRoute spectrum_route(const PerturbationParams &p) {
  if (detail::params_equal(p.alpha, p.beta) && detail::params_equal(p.beta, p.gamma))
    return SpectrumRoute::Sphere;
  return detail::biaxial_shape(p) ? SpectrumRoute::Biaxial : SpectrumRoute::Triaxial;
}

/// First-order model of every eigenvalue with level l <= L; (L + 1)^2 entries
/// ordered by level, then ascending lambda1.
inline std::vector<SpectrumEntry> assemble_spectrum(int L, const PerturbationParams &p) {
  if (L < 0)
    throw InvalidInput("level cap L must be non-negative");
  const SpectrumRoute route = spectrum_route(p);
  std::vector<SpectrumEntry> out;
  out.reserve(static_cast<std::size_t>(L + 1) * (L + 1));
  out.push_back({0, ModeLabel{std::nullopt, 0, 0}, 0.0, 0.0, 1, false});

  for (int l = 1; l <= L; ++l) {
    const double base = detail::level_eigenvalue(l);
    const std::size_t first = out.size();
    if (route == SpectrumRoute::Triaxial) {
      for (const auto &fo : first_order_spectrum(l, p.alpha, p.beta, p.gamma))
        out.push_back({l, fo.label, fo.lambda1, base + fo.lambda1 * p.epsilon, 1, false});
    } else {
      const auto shape = route == SpectrumRoute::Sphere
                             ? detail::BiaxialShape{p.alpha, p.alpha}
                             : *detail::biaxial_shape(p);
      for (int m = -l; m <= l; ++m) {
        const double lam = detail::biaxial_closed_form(l, m, shape.pair, shape.distinct);
        out.push_back({l, ModeLabel{std::nullopt, 0, m}, lam, base + lam * p.epsilon,
                       m == 0 ? 1 : 2, false});
      }
      std::stable_sort(out.begin() + first, out.end(), [](const auto &x, const auto &y) {
        return x.lambda1 < y.lambda1;
      });
    }
    for (auto it = out.begin() + first; it != out.end(); ++it) {
      const double dev = it->value - base;
      if (dev < -2.0 * l || dev >= 2.0 * l)
        it->window_flag = true;
    }
  }

  // adjacent clusters whose first-order spans touch
  for (int l = 0; l < L; ++l) {
    const std::size_t lo = static_cast<std::size_t>(l) * l;
    const std::size_t mid = static_cast<std::size_t>(l + 1) * (l + 1);
    const std::size_t hi = static_cast<std::size_t>(l + 2) * (l + 2);
    double top = out[lo].value, bottom = out[mid].value;
    for (std::size_t i = lo; i < mid; ++i)
      top = std::max(top, out[i].value);
    for (std::size_t i = mid; i < hi; ++i)
      bottom = std::min(bottom, out[i].value);
    if (top >= bottom) {
      for (std::size_t i = lo; i < hi; ++i)
        out[i].window_flag = true;
    }
  }
  return out;
}

} // namespace ellspec

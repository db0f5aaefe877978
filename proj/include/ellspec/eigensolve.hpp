#pragma once
// Real-symmetric eigenvalue machinery: tridiagonal QL iteration,
// positive-definiteness predicates and a dense generalized solver
// (Cholesky reduction + Householder tridiagonalization).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ellspec/error.hpp"

namespace ellspec {

/// Absolute floor applied to every entry-magnitude scale.
inline constexpr double kScaleFloor = 1e-300;

//==============================================================================
/// Symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal. offdiag[i] couples rows i and i+1.
template <std::floating_point Real> class BasicSymmetricTridiagonal {
public:
  BasicSymmetricTridiagonal(std::vector<Real> diag, std::vector<Real> offdiag)
      : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.empty())
      throw InvalidInput("tridiagonal matrix must have dimension >= 1");
    if (offdiag_.size() + 1 != diag_.size())
      throw InvalidInput("tridiagonal off-diagonal length must be n-1");
    for (Real v : diag_)
      if (!std::isfinite(v))
        throw InvalidInput("tridiagonal diagonal entry is not finite");
    for (Real v : offdiag_)
      if (!std::isfinite(v))
        throw InvalidInput("tridiagonal off-diagonal entry is not finite");
  }

  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const Real> diag() const noexcept { return diag_; }
  std::span<const Real> offdiag() const noexcept { return offdiag_; }

  /// max |entry| with an absolute floor; all relative tolerances use this.
  Real scale() const noexcept {
    Real s = static_cast<Real>(kScaleFloor);
    for (Real v : diag_)
      s = std::max(s, std::abs(v));
    for (Real v : offdiag_)
      s = std::max(s, std::abs(v));
    return s;
  }

  Real trace() const noexcept {
    Real t = 0;
    for (Real v : diag_)
      t += v;
    return t;
  }

  friend bool operator==(const BasicSymmetricTridiagonal &,
                         const BasicSymmetricTridiagonal &) = default;

private:
  std::vector<Real> diag_;
  std::vector<Real> offdiag_;
};

using SymmetricTridiagonal = BasicSymmetricTridiagonal<double>;

//==============================================================================
namespace detail {

/// Implicit QL with Wilkinson shifts on (d, e); e[i] couples i and i+1 and
/// e.size() == d.size(). On return d holds the (unsorted) eigenvalues.
template <std::floating_point Real>
void implicit_ql(std::vector<Real> &d, std::vector<Real> &e) {
  const int n = static_cast<int>(d.size());
  constexpr Real eps = std::numeric_limits<Real>::epsilon();
  constexpr int max_iter = 60;
  if (n > 0)
    e[n - 1] = 0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const Real dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd)
          break;
      }
      if (m == l)
        break;
      if (iter++ == max_iter)
        throw NumericalFailure("tridiagonal QL iteration did not converge");

      Real g = (d[l + 1] - d[l]) / (2 * e[l]);
      Real r = std::hypot(g, Real(1));
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      Real s = 1, c = 1, p = 0;
      int i = m - 1;
      bool deflated = false;
      for (; i >= l; --i) {
        const Real f = s * e[i];
        const Real b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0) {
          // underflow: split the problem here and restart
          d[i + 1] -= p;
          e[m] = 0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (deflated)
        continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0;
    } while (m != l);
  }
}

} // namespace detail

/// All eigenvalues of a symmetric tridiagonal matrix, ascending.
template <std::floating_point Real>
std::vector<Real>
tridiag_eigenvalues(const BasicSymmetricTridiagonal<Real> &m) {
  std::vector<Real> d(m.diag().begin(), m.diag().end());
  std::vector<Real> e(m.size(), Real(0));
  std::copy(m.offdiag().begin(), m.offdiag().end(), e.begin());
  detail::implicit_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

/// True iff every leading principal minor is positive. Uses the minor
/// recurrence d_i = r_i d_{i-1} - s_{i-1}^2 d_{i-2} in its ratio form
/// q_i = d_i / d_{i-1} (the Cholesky pivots), which cannot overflow.
template <std::floating_point Real>
bool is_positive_definite_exact(const BasicSymmetricTridiagonal<Real> &m) {
  const auto r = m.diag();
  const auto s = m.offdiag();
  Real q = r[0];
  if (!(q > 0))
    return false;
  for (std::size_t i = 1; i < r.size(); ++i) {
    q = r[i] - s[i - 1] * (s[i - 1] / q);
    if (!(q > 0))
      return false;
  }
  return true;
}

/// Sufficient PD test for tridiagonals with positive diagonal:
///   s_i^2 < r_i r_{i+1} / (4 cos^2(pi/(n+1)))   for every i.
/// For n = 1 this is just r_1 > 0.
template <std::floating_point Real>
bool andelic_fonseca_sufficient(const BasicSymmetricTridiagonal<Real> &m) {
  const auto r = m.diag();
  const auto s = m.offdiag();
  for (Real v : r)
    if (!(v > 0))
      return false;
  const std::size_t n = r.size();
  const Real c = std::cos(std::numbers::pi_v<Real> / static_cast<Real>(n + 1));
  const Real factor = Real(1) / (4 * c * c);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(s[i] * s[i] < factor * r[i] * r[i + 1]))
      return false;
  return true;
}

/// Both PD verdicts. sufficient implies exact.
struct PdVerdict {
  bool exact = false;
  bool sufficient = false;
  friend bool operator==(const PdVerdict &, const PdVerdict &) = default;
};

template <std::floating_point Real>
PdVerdict pd_verdict(const BasicSymmetricTridiagonal<Real> &m) {
  return {is_positive_definite_exact(m), andelic_fonseca_sufficient(m)};
}

//==============================================================================
/// Dense square matrix stored row-major; symmetric by contract.
template <std::floating_point Real> class BasicDenseSymmetricMatrix {
public:
  explicit BasicDenseSymmetricMatrix(std::size_t n) : n_(n), a_(n * n, Real(0)) {}
  BasicDenseSymmetricMatrix(std::size_t n, std::vector<Real> row_major)
      : n_(n), a_(std::move(row_major)) {
    if (a_.size() != n_ * n_)
      throw InvalidInput("dense matrix storage must hold n*n entries");
  }

  static BasicDenseSymmetricMatrix identity(std::size_t n) {
    BasicDenseSymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }
  static BasicDenseSymmetricMatrix diagonal(std::span<const Real> d) {
    BasicDenseSymmetricMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      m(i, i) = d[i];
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  Real &operator()(std::size_t i, std::size_t j) noexcept {
    assert(i < n_ && j < n_);
    return a_[i * n_ + j];
  }
  Real operator()(std::size_t i, std::size_t j) const noexcept {
    assert(i < n_ && j < n_);
    return a_[i * n_ + j];
  }
  std::span<const Real> data() const noexcept { return a_; }

  Real scale() const noexcept {
    Real s = static_cast<Real>(kScaleFloor);
    for (Real v : a_)
      s = std::max(s, std::abs(v));
    return s;
  }

  /// |a_ij - a_ji| <= rel_tol * scale() for every pair.
  bool is_symmetric(Real rel_tol = Real(1e-12)) const noexcept {
    const Real tol = rel_tol * scale();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (!(std::abs((*this)(i, j) - (*this)(j, i)) <= tol))
          return false;
    return true;
  }

private:
  std::size_t n_;
  std::vector<Real> a_;
};

using DenseSymmetricMatrix = BasicDenseSymmetricMatrix<double>;

namespace detail {

/// In-place lower Cholesky factor; returns false if a pivot is not positive.
template <std::floating_point Real>
bool cholesky_lower(BasicDenseSymmetricMatrix<Real> &a) {
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < n; ++j) {
    Real diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k)
      diag -= a(j, k) * a(j, k);
    if (!(diag > 0))
      return false;
    const Real ljj = std::sqrt(diag);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Real v = a(i, j);
      for (std::size_t k = 0; k < j; ++k)
        v -= a(i, k) * a(j, k);
      a(i, j) = v / ljj;
    }
    for (std::size_t i = 0; i < j; ++i)
      a(i, j) = 0;
  }
  return true;
}

/// Overwrites b (n x n, row-major) with L^{-1} b, column by column.
template <std::floating_point Real>
void forward_substitute(const BasicDenseSymmetricMatrix<Real> &lower,
                        BasicDenseSymmetricMatrix<Real> &b) {
  const std::size_t n = lower.size();
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t i = 0; i < n; ++i) {
      Real v = b(i, col);
      for (std::size_t k = 0; k < i; ++k)
        v -= lower(i, k) * b(k, col);
      b(i, col) = v / lower(i, i);
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// Returns {diag, offdiag}; the input is destroyed.
template <std::floating_point Real>
std::pair<std::vector<Real>, std::vector<Real>>
householder_tridiagonalize(BasicDenseSymmetricMatrix<Real> &a) {
  const std::size_t n = a.size();
  std::vector<Real> diag(n), off(n > 0 ? n - 1 : 0);
  std::vector<Real> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Real norm2 = 0;
    for (std::size_t i = k + 1; i < n; ++i)
      norm2 += a(i, k) * a(i, k);
    const Real norm = std::sqrt(norm2);
    if (norm == 0) {
      off[k] = 0;
      continue;
    }
    const Real x0 = a(k + 1, k);
    const Real alpha = x0 > 0 ? -norm : norm;
    // v = x - alpha e1, normalized
    Real vnorm2 = 0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k);
      if (i == k + 1)
        v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    const Real vnorm = std::sqrt(vnorm2);
    if (vnorm == 0) {
      off[k] = a(k + 1, k);
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      v[i] /= vnorm;

    // p = A v on the trailing block, c = v^T p, q = p - c v
    Real c = 0;
    for (std::size_t i = k + 1; i < n; ++i) {
      Real s = 0;
      for (std::size_t j = k + 1; j < n; ++j)
        s += a(i, j) * v[j];
      p[i] = s;
      c += v[i] * s;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      p[i] -= c * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) -= 2 * (v[i] * p[j] + p[i] * v[j]);

    off[k] = alpha;
    a(k + 1, k) = a(k, k + 1) = alpha;
    for (std::size_t i = k + 2; i < n; ++i)
      a(i, k) = a(k, i) = 0;
  }
  for (std::size_t i = 0; i < n; ++i)
    diag[i] = a(i, i);
  if (n >= 2)
    off[n - 2] = a(n - 1, n - 2);
  return {std::move(diag), std::move(off)};
}

} // namespace detail

/// Eigenvalues of the symmetric pencil S v = lambda M v, ascending.
/// Reduces to the standard problem L^{-1} S L^{-T} with M = L L^T.
template <std::floating_point Real>
std::vector<Real>
dense_generalized_eigenvalues(const BasicDenseSymmetricMatrix<Real> &stiffness,
                              const BasicDenseSymmetricMatrix<Real> &mass) {
  const std::size_t n = stiffness.size();
  if (mass.size() != n)
    throw InvalidInput("stiffness and mass matrices differ in dimension");
  if (n == 0)
    return {};
  if (!stiffness.is_symmetric() || !mass.is_symmetric())
    throw InvalidInput("generalized eigenproblem requires symmetric matrices");

  BasicDenseSymmetricMatrix<Real> lower = mass;
  if (!detail::cholesky_lower(lower))
    throw InvalidInput("mass matrix is not positive definite");

  BasicDenseSymmetricMatrix<Real> x = stiffness;
  detail::forward_substitute(lower, x); // x = L^{-1} S
  BasicDenseSymmetricMatrix<Real> xt(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      xt(i, j) = x(j, i);
  detail::forward_substitute(lower, xt); // L^{-1} S L^{-T}
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Real avg = (xt(i, j) + xt(j, i)) / 2;
      xt(i, j) = xt(j, i) = avg;
    }

  auto [diag, off] = detail::householder_tridiagonalize(xt);
  return tridiag_eigenvalues(
      BasicSymmetricTridiagonal<Real>(std::move(diag), std::move(off)));
}

} // namespace ellspec

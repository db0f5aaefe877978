#pragma once
// Independent ground truth for the first-order model: a Rayleigh-Ritz
// (Galerkin) discretization of the Laplace-Beltrami operator on the actual
// ellipsoid surface.
//
// The surface is parametrized by (theta, phi) -> (A sin t cos p, B sin t sin p,
// C cos t) and the trial space is the span of real spherical harmonics of
// degree <= N pulled back through this map. Integrals use Gauss-Legendre
// nodes in cos(theta) (which never touch the poles) and the uniform rule in
// phi. For the unit sphere the basis is exact and the quadrature integrates
// every product exactly, so the discrete spectrum equals l(l+1) to rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ellspec/eigensolve.hpp"
#include "ellspec/error.hpp"
#include "ellspec/geometry.hpp"

namespace ellspec {

/// Raised when at some eps the oracle eigenvalues of adjacent levels can no
/// longer be separated by index; a smaller eps is needed.
class ClusterOverlapError : public InvalidInput {
public:
  explicit ClusterOverlapError(const std::string &what) : InvalidInput(what) {}
};

/// 0 means "use the machine's parallelism".
inline unsigned resolve_threads(unsigned requested) noexcept {
  if (requested > 0)
    return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

//==============================================================================
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

/// {P_n(x), P_{n-1}(x)} by the three-term recurrence.
inline std::pair<double, double> legendre_pair(int n, double x) noexcept {
  double p0 = 1, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

} // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1)
    throw InvalidInput("Gauss-Legendre rule needs at least one node");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pn1] = detail::legendre_pair(n, x);
      const double dx = pn / (n * (x * pn - pn1) / (x * x - 1));
      x -= dx;
      if (std::abs(dx) <= 1e-16)
        break;
    }
    const auto [pn, pn1] = detail::legendre_pair(n, x);
    const double dp = n * (x * pn - pn1) / (x * x - 1);
    q.nodes[n - 1 - i] = x;
    q.nodes[i] = -x;
    q.weights[i] = q.weights[n - 1 - i] = 2.0 / ((1 - x * x) * dp * dp);
  }
  return q;
}

//==============================================================================
/// Orthonormal associated Legendre values Pbar_l^m(cos t) for 0 <= m <= l <= N
/// and their theta-derivatives, at a single angle with sin t > 0.
/// Pbar includes the 1/sqrt(4 pi) sphere normalization, so
/// Y_l0 = Pbar_l^0 and Y_lm = sqrt(2) Pbar_l^|m| (cos or sin)(|m| phi).
class LegendreTable {
public:
  LegendreTable(int degree, double x) : n_(degree), value_(size(degree)), dtheta_(size(degree)) {
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int m = 0; m <= n_; ++m) {
      if (m > 0)
        pmm *= -std::sqrt((2.0 * m + 1) / (2.0 * m)) * s;
      at(value_, m, m) = pmm;
      if (m + 1 <= n_)
        at(value_, m + 1, m) = std::sqrt(2.0 * m + 3) * x * pmm;
      for (int l = m + 2; l <= n_; ++l) {
        const double c1 = std::sqrt((4.0 * l * l - 1) / (double(l) * l - double(m) * m));
        const double c2 = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                    (4.0 * (l - 1) * (l - 1) - 1));
        at(value_, l, m) = c1 * (x * at(value_, l - 1, m) - c2 * at(value_, l - 2, m));
      }
    }
    // dP/dtheta = (l x P_l^m - sqrt((2l+1)(l^2-m^2)/(2l-1)) P_{l-1}^m) / sin t
    for (int m = 0; m <= n_; ++m)
      for (int l = m; l <= n_; ++l) {
        double v = l * x * at(value_, l, m);
        if (l > m)
          v -= std::sqrt((2.0 * l + 1) * (double(l) * l - double(m) * m) / (2.0 * l - 1)) *
               at(value_, l - 1, m);
        at(dtheta_, l, m) = v / s;
      }
  }

  double value(int l, int m) const noexcept { return value_[index(l, m)]; }
  double dtheta(int l, int m) const noexcept { return dtheta_[index(l, m)]; }

private:
  static std::size_t size(int n) { return static_cast<std::size_t>(n + 1) * (n + 2) / 2; }
  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }
  static double &at(std::vector<double> &v, int l, int m) { return v[index(l, m)]; }

  int n_;
  std::vector<double> value_;
  std::vector<double> dtheta_;
};

/// Index of the real spherical harmonic (l, m), -l <= m <= l.
inline constexpr std::size_t harmonic_index(int l, int m) noexcept {
  return static_cast<std::size_t>(l * l + l + m);
}

//==============================================================================
struct GalerkinConfig {
  int basis_degree = 12;
  int n_theta = 26;
  int n_phi = 52;

  /// Degree d with the default quadrature 2d + 2 by 4d + 4.
  static GalerkinConfig for_degree(int d) { return {d, 2 * d + 2, 4 * d + 4}; }

  void validate() const {
    if (basis_degree < 1)
      throw ConfigError("basis degree must be positive");
    if (n_theta < basis_degree + 1)
      throw ConfigError("n_theta must be at least basis_degree + 1");
    if (n_phi < 2 * basis_degree + 1)
      throw ConfigError("n_phi must be at least 2 basis_degree + 1");
  }

  int basis_size() const noexcept { return (basis_degree + 1) * (basis_degree + 1); }
  /// Leading eigenvalues considered resolved: (N - 2)^2.
  int trusted_count() const noexcept {
    const int k = std::max(0, basis_degree - 2);
    return k * k;
  }
  friend bool operator==(const GalerkinConfig &, const GalerkinConfig &) = default;
};

struct GalerkinSystem {
  DenseSymmetricMatrix stiffness;
  DenseSymmetricMatrix mass;
};

/// Stiffness int g^{ij} d_i u d_j v dA and mass int u v dA over the pulled
/// back harmonic basis. Every entry is an independent fixed-order sum, so
/// the result does not depend on the thread count.
inline GalerkinSystem assemble_galerkin(const Ellipsoid &e, const GalerkinConfig &cfg,
                                        unsigned threads = 0) {
  cfg.validate();
  const int N = cfg.basis_degree;
  const std::size_t nb = static_cast<std::size_t>(cfg.basis_size());
  const auto rule = gauss_legendre(cfg.n_theta);
  const std::size_t nt = static_cast<std::size_t>(cfg.n_theta);
  const std::size_t np = static_cast<std::size_t>(cfg.n_phi);
  const std::size_t nq = nt * np;

  const double A2 = e.a() * e.a(), B2 = e.b() * e.b(), C2 = e.c() * e.c();

  // Per basis function b and node q: value, d/dtheta, (d/dphi)/sin(theta).
  // Stored basis-major so the pair loops below are contiguous dot products.
  std::vector<double> u(nb * nq), dt(nb * nq), dp(nb * nq);
  // Node-weighted metric combinations; the tangent frame is (d_theta, d_phi / sin).
  std::vector<double> wm(nq), g11(nq), g12(nq), g22(nq);

  for (std::size_t it = 0; it < nt; ++it) {
    const double x = rule.nodes[it];
    const double sin_t = std::sqrt((1.0 - x) * (1.0 + x));
    const LegendreTable leg(N, x);
    for (std::size_t ip = 0; ip < np; ++ip) {
      const std::size_t q = it * np + ip;
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(ip) / np;
      const double w = rule.weights[it] * 2.0 * std::numbers::pi / np;
      const double cp = std::cos(phi), sp = std::sin(phi);
      const double h11 = x * x * (A2 * cp * cp + B2 * sp * sp) + C2 * sin_t * sin_t;
      const double h12 = x * sp * cp * (B2 - A2);
      const double h22 = A2 * sp * sp + B2 * cp * cp;
      const double root_det = std::sqrt(h11 * h22 - h12 * h12);
      wm[q] = w * root_det;
      // g^{ij} sqrt(det g) = adj(h) / sqrt(det h) in the scaled frame
      g11[q] = w * h22 / root_det;
      g12[q] = -w * h12 / root_det;
      g22[q] = w * h11 / root_det;

      for (int l = 0; l <= N; ++l)
        for (int m = -l; m <= l; ++m) {
          const int am = m < 0 ? -m : m;
          const double norm = m == 0 ? 1.0 : std::numbers::sqrt2;
          double trig, dtrig;
          if (m >= 0) {
            trig = std::cos(am * phi);
            dtrig = -am * std::sin(am * phi);
          } else {
            trig = std::sin(am * phi);
            dtrig = am * std::cos(am * phi);
          }
          const std::size_t b = harmonic_index(l, m) * nq + q;
          u[b] = norm * leg.value(l, am) * trig;
          dt[b] = norm * leg.dtheta(l, am) * trig;
          dp[b] = norm * leg.value(l, am) * dtrig / sin_t;
        }
    }
  }

  // X_b = g11 dt_b + g12 dp_b, Y_b = g12 dt_b + g22 dp_b, Z_b = wm u_b
  std::vector<double> X(nb * nq), Y(nb * nq), Z(nb * nq);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t q = 0; q < nq; ++q) {
      const std::size_t k = b * nq + q;
      X[k] = g11[q] * dt[k] + g12[q] * dp[k];
      Y[k] = g12[q] * dt[k] + g22[q] * dp[k];
      Z[k] = wm[q] * u[k];
    }

  GalerkinSystem sys{DenseSymmetricMatrix(nb), DenseSymmetricMatrix(nb)};
  auto rows = [&](unsigned worker, unsigned workers) {
    for (std::size_t a = worker; a < nb; a += workers)
      for (std::size_t b = a; b < nb; ++b) {
        const double *ta = &dt[a * nq], *pa = &dp[a * nq], *ua = &u[a * nq];
        const double *xb = &X[b * nq], *yb = &Y[b * nq], *zb = &Z[b * nq];
        double s = 0, m = 0;
        for (std::size_t q = 0; q < nq; ++q) {
          s += ta[q] * xb[q] + pa[q] * yb[q];
          m += ua[q] * zb[q];
        }
        sys.stiffness(a, b) = sys.stiffness(b, a) = s;
        sys.mass(a, b) = sys.mass(b, a) = m;
      }
  };
  const unsigned workers = std::min<unsigned>(resolve_threads(threads),
                                              static_cast<unsigned>(nb));
  if (workers <= 1) {
    rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(rows, w, workers);
  }
  return sys;
}

//==============================================================================
struct OracleSpectrum {
  std::vector<double> eigenvalues;
  GalerkinConfig config;
  Ellipsoid ellipsoid;
  int trusted_count = 0;
};

/// Ritz values of the Laplace-Beltrami operator on e, ascending.
inline OracleSpectrum laplace_beltrami_spectrum(const Ellipsoid &e,
                                                const GalerkinConfig &cfg = {},
                                                unsigned threads = 0) {
  const auto sys = assemble_galerkin(e, cfg, threads);
  std::vector<double> ev;
  try {
    ev = dense_generalized_eigenvalues(sys.stiffness, sys.mass);
  } catch (const InvalidInput &err) {
    throw ConfigError(std::string("Galerkin quadrature too coarse: ") + err.what());
  }
  if (ev.empty() || !(std::abs(ev.front()) <= 1e-8))
    throw NumericalFailure("Galerkin spectrum lost the constant mode");
  return {std::move(ev), cfg, e, cfg.trusted_count()};
}

//==============================================================================
struct FirstOrderEstimates {
  double epsilon = 0;
  /// per_level[l] holds the 2l + 1 central-difference estimates of lambda1, ascending.
  std::vector<std::vector<double>> per_level;
};

namespace detail {

/// Each eigenvalue in the index block of level l must sit strictly between
/// the half-gaps to the neighbouring levels.
inline void require_separated_clusters(const std::vector<double> &ev, int L, double eps) {
  for (int l = 0; l <= L; ++l) {
    const double base = static_cast<double>(l) * (l + 1);
    const double below = base - l, above = base + l + 1;
    for (int i = l * l; i < (l + 1) * (l + 1); ++i)
      if (!(ev[i] > below && ev[i] < above) && l > 0) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "eigenvalue clusters of levels near l=%d overlap at eps=%.6g; "
                      "use a smaller eps",
                      l, eps);
        throw ClusterOverlapError(buf);
      }
  }
}

} // namespace detail

/// Central differences (Lambda(eps) - Lambda(-eps)) / (2 eps) of the oracle
/// spectrum of (1 + alpha t, 1 + beta t, 1 + gamma t), cluster by cluster.
/// Sorting reverses the branch order between +eps and -eps, so the k-th
/// largest at +eps is paired with the k-th smallest at -eps.
inline FirstOrderEstimates first_order_coefficients(double alpha, double beta, double gamma,
                                                    int L, double eps,
                                                    const GalerkinConfig &cfg = {},
                                                    unsigned threads = 0) {
  if (L < 0)
    throw InvalidInput("level cap L must be non-negative");
  if (!(eps > 0))
    throw InvalidInput("finite-difference step must be positive");
  cfg.validate();
  const int needed = (L + 1) * (L + 1);
  if (needed > cfg.trusted_count())
    throw ConfigError("basis degree too small for the requested level cap");

  const auto plus = laplace_beltrami_spectrum(
      ellipsoid_from_params({alpha, beta, gamma, eps}), cfg, threads);
  const auto minus = laplace_beltrami_spectrum(
      ellipsoid_from_params({alpha, beta, gamma, -eps}), cfg, threads);
  detail::require_separated_clusters(plus.eigenvalues, L, eps);
  detail::require_separated_clusters(minus.eigenvalues, L, -eps);

  FirstOrderEstimates out;
  out.epsilon = eps;
  out.per_level.resize(L + 1);
  for (int l = 0; l <= L; ++l) {
    const int lo = l * l, n = 2 * l + 1;
    auto &est = out.per_level[l];
    est.resize(n);
    for (int k = 0; k < n; ++k)
      est[k] = (plus.eigenvalues[lo + k] - minus.eigenvalues[lo + n - 1 - k]) / (2 * eps);
    std::sort(est.begin(), est.end());
  }
  return out;
}

} // namespace ellspec

#pragma once
// Index-by-index comparison of the first-order ellipsoid spectrum with the
// round sphere, optionally cross-checked against the Galerkin oracle.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ellspec/geometry.hpp"
#include "ellspec/oracle.hpp"
#include "ellspec/perturbation.hpp"

namespace ellspec {

/// Relative slack for a margin to count as non-negative.
inline constexpr double kMarginTol = 1e-12;
/// |lambda1| at or below this (times the level scale) counts as a zero mode.
inline constexpr double kZeroModeTol = 1e-12;
/// Largest finite-difference step used for the oracle cross-check.
inline constexpr double kOracleMaxStep = 1e-2;

/// {0} followed by l(l+1) repeated 2l + 1 times, l = 1..L.
inline std::vector<double> sphere_spectrum(int L) {
  if (L < 0)
    throw InvalidInput("level cap L must be non-negative");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(L + 1) * (L + 1));
  for (int l = 0; l <= L; ++l)
    out.insert(out.end(), 2 * l + 1, static_cast<double>(l) * (l + 1));
  return out;
}

struct ComparisonEntry {
  int index = 0;
  int l = 0;
  std::string label;
  double lambda1 = 0;
  double sphere = 0;
  double perturbed = 0;
  double margin = 0;
  bool window_flag = false;
};

struct ClusterDeviation {
  int l = 0;
  double max_deviation = 0;
};

struct OracleCrosscheck {
  double step = 0;
  GalerkinConfig config;
  std::vector<ClusterDeviation> clusters;
};

struct ComparisonReport {
  int level_cap = 0;
  PerturbationParams params;
  SpectrumRoute route = SpectrumRoute::Sphere;
  bool admissible = false;
  EpsilonInterval interval;
  std::vector<ComparisonEntry> entries;
  bool verdict = false;
  int strictly_positive_margins = 0;
  int zero_modes = 0;
  std::optional<OracleCrosscheck> oracle_crosscheck;
  std::vector<std::string> diagnostics;
};

struct CompareOptions {
  bool with_oracle = false;
  GalerkinConfig oracle_config{};
  unsigned threads = 0;
};

inline ComparisonReport compare(int L, const PerturbationParams &p,
                                const CompareOptions &opt = {}) {
  ComparisonReport rep;
  rep.level_cap = L;
  rep.params = p;
  rep.route = spectrum_route(p);
  rep.interval = epsilon_admissible_interval(p.alpha, p.beta, p.gamma);
  rep.admissible = rep.interval.contains(p.epsilon);
  if (!rep.admissible)
    rep.diagnostics.push_back("parameters outside the K >= 1 region (" +
                              rep.interval.condition + ")");

  auto spectrum = assemble_spectrum(L, p);
  const auto sphere = sphere_spectrum(L);
  std::vector<std::size_t> order(spectrum.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return spectrum[i].value < spectrum[j].value;
  });

  rep.verdict = true;
  bool flagged = false;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto &s = spectrum[order[i]];
    ComparisonEntry e;
    e.index = static_cast<int>(i);
    e.l = s.l;
    e.label = s.label.to_string();
    e.lambda1 = s.lambda1;
    e.sphere = sphere[i];
    e.perturbed = s.value;
    e.margin = s.value - sphere[i];
    e.window_flag = s.window_flag;
    flagged = flagged || s.window_flag;
    if (e.margin < -kMarginTol * std::max(1.0, sphere[i]))
      rep.verdict = false;
    if (e.margin > 0)
      ++rep.strictly_positive_margins;
    if (std::abs(s.lambda1) <= kZeroModeTol * std::max(1.0, static_cast<double>(s.l) * (s.l + 1)))
      ++rep.zero_modes;
    rep.entries.push_back(std::move(e));
  }
  if (flagged)
    rep.diagnostics.push_back(
        "first-order clusters leave their windows; eps may be beyond the expansion's range");

  if (opt.with_oracle) {
    OracleCrosscheck xc;
    xc.step = p.epsilon > 0 ? std::min(p.epsilon, kOracleMaxStep) : kOracleMaxStep;
    xc.config = opt.oracle_config;
    const auto est =
        first_order_coefficients(p.alpha, p.beta, p.gamma, L, xc.step, opt.oracle_config,
                                 opt.threads);
    for (int l = 0; l <= L; ++l) {
      std::vector<double> closed;
      for (const auto &s : spectrum)
        if (s.l == l)
          closed.push_back(s.lambda1);
      std::sort(closed.begin(), closed.end());
      double dev = 0;
      for (std::size_t k = 0; k < closed.size(); ++k)
        dev = std::max(dev, std::abs(closed[k] - est.per_level[l][k]));
      xc.clusters.push_back({l, dev});
    }
    rep.oracle_crosscheck = std::move(xc);
  }
  return rep;
}

} // namespace ellspec

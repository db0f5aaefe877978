#pragma once
// JSON encodings of the library's result types. Doubles are written in
// shortest round-trip form, so every value re-parses to the same bits.

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

#include "ellspec/comparison.hpp"
#include "ellspec/eigensolve.hpp"
#include "ellspec/geometry.hpp"
#include "ellspec/perturbation.hpp"

namespace ellspec {

using Json = nlohmann::ordered_json;

/// %.17g; used for CSV cells and for echoing numbers back as CLI arguments.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json to_json(const SurfacePoint &p) { return Json::array({p.x, p.y, p.z}); }

inline Json to_json(const Ellipsoid &e) { return Json::array({e.a(), e.b(), e.c()}); }

inline Json to_json(const PerturbationParams &p) {
  return Json{{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"epsilon", p.epsilon}};
}

inline Json to_json(const CurvatureExtrema &k) {
  return Json{{"k_min", k.k_min},
              {"k_max", k.k_max},
              {"argmin", to_json(k.argmin)},
              {"argmax", to_json(k.argmax)}};
}

inline Json to_json(const EpsilonInterval &iv) {
  Json j{{"text", to_string(iv)}, {"empty", iv.empty}};
  j["upper"] = iv.bounded() ? Json(iv.upper) : Json(nullptr);
  j["upper_closed"] = iv.upper_closed;
  j["condition"] = iv.condition;
  j["order"] = iv.order;
  return j;
}

inline Json to_json(const SymmetricTridiagonal &m) {
  return Json{{"diag", Json(std::vector<double>(m.diag().begin(), m.diag().end()))},
              {"offdiag", Json(std::vector<double>(m.offdiag().begin(), m.offdiag().end()))}};
}

inline Json to_json(const SpectrumEntry &s) {
  return Json{{"l", s.l},
              {"label", s.label.to_string()},
              {"multiplicity", s.multiplicity},
              {"lambda1", s.lambda1},
              {"value", s.value},
              {"window_flag", s.window_flag}};
}

inline Json to_json(const ComparisonReport &r) {
  Json j;
  j["level_cap"] = r.level_cap;
  j["params"] = to_json(r.params);
  j["route"] = std::string(to_string(r.route));
  j["admissible"] = r.admissible;
  j["interval"] = to_json(r.interval);
  Json entries = Json::array();
  for (const auto &e : r.entries)
    entries.push_back(Json{{"index", e.index},
                           {"l", e.l},
                           {"label", e.label},
                           {"lambda1", e.lambda1},
                           {"sphere", e.sphere},
                           {"perturbed", e.perturbed},
                           {"margin", e.margin},
                           {"window_flag", e.window_flag}});
  j["entries"] = std::move(entries);
  j["verdict"] = r.verdict;
  j["strictly_positive_margins"] = r.strictly_positive_margins;
  j["zero_modes"] = r.zero_modes;
  if (r.oracle_crosscheck) {
    const auto &xc = *r.oracle_crosscheck;
    Json clusters = Json::array();
    for (const auto &c : xc.clusters)
      clusters.push_back(Json{{"l", c.l}, {"max_deviation", c.max_deviation}});
    j["oracle_crosscheck"] = Json{{"step", xc.step},
                                  {"basis_degree", xc.config.basis_degree},
                                  {"n_theta", xc.config.n_theta},
                                  {"n_phi", xc.config.n_phi},
                                  {"clusters", std::move(clusters)}};
  } else {
    j["oracle_crosscheck"] = nullptr;
  }
  j["diagnostics"] = r.diagnostics;
  return j;
}

} // namespace ellspec

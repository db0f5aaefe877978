#pragma once
// Command-line front end. run_cli() is the whole program minus process
// plumbing, so it can be driven in-process by tests.
//
// stdout carries a JSON envelope
//   {"command": ..., "inputs": ..., "results": ..., "diagnostics": [...]}
// or, with --format csv, a flat table. Exit codes: 0 success, 2 invalid
// input, 3 numerical failure.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ellspec/comparison.hpp"
#include "ellspec/eigensolve.hpp"
#include "ellspec/error.hpp"
#include "ellspec/geometry.hpp"
#include "ellspec/oracle.hpp"
#include "ellspec/perturbation.hpp"
#include "ellspec/serialize.hpp"

namespace ellspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

struct CliResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

namespace detail {

struct Envelope {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  std::vector<std::string> diagnostics;
  /// Header + rows for --format csv.
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

inline std::string csv_bool(bool b) { return b ? "true" : "false"; }

inline std::string render_csv(const Envelope &env) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(env.csv_header);
  for (const auto &r : env.csv_rows)
    line(r);
  return os.str();
}

inline void require_finite(double v, const char *name) {
  if (!std::isfinite(v))
    throw InvalidInput(std::string(name) + " must be finite");
}

//------------------------------------------------------------------------------
struct CurvatureArgs {
  std::vector<double> axes, params;
  double eps = 0;
  int grid = 0;
};

inline Envelope run_curvature(const CurvatureArgs &a, bool eps_given) {
  Envelope env;
  env.command = "curvature";
  if (!a.axes.empty() == !a.params.empty())
    throw InvalidInput("exactly one of --axes or --params is required");
  std::optional<Ellipsoid> e;
  if (!a.axes.empty()) {
    if (a.axes.size() != 3)
      throw InvalidInput("--axes takes three comma-separated values");
    env.inputs["axes"] = a.axes;
    e.emplace(a.axes[0], a.axes[1], a.axes[2]);
  } else {
    if (a.params.size() != 3)
      throw InvalidInput("--params takes three comma-separated values");
    if (!eps_given)
      throw InvalidInput("--params requires --eps");
    for (double v : a.params)
      require_finite(v, "perturbation coefficient");
    require_finite(a.eps, "eps");
    env.inputs["params"] = a.params;
    env.inputs["eps"] = a.eps;
    e.emplace(ellipsoid_from_params({a.params[0], a.params[1], a.params[2], a.eps}));
    const auto iv = epsilon_admissible_interval(a.params[0], a.params[1], a.params[2]);
    env.results["interval"] = to_json(iv);
  }
  const auto ext = curvature_extrema(*e);
  env.results["axes"] = to_json(*e);
  env.results["class"] = std::string(to_string(classify(*e)));
  env.results["k_min"] = ext.k_min;
  env.results["k_max"] = ext.k_max;
  env.results["argmin"] = to_json(ext.argmin);
  env.results["argmax"] = to_json(ext.argmax);
  env.results["admissible"] = axis_admissible(*e);

  env.csv_header = {"k_min", "k_max", "admissible"};
  env.csv_rows.push_back({format_number(ext.k_min), format_number(ext.k_max),
                          csv_bool(axis_admissible(*e))});

  if (a.grid != 0) {
    if (a.grid < 2)
      throw InvalidInput("--grid needs at least 2 polar samples");
    env.inputs["grid"] = a.grid;
    const int nt = a.grid, np = 2 * a.grid;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    env.csv_header = {"theta", "phi", "x", "y", "z", "K"};
    env.csv_rows.clear();
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < np; ++j) {
        const double theta = std::numbers::pi * i / (nt - 1);
        const double phi = 2.0 * std::numbers::pi * j / np;
        const auto p = e->point_at(theta, phi);
        const double k = gaussian_curvature(*e, p);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
        env.csv_rows.push_back({format_number(theta), format_number(phi), format_number(p.x),
                                format_number(p.y), format_number(p.z), format_number(k)});
      }
    env.results["grid"] = Json{{"n_theta", nt}, {"n_phi", np}, {"sampled_min", lo},
                               {"sampled_max", hi}};
  }
  return env;
}

//------------------------------------------------------------------------------
struct TripleArgs {
  double alpha = 0, beta = 0, gamma = 0;
};

inline void echo_triple(Envelope &env, const TripleArgs &t) {
  require_finite(t.alpha, "alpha");
  require_finite(t.beta, "beta");
  require_finite(t.gamma, "gamma");
  env.inputs["alpha"] = t.alpha;
  env.inputs["beta"] = t.beta;
  env.inputs["gamma"] = t.gamma;
}

inline Envelope run_admissible(const TripleArgs &t) {
  Envelope env;
  env.command = "admissible";
  echo_triple(env, t);
  const auto iv = epsilon_admissible_interval(t.alpha, t.beta, t.gamma);
  env.results = to_json(iv);
  env.csv_header = {"interval", "empty", "upper", "upper_closed"};
  env.csv_rows.push_back({to_string(iv), csv_bool(iv.empty),
                          iv.bounded() ? format_number(iv.upper) : "", csv_bool(iv.upper_closed)});
  return env;
}

//------------------------------------------------------------------------------
struct SpectrumArgs {
  TripleArgs t;
  int L = 0;
  double eps = 0;
  bool matrices = false;
  bool oracle = false;
  int degree = 12;
};

inline PerturbationParams params_of(const SpectrumArgs &s) {
  return {s.t.alpha, s.t.beta, s.t.gamma, s.eps};
}

inline void validate_spectrum_args(const SpectrumArgs &s) {
  if (s.L < 0)
    throw InvalidInput("--L must be non-negative");
  require_finite(s.eps, "eps");
  if (s.eps < 0)
    throw InvalidInput("--eps must be non-negative");
}

inline Envelope run_perturb(const SpectrumArgs &s) {
  Envelope env;
  env.command = "perturb";
  validate_spectrum_args(s);
  env.inputs["L"] = s.L;
  echo_triple(env, s.t);
  env.inputs["eps"] = s.eps;
  env.inputs["matrices"] = s.matrices;

  const auto p = params_of(s);
  const auto spectrum = assemble_spectrum(s.L, p);
  const auto iv = epsilon_admissible_interval(p.alpha, p.beta, p.gamma);
  env.results["route"] = std::string(to_string(spectrum_route(p)));
  env.results["admissible"] = iv.contains(p.epsilon);
  env.results["interval"] = to_json(iv);
  Json entries = Json::array();
  bool flagged = false;
  env.csv_header = {"l", "label", "multiplicity", "lambda1", "value", "window_flag"};
  for (const auto &e : spectrum) {
    entries.push_back(to_json(e));
    flagged = flagged || e.window_flag;
    env.csv_rows.push_back({std::to_string(e.l), e.label.to_string(),
                            std::to_string(e.multiplicity), format_number(e.lambda1),
                            format_number(e.value), csv_bool(e.window_flag)});
  }
  env.results["entries"] = std::move(entries);
  if (flagged)
    env.diagnostics.push_back("some first-order values leave their cluster window");
  try {
    (void)ellipsoid_from_params(p);
  } catch (const InvalidInput &) {
    env.diagnostics.push_back("a semi-axis is non-positive at this eps; values are formal");
  }

  if (s.matrices) {
    Json mats = Json::array();
    for (int l = 1; l <= s.L; ++l) {
      const auto dims = matrix_dimensions(l);
      for (MatrixFamily f : kAllFamilies) {
        if (dims[f] == 0)
          continue;
        Json m = to_json(build_matrix(l, f, p.alpha, p.beta, p.gamma));
        m["l"] = l;
        m["family"] = std::string(to_string(f));
        m["dimension"] = dims[f];
        mats.push_back(std::move(m));
      }
    }
    env.results["matrices"] = std::move(mats);
  }
  return env;
}

//------------------------------------------------------------------------------
inline Envelope run_pdcheck(int l, const TripleArgs &t) {
  Envelope env;
  env.command = "pdcheck";
  if (l < 1)
    throw InvalidInput("--l must be at least 1");
  env.inputs["l"] = l;
  echo_triple(env, t);
  const auto dims = matrix_dimensions(l);
  Json fams = Json::array();
  bool all_exact = true;
  env.csv_header = {"family", "dimension", "positive_diagonal", "exact", "sufficient",
                    "min_eigenvalue"};
  for (MatrixFamily f : kAllFamilies) {
    if (dims[f] == 0)
      continue;
    const auto m = build_matrix(l, f, t.alpha, t.beta, t.gamma);
    const auto v = pd_verdict(m);
    const auto ev = tridiag_eigenvalues(m);
    const bool pos_diag =
        std::all_of(m.diag().begin(), m.diag().end(), [](double d) { return d > 0; });
    all_exact = all_exact && v.exact;
    Json j = to_json(m);
    j["family"] = std::string(to_string(f));
    j["dimension"] = dims[f];
    j["positive_diagonal"] = pos_diag;
    j["exact"] = v.exact;
    j["sufficient"] = v.sufficient;
    j["eigenvalues"] = ev;
    fams.push_back(std::move(j));
    env.csv_rows.push_back({std::string(to_string(f)), std::to_string(dims[f]),
                            csv_bool(pos_diag), csv_bool(v.exact), csv_bool(v.sufficient),
                            format_number(ev.front())});
  }
  env.results["families"] = std::move(fams);
  env.results["all_positive_definite"] = all_exact;
  return env;
}

//------------------------------------------------------------------------------
inline Envelope run_compare(const SpectrumArgs &s, unsigned threads) {
  Envelope env;
  env.command = "compare";
  validate_spectrum_args(s);
  env.inputs["L"] = s.L;
  echo_triple(env, s.t);
  env.inputs["eps"] = s.eps;
  env.inputs["oracle"] = s.oracle;
  if (s.oracle)
    env.inputs["degree"] = s.degree;

  CompareOptions opt;
  opt.with_oracle = s.oracle;
  opt.oracle_config = GalerkinConfig::for_degree(s.degree);
  opt.threads = threads;
  const auto rep = compare(s.L, params_of(s), opt);
  env.results = to_json(rep);
  env.diagnostics = rep.diagnostics;
  env.csv_header = {"index", "l", "label", "lambda1", "sphere", "perturbed", "margin",
                    "window_flag"};
  for (const auto &e : rep.entries)
    env.csv_rows.push_back({std::to_string(e.index), std::to_string(e.l), e.label,
                            format_number(e.lambda1), format_number(e.sphere),
                            format_number(e.perturbed), format_number(e.margin),
                            csv_bool(e.window_flag)});
  return env;
}

//------------------------------------------------------------------------------
/// Runs body, turning library exceptions into exit codes and an error line.
template <class Body> void run_guarded(CliResult &res, Body &&body) {
  try {
    body();
  } catch (const NumericalFailure &e) {
    res.exit_code = kExitNumerical;
    res.out.clear();
    res.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::invalid_argument &e) {
    res.exit_code = kExitInvalid;
    res.out.clear();
    res.err = std::string("error: ") + e.what() + "\n";
  }
}

} // namespace detail

/// args excludes the program name.
inline CliResult run_cli(const std::vector<std::string> &args) {
  CLI::App app{"Laplace-Beltrami spectra of near-spherical ellipsoids", "ellspec"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  unsigned threads = 0;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "Worker threads (0: machine parallelism)")
      ->envname("ELLSPEC_THREADS");

  detail::CurvatureArgs curv;
  auto *c_curv = app.add_subcommand("curvature", "Gaussian curvature extrema and K >= 1 test");
  auto *o_axes = c_curv->add_option("--axes", curv.axes, "Semi-axes a,b,c")->delimiter(',');
  auto *o_params =
      c_curv->add_option("--params", curv.params, "Coefficients alpha,beta,gamma")->delimiter(',');
  auto *o_ceps = c_curv->add_option("--eps", curv.eps, "Perturbation size");
  c_curv->add_option("--grid", curv.grid, "Sample an n x 2n (theta, phi) grid");
  o_axes->excludes(o_params);
  o_axes->excludes(o_ceps);

  detail::TripleArgs adm;
  auto *c_adm = app.add_subcommand("admissible", "eps interval with K >= 1");
  c_adm->add_option("-a,--alpha", adm.alpha)->required();
  c_adm->add_option("-b,--beta", adm.beta)->required();
  c_adm->add_option("-g,--gamma", adm.gamma)->required();

  detail::SpectrumArgs pert;
  auto *c_pert = app.add_subcommand("perturb", "First-order spectrum up to level L");
  c_pert->add_option("--L", pert.L)->required();
  c_pert->add_option("-a,--alpha", pert.t.alpha)->required();
  c_pert->add_option("-b,--beta", pert.t.beta)->required();
  c_pert->add_option("-g,--gamma", pert.t.gamma)->required();
  c_pert->add_option("--eps", pert.eps)->required();
  c_pert->add_flag("--matrices", pert.matrices, "Dump the tridiagonal families");

  int pd_level = 1;
  detail::TripleArgs pd;
  auto *c_pd = app.add_subcommand("pdcheck", "Positive-definiteness of the four families");
  c_pd->add_option("--l", pd_level)->required();
  c_pd->add_option("-a,--alpha", pd.alpha)->required();
  c_pd->add_option("-b,--beta", pd.beta)->required();
  c_pd->add_option("-g,--gamma", pd.gamma)->required();

  detail::SpectrumArgs cmp;
  auto *c_cmp = app.add_subcommand("compare", "Perturbed vs sphere spectrum");
  c_cmp->add_option("--L", cmp.L)->required();
  c_cmp->add_option("-a,--alpha", cmp.t.alpha)->required();
  c_cmp->add_option("-b,--beta", cmp.t.beta)->required();
  c_cmp->add_option("-g,--gamma", cmp.t.gamma)->required();
  c_cmp->add_option("--eps", cmp.eps)->required();
  c_cmp->add_flag("--oracle", cmp.oracle, "Cross-check against the Galerkin oracle");
  c_cmp->add_option("--degree", cmp.degree, "Oracle basis degree");

  CliResult res;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    res.out = out.str();
    res.err = err.str();
    res.exit_code = code == 0 ? kExitOk : kExitInvalid;
    return res;
  }

  detail::run_guarded(res, [&] {
    detail::Envelope env;
    if (c_curv->parsed())
      env = detail::run_curvature(curv, o_ceps->count() > 0);
    else if (c_adm->parsed())
      env = detail::run_admissible(adm);
    else if (c_pert->parsed())
      env = detail::run_perturb(pert);
    else if (c_pd->parsed())
      env = detail::run_pdcheck(pd_level, pd);
    else
      env = detail::run_compare(cmp, threads);

    for (const auto &d : env.diagnostics)
      res.err += "warning: " + d + "\n";
    if (format == "csv") {
      res.out = detail::render_csv(env);
    } else {
      Json j{{"command", env.command},
             {"inputs", env.inputs},
             {"results", env.results},
             {"diagnostics", env.diagnostics}};
      res.out = j.dump(2) + "\n";
    }
  });
  return res;
}

} // namespace ellspec::cli

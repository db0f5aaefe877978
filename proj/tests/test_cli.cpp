#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "ellspec/cli.hpp"

using ellspec::Json;
using ellspec::cli::run_cli;

namespace {

Json run_json(const std::vector<std::string> &args) {
  const auto r = run_cli(args);
  EXPECT_EQ(r.exit_code, 0) << r.err;
  return Json::parse(r.out);
}

std::vector<std::string> csv_lines(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);)
    out.push_back(line);
  return out;
}

// Rebuilds an argument list from an envelope's echoed inputs.
std::vector<std::string> replay_args(const Json &env) {
  std::vector<std::string> args{env["command"].get<std::string>()};
  for (const auto &[key, value] : env["inputs"].items()) {
    if (value.is_boolean()) {
      if (value.get<bool>())
        args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    if (value.is_array()) {
      std::string joined;
      for (const auto &v : value)
        joined += (joined.empty() ? "" : ",") + ellspec::format_number(v.get<double>());
      args.push_back(joined);
    } else if (value.is_number_integer()) {
      args.push_back(std::to_string(value.get<long long>()));
    } else {
      args.push_back(ellspec::format_number(value.get<double>()));
    }
  }
  return args;
}

} // namespace

TEST(CliCurvature, UnitSphere) {
  const auto j = run_json({"curvature", "--axes", "1,1,1"});
  EXPECT_EQ(j["command"], "curvature");
  EXPECT_EQ(j["results"]["k_min"], 1.0);
  EXPECT_EQ(j["results"]["k_max"], 1.0);
  EXPECT_EQ(j["results"]["admissible"], true);
  EXPECT_TRUE(j["diagnostics"].empty());
}

TEST(CliCurvature, FromParams) {
  const auto j = run_json({"curvature", "--params", "-1,-2,-2.5", "--eps", "0.1"});
  const auto axes = j["results"]["axes"];
  EXPECT_DOUBLE_EQ(axes[0].get<double>(), 0.9);
  EXPECT_DOUBLE_EQ(axes[1].get<double>(), 0.8);
  EXPECT_DOUBLE_EQ(axes[2].get<double>(), 0.75);
  const double A = 0.9, B = 0.8, C = 0.75;
  EXPECT_DOUBLE_EQ(j["results"]["k_min"].get<double>(), C * C / (A * A * B * B));
  EXPECT_DOUBLE_EQ(j["results"]["k_max"].get<double>(), A * A / (B * B * C * C));
  EXPECT_EQ(j["results"]["interval"]["text"], "(0,0.25]");
}

TEST(CliCurvature, Prolate) {
  const auto j = run_json({"curvature", "--axes", "2,1,1"});
  EXPECT_EQ(j["results"]["k_min"], 0.25);
  EXPECT_EQ(j["results"]["k_max"], 4.0);
  EXPECT_EQ(j["results"]["class"], "biaxial_abb");
}

TEST(CliCurvature, GridCsv) {
  const auto r = run_cli({"--format", "csv", "curvature", "--axes", "3,2,1", "--grid", "5"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto lines = csv_lines(r.out);
  ASSERT_EQ(lines.size(), 1u + 5 * 10);
  EXPECT_EQ(lines[0], "theta,phi,x,y,z,K");

  const auto j = run_json({"curvature", "--axes", "3,2,1", "--grid", "5"});
  EXPECT_DOUBLE_EQ(j["results"]["grid"]["sampled_min"].get<double>(), 1.0 / 36.0);
  EXPECT_DOUBLE_EQ(j["results"]["grid"]["sampled_max"].get<double>(), 9.0 / 4.0);
}

TEST(CliCurvature, InvalidInputs) {
  EXPECT_EQ(run_cli({"curvature", "--axes", "1,-1,1"}).exit_code, 2);
  EXPECT_EQ(run_cli({"curvature", "--axes", "1,1"}).exit_code, 2);
  EXPECT_EQ(run_cli({"curvature", "--axes", "2,1,1", "--params", "1,2,3"}).exit_code, 2);
  EXPECT_EQ(run_cli({"curvature"}).exit_code, 2);
  EXPECT_EQ(run_cli({"curvature", "--params", "-1,-1,-3", "--eps", "1"}).exit_code, 2);
  EXPECT_EQ(run_cli({"curvature", "--params", "-1,-1,-3"}).exit_code, 2);
  EXPECT_EQ(run_cli({"curvature", "--axes", "1,1,1", "--grid", "1"}).exit_code, 2);
  const auto r = run_cli({"curvature", "--axes", "1,-1,1"});
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(CliAdmissible, Examples) {
  EXPECT_EQ(run_json({"admissible", "-a", "0", "-b", "-1", "-g", "-1"})["results"]["text"],
            "(0,1)");
  EXPECT_EQ(run_json({"admissible", "-a", "-1", "-b", "-2", "-g", "-2.5"})["results"]["text"],
            "(0,0.25]");
  const auto r = run_cli({"admissible", "-a", "1", "-b", "0", "-g", "0"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(Json::parse(r.out)["results"]["text"], "empty");
  EXPECT_TRUE(Json::parse(r.out)["results"]["upper"].is_null());
}

TEST(CliAdmissible, Csv) {
  const auto r = run_cli({"admissible", "-a", "-1", "-b", "-2", "-g", "-2.5", "--format", "csv"});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "interval,empty,upper,upper_closed\n(0,0.25],false,0.25,true\n");
}

TEST(CliAdmissible, MissingOptionIsInvalid) {
  EXPECT_EQ(run_cli({"admissible", "-a", "0", "-b", "-1"}).exit_code, 2);
  EXPECT_EQ(run_cli({"admissible", "-a", "x", "-b", "-1", "-g", "0"}).exit_code, 2);
  EXPECT_EQ(run_cli({}).exit_code, 2);
  EXPECT_EQ(run_cli({"bogus"}).exit_code, 2);
  EXPECT_EQ(run_cli({"--help"}).exit_code, 0);
}

TEST(CliPerturb, UnperturbedSphere) {
  const auto j = run_json({"perturb", "--L", "1", "--alpha", "0", "--beta", "0", "--gamma", "0",
                           "--eps", "0.1"});
  std::vector<double> values;
  for (const auto &e : j["results"]["entries"])
    values.push_back(e["value"].get<double>());
  EXPECT_EQ(values, (std::vector<double>{0, 2, 2, 2}));
  EXPECT_EQ(j["results"]["route"], "sphere");
}

TEST(CliPerturb, Matrices) {
  const auto j = run_json({"perturb", "--L", "2", "-a", "-1", "-b", "-2", "-g", "-2.5", "--eps",
                           "0.05", "--matrices"});
  const auto &mats = j["results"]["matrices"];
  // level 1: three families, level 2: four
  ASSERT_EQ(mats.size(), 7u);
  for (const auto &m : mats) {
    const auto f = m["family"].get<std::string>();
    const auto M =
        ellspec::build_matrix(m["l"].get<int>(),
                              f == "cos_even"  ? ellspec::MatrixFamily::CosEven
                              : f == "sin_even" ? ellspec::MatrixFamily::SinEven
                              : f == "cos_odd"  ? ellspec::MatrixFamily::CosOdd
                                                : ellspec::MatrixFamily::SinOdd,
                              -1, -2, -2.5);
    EXPECT_EQ(m["diag"].get<std::vector<double>>(),
              std::vector<double>(M.diag().begin(), M.diag().end()));
    EXPECT_EQ(m["offdiag"].get<std::vector<double>>(),
              std::vector<double>(M.offdiag().begin(), M.offdiag().end()));
  }
}

TEST(CliPerturb, BiaxialMultiplicities) {
  const auto r = run_cli({"perturb", "--L", "3", "--alpha", "-1", "--beta", "-1", "--gamma", "-3",
                          "--eps", "0.5"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["results"]["route"], "biaxial");
  const auto &entries = j["results"]["entries"];
  ASSERT_EQ(entries.size(), 16u);
  for (const auto &e : entries) {
    const bool m0 = e["label"] == "m=0";
    EXPECT_EQ(e["multiplicity"], m0 ? 1 : 2);
  }
  // eps = 0.5 drives the short axis to -0.5: reported, not rejected.
  EXPECT_FALSE(j["diagnostics"].empty());
  EXPECT_NE(r.err.find("warning:"), std::string::npos);
}

TEST(CliPerturb, InvalidInputs) {
  EXPECT_EQ(run_cli({"perturb", "--L", "-1", "-a", "0", "-b", "0", "-g", "0", "--eps", "0.1"})
                .exit_code,
            2);
  EXPECT_EQ(run_cli({"perturb", "--L", "1", "-a", "0", "-b", "0", "-g", "0", "--eps", "-0.1"})
                .exit_code,
            2);
  EXPECT_EQ(run_cli({"perturb", "--L", "1", "-a", "nan", "-b", "0", "-g", "0", "--eps", "0.1"})
                .exit_code,
            2);
}

TEST(CliPdcheck, Examples) {
  const auto j = run_json({"pdcheck", "--l", "5", "-a", "-1", "-b", "-2", "-g", "-2.5"});
  ASSERT_EQ(j["results"]["families"].size(), 4u);
  EXPECT_EQ(j["results"]["all_positive_definite"], true);
  for (const auto &f : j["results"]["families"]) {
    EXPECT_EQ(f["exact"], true);
    EXPECT_EQ(f["sufficient"], true);
    EXPECT_EQ(f["positive_diagonal"], true);
  }
  // Level 1 has no sin_even family; growing axes are not PD.
  const auto one = run_json({"pdcheck", "--l", "1", "-a", "1", "-b", "0.5", "-g", "0.2"});
  EXPECT_EQ(one["results"]["families"].size(), 3u);
  EXPECT_EQ(one["results"]["all_positive_definite"], false);
  EXPECT_EQ(run_cli({"pdcheck", "--l", "0", "-a", "-1", "-b", "-2", "-g", "-2.5"}).exit_code, 2);
}

TEST(CliCompare, Examples) {
  const auto sphere = run_json({"compare", "--L", "2", "-a", "0", "-b", "0", "-g", "0", "--eps",
                                "0.1"});
  EXPECT_EQ(sphere["results"]["verdict"], true);
  for (const auto &e : sphere["results"]["entries"])
    EXPECT_EQ(e["margin"], 0.0);

  const auto abb = run_json({"compare", "--L", "3", "-a", "0", "-b", "-1", "-g", "-1", "--eps",
                             "0.1"});
  EXPECT_EQ(abb["results"]["verdict"], true);

  const auto tri = run_json({"compare", "--L", "3", "-a", "-1", "-b", "-2", "-g", "-2.5",
                             "--eps", "0.2"});
  EXPECT_EQ(tri["results"]["verdict"], true);
  EXPECT_EQ(tri["results"]["admissible"], true);
  EXPECT_TRUE(tri["results"]["oracle_crosscheck"].is_null());
}

TEST(CliCompare, OracleAndThreads) {
  const std::vector<std::string> base{"compare", "--L", "2", "-a", "-1", "-b", "-2", "-g",
                                      "-2.5", "--eps", "0.02", "--oracle", "--degree", "10"};
  auto one = base;
  one.insert(one.begin(), {"--threads", "1"});
  auto three = base;
  three.insert(three.end(), {"--threads", "3"});
  const auto a = run_cli(one), b = run_cli(three);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = Json::parse(a.out);
  EXPECT_EQ(j["results"]["oracle_crosscheck"]["basis_degree"], 10);
  EXPECT_EQ(j["results"]["oracle_crosscheck"]["clusters"].size(), 3u);
}

TEST(CliCompare, ThreadsFromEnvironment) {
  ::setenv("ELLSPEC_THREADS", "2", 1);
  const auto r = run_cli({"compare", "--L", "1", "-a", "-1", "-b", "-2", "-g", "-2.5", "--eps",
                          "0.01", "--oracle", "--degree", "6"});
  ::unsetenv("ELLSPEC_THREADS");
  EXPECT_EQ(r.exit_code, 0) << r.err;
}

TEST(CliCompare, OracleErrorsAreInvalidInput) {
  // Level cap beyond what degree 6 resolves.
  EXPECT_EQ(run_cli({"compare", "--L", "5", "-a", "-1", "-b", "-2", "-g", "-2.5", "--eps", "0.01",
                     "--oracle", "--degree", "6"})
                .exit_code,
            2);
}

TEST(CliEnvelope, RoundTripReproducesResults) {
  const std::vector<std::vector<std::string>> runs{
      {"curvature", "--axes", "0.3,0.7,1.1"},
      {"curvature", "--params", "-1,-2,-2.5", "--eps", "0.1"},
      {"admissible", "-a", "-0.1", "-b", "-0.7", "-g", "-0.75"},
      {"perturb", "--L", "3", "-a", "-0.1", "-b", "-0.7", "-g", "-0.75", "--eps", "0.0123",
       "--matrices"},
      {"pdcheck", "--l", "7", "-a", "-0.1", "-b", "-0.7", "-g", "-0.75"},
      {"compare", "--L", "3", "-a", "-0.1", "-b", "-0.7", "-g", "-0.75", "--eps", "0.1"},
  };
  for (const auto &args : runs) {
    const auto first = run_cli(args);
    ASSERT_EQ(first.exit_code, 0) << first.err;
    const auto env = Json::parse(first.out);
    ASSERT_TRUE(env.contains("command"));
    ASSERT_TRUE(env.contains("inputs"));
    ASSERT_TRUE(env.contains("results"));
    ASSERT_TRUE(env.contains("diagnostics"));
    const auto again = run_cli(replay_args(env));
    ASSERT_EQ(again.exit_code, 0) << again.err;
    EXPECT_EQ(Json::parse(again.out), env) << args[0];
  }
}

TEST(CliEnvelope, NumbersRoundTripBitExactly) {
  const auto r = run_cli({"perturb", "--L", "4", "-a", "-0.1", "-b", "-0.7", "-g", "-0.75",
                          "--eps", "0.0123"});
  const auto j = Json::parse(r.out);
  const auto spectrum = ellspec::assemble_spectrum(4, {-0.1, -0.7, -0.75, 0.0123});
  ASSERT_EQ(j["results"]["entries"].size(), spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    EXPECT_EQ(j["results"]["entries"][i]["value"].get<double>(), spectrum[i].value);
    EXPECT_EQ(j["results"]["entries"][i]["lambda1"].get<double>(), spectrum[i].lambda1);
  }
}

TEST(CliCsv, CompareTableShape) {
  const auto r = run_cli({"--format", "csv", "compare", "--L", "2", "-a", "-1", "-b", "-2", "-g",
                          "-2.5", "--eps", "0.05"});
  ASSERT_EQ(r.exit_code, 0);
  const auto lines = csv_lines(r.out);
  ASSERT_EQ(lines.size(), 10u);
  EXPECT_EQ(lines[0], "index,l,label,lambda1,sphere,perturbed,margin,window_flag");
  EXPECT_EQ(run_cli({"--format", "xml", "admissible", "-a", "0", "-b", "0", "-g", "0"}).exit_code,
            2);
}

TEST(CliExitCodes, ExceptionMapping) {
  ellspec::cli::CliResult r;
  ellspec::cli::detail::run_guarded(r, [] { throw ellspec::NumericalFailure("no convergence"); });
  EXPECT_EQ(r.exit_code, ellspec::cli::kExitNumerical);
  EXPECT_EQ(r.err, "error: no convergence\n");

  ellspec::cli::CliResult c;
  ellspec::cli::detail::run_guarded(c, [] { throw ellspec::ConfigError("coarse"); });
  EXPECT_EQ(c.exit_code, ellspec::cli::kExitInvalid);

  ellspec::cli::CliResult ok;
  ellspec::cli::detail::run_guarded(ok, [&] { ok.out = "x"; });
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_EQ(ok.out, "x");
  EXPECT_EQ(ellspec::cli::kExitNumerical, 3);
}

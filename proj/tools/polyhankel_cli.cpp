#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "polyhankel/certificate.hpp"
#include "polyhankel/serialize.hpp"

namespace {

using namespace polyhankel;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

std::string fmt6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

struct CommonOptions {
  std::string format = "human";
  std::string out_path;
  std::string tol_profile = "default";
  double tol_linalg = -1.0;
  double tol_separable = -1.0;
  double tol_wf = -1.0;
  double mc_sigmas = -1.0;
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t quad_budget = kDefaultQuadBudget;
  int max_dimension = kDefaultMaxDimension;
  bool timings = false;
};

TolProfile make_profile(const CommonOptions& opts) {
  TolProfile profile;
  if (opts.tol_profile == "strict") {
    profile.linalg = 1e-10;
    profile.separable = 1e-7;
    profile.wf = 1e-4;
    profile.wf_solver_tol = 1e-8;
  } else if (opts.tol_profile == "loose") {
    profile.linalg = 1e-8;
    profile.separable = 1e-4;
    profile.wf = 1e-2;
    profile.wf_solver_tol = 1e-6;
  } else if (opts.tol_profile != "default") {
    throw std::invalid_argument("unknown tolerance profile: " + opts.tol_profile);
  }
  if (opts.tol_linalg > 0.0) profile.linalg = opts.tol_linalg;
  if (opts.tol_separable > 0.0) profile.separable = opts.tol_separable;
  if (opts.tol_wf > 0.0) profile.wf = opts.tol_wf;
  if (opts.mc_sigmas > 0.0) profile.mc_sigmas = opts.mc_sigmas;
  if (opts.mc_samples > 0) profile.mc_samples = opts.mc_samples;
  profile.seed = opts.seed;
  profile.quad_budget = opts.quad_budget;
  profile.max_dimension = opts.max_dimension;
  return profile;
}

void add_common_options(CLI::App* cmd, CommonOptions& opts,
                        const std::vector<std::string>& formats) {
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember(formats));
  cmd->add_option("--out", opts.out_path, "write the report to this file");
  cmd->add_option("--tol-profile", opts.tol_profile,
                  "tolerance profile: default, strict, or loose");
  cmd->add_option("--tol-linalg", opts.tol_linalg, "linear algebra tolerance override");
  cmd->add_option("--tol-separable", opts.tol_separable,
                  "separable quadrature tolerance override");
  cmd->add_option("--tol-wf", opts.tol_wf, "weak factorization tolerance override");
  cmd->add_option("--mc-sigmas", opts.mc_sigmas, "Monte Carlo agreement band in sigmas");
  cmd->add_option("--mc-samples", opts.mc_samples, "Monte Carlo sample count");
  cmd->add_option("--seed", opts.seed, "seed for all randomness");
  cmd->add_option("--quad-budget", opts.quad_budget,
                  "total quadrature evaluation budget")
      ->envname("POLYHANKEL_QUAD_BUDGET");
  cmd->add_option("--max-d", opts.max_dimension, "largest certifiable dimension");
  cmd->add_flag("--timings", opts.timings,
                "include wall-clock timings in reports (breaks byte-identical output)");
}

void human_check_line(std::ostream& os, const std::string& name, const CheckedValue& v) {
  os << "  " << name << ": computed " << fmt6(v.computed) << " vs " << fmt6(v.closed_form)
     << " (" << (v.relative ? "rel err " : "err ") << fmt6(v.error) << ", tol "
     << fmt6(v.tol) << ") " << (v.pass ? "PASS" : "FAIL");
  if (!v.method.empty()) os << " [" << v.method << "]";
  os << "\n";
}

std::string human_certificate(const Certificate& cert, bool timings) {
  std::ostringstream os;
  os << "certificate d=" << cert.d << ": "
     << (cert.certified ? "CERTIFIED" : "NOT CERTIFIED") << "\n";
  human_check_line(os, "hankel_norm", cert.hankel_norm);
  os << "  hankel_tensor_route: " << fmt6(cert.hankel_tensor_route) << "\n";
  human_check_line(os, "schur_bound", cert.schur_bound_value);
  os << "  schur_exact: 2^(" << cert.schur_half_log2 << "/2), expected 2^(" << cert.d / 2
     << "/2) " << (cert.schur_exact_pass ? "PASS" : "FAIL") << "\n";
  os << "  row_identity: " << (cert.row_identity_pass ? "PASS" : "FAIL") << "\n";
  human_check_line(os, "functional_value", cert.functional_value);
  os << "  functional_integer: " << cert.functional_integer << " "
     << (cert.functional_integer_pass ? "PASS" : "FAIL") << "\n";
  human_check_line(os, "l1_norm", cert.l1_norm);
  if (cert.l1_quadrature) human_check_line(os, "l1_quadrature", *cert.l1_quadrature);
  if (cert.l1_monte_carlo) human_check_line(os, "l1_monte_carlo", *cert.l1_monte_carlo);
  human_check_line(os, "l2_norm", cert.l2_norm);
  human_check_line(os, "C_d_lower", cert.c_d_lower);
  human_check_line(os, "equality_case", cert.equality_case);
  if (cert.wf_norm) {
    const WfReport& wf = *cert.wf_norm;
    os << "  wf_norm: upper " << fmt6(wf.upper) << ", lower " << fmt6(wf.lower)
       << ", closed " << fmt6(wf.closed_form) << " (tol " << fmt6(wf.tol) << ", "
       << wf.iterations << " iterations) " << (wf.pass ? "PASS" : "FAIL") << "\n";
  }
  os << "  A_d: computed ratio "
     << (cert.a_d_ratio ? fmt6(*cert.a_d_ratio) : std::string("n/a")) << ", claimed "
     << fmt6(cert.a_d_claim) << "\n";
  os << "  note: " << cert.discrepancy_note << "\n";
  for (const std::string& failure : cert.failures) os << "  failure: " << failure << "\n";
  if (timings) {
    os << "  timings:\n";
    for (const auto& [name, ms] : cert.timings_ms)
      os << "    " << name << ": " << fmt6(ms) << " ms\n";
  }
  return os.str();
}

int run_certify(int d, const CommonOptions& opts) {
  const Certificate cert = certify(d, make_profile(opts));
  std::string text;
  if (opts.format == "json") {
    text = dump_json(to_json(cert, opts.timings));
  } else if (opts.format == "csv") {
    text = certificate_csv_header() + "\n" + certificate_csv_row(cert) + "\n";
  } else {
    text = human_certificate(cert, opts.timings);
  }
  write_output(text, opts.out_path);
  return cert.certified ? kExitOk : kExitFailure;
}

int run_sweep(int d_min, int d_max, const CommonOptions& opts) {
  if (d_min < 2 || d_max < d_min)
    throw std::invalid_argument("sweep: empty dimension range");
  std::vector<int> dims;
  for (int d = d_min % 2 == 0 ? d_min : d_min + 1; d <= d_max; d += 2) dims.push_back(d);
  if (dims.empty()) throw std::invalid_argument("sweep: no even dimensions in range");

  const TolProfile profile = make_profile(opts);
  std::vector<Certificate> certs;
  certs.reserve(dims.size());
  for (const int d : dims) certs.push_back(certify(d, profile));

  std::vector<std::pair<int, double>> c_points;
  std::vector<std::pair<int, double>> a_points;
  for (const Certificate& cert : certs) {
    c_points.emplace_back(cert.d, cert.c_d_lower.computed);
    if (cert.a_d_ratio) a_points.emplace_back(cert.d, *cert.a_d_ratio);
  }
  const double expected_slope = std::log(std::numbers::pi * std::numbers::pi / 8.0) / 4.0;
  const double slope = c_points.size() >= 2 ? log_slope(c_points) : expected_slope;
  const double a_beta =
      a_points.size() >= 2
          ? log_slope(a_points) / std::log(std::numbers::pi * std::numbers::pi / 8.0)
          : 0.0;

  bool all_certified = true;
  for (const Certificate& cert : certs) all_certified &= cert.certified;

  std::string text;
  if (opts.format == "json") {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const Certificate& cert : certs) j["rows"].push_back(to_json(cert, opts.timings));
    nlohmann::ordered_json fit;
    fit["slope"] = slope;
    fit["expected_slope"] = expected_slope;
    fit["abs_diff"] = std::abs(slope - expected_slope);
    j["c_d_fit"] = std::move(fit);
    nlohmann::ordered_json afit;
    afit["beta"] = a_beta;
    afit["claimed_beta"] = 0.5;
    afit["points"] = static_cast<int>(a_points.size());
    j["a_d_fit"] = std::move(afit);
    j["all_certified"] = all_certified;
    text = dump_json(j);
  } else if (opts.format == "csv") {
    text = certificate_csv_header() + "\n";
    for (const Certificate& cert : certs) text += certificate_csv_row(cert) + "\n";
    std::cerr << "c_d_fit slope " << fmt17(slope) << " expected " << fmt17(expected_slope)
              << "\n";
  } else {
    std::ostringstream os;
    for (const Certificate& cert : certs) os << human_certificate(cert, opts.timings);
    os << "fit: slope of log C_d_lower vs d = " << fmt6(slope) << " (expected "
       << fmt6(expected_slope) << ", diff " << fmt6(std::abs(slope - expected_slope))
       << ")\n";
    os << "fit: A_d ratio exponent beta = " << fmt6(a_beta) << " (claimed 0.5, from "
       << a_points.size() << " dimensions)\n";
    text = os.str();
  }
  write_output(text, opts.out_path);
  return all_certified ? kExitOk : kExitFailure;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open polynomial file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed polynomial JSON in " + path + ": " + e.what());
  }
}

int auto_nodes(int d, std::uint64_t budget) {
  for (int nodes = 512; nodes >= 2; --nodes) {
    unsigned __int128 total = 1;
    bool fits = true;
    for (int j = 0; j < d; ++j) {
      total *= static_cast<unsigned>(nodes);
      if (total > budget) {
        fits = false;
        break;
      }
    }
    if (fits) return nodes;
  }
  throw BudgetExceeded(1u << d, budget);  // even 2 nodes per dimension exceed it
}

struct NormOptions {
  std::string kind;
  std::string method;  // empty: quad for l1, exact for l2
  std::string poly_path;
  std::string dump_matrix_path;  // hankel/schur: write the matrix here
  int nodes = 0;
  std::uint64_t samples = 1000000;
  double wf_tol = 1e-6;
};

void maybe_dump_matrix(const HankelMatrix& matrix, const std::string& path) {
  if (path.empty()) return;
  const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  write_output(csv ? matrix_to_csv(matrix) : dump_json(matrix_to_json(matrix)), path);
}

void emit_norm(const std::string& kind, double value, const std::string& method,
               const nlohmann::ordered_json& extra, const CommonOptions& opts) {
  std::string text;
  if (opts.format == "json") {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["value"] = value;
    j["method"] = method;
    for (const auto& [key, val] : extra.items()) j[key] = val;
    text = dump_json(j);
  } else {
    std::ostringstream os;
    os << fmt6(value) << "  method=" << method;
    for (const auto& [key, val] : extra.items()) {
      os << " " << key << "=";
      if (val.is_number_float())
        os << fmt6(val.get<double>());
      else
        os << val.dump();
    }
    os << "\n";
    text = os.str();
  }
  write_output(text, opts.out_path);
}

int run_norm(const NormOptions& norm_opts, const CommonOptions& opts) {
  const nlohmann::json j = read_json_file(norm_opts.poly_path);
  const bool trig = has_negative_exponents(j);

  if (norm_opts.kind == "l1" || norm_opts.kind == "l2") {
    const double p = norm_opts.kind == "l1" ? 1.0 : 2.0;
    std::string method = norm_opts.method;
    if (method.empty()) method = norm_opts.kind == "l2" ? "exact" : "quad";

    if (method == "exact") {
      if (norm_opts.kind != "l2")
        throw std::invalid_argument("norm: method 'exact' applies to --kind l2 only");
      if (trig)
        throw std::invalid_argument("norm: exact l2 needs an analytic polynomial");
      emit_norm("l2", h2_norm(polynomial_from_json(j)), "h2-coefficients", {}, opts);
      return kExitOk;
    }
    if (method == "separable") {
      if (trig)
        throw std::invalid_argument("norm: separable path needs an analytic polynomial");
      const Polynomial f = polynomial_from_json(j);
      const LpEstimate est = lp_norm_separable(factor_disjoint_variables(f), p);
      nlohmann::ordered_json extra;
      extra["error_bound"] = est.error_bound;
      emit_norm(norm_opts.kind, est.value, to_string(est.method), extra, opts);
      return kExitOk;
    }
    if (method == "mc") {
      LpEstimate est;
      if (trig)
        est = lp_norm_monte_carlo(trig_polynomial_from_json(j), p, norm_opts.samples,
                                  opts.seed);
      else
        est = lp_norm_monte_carlo(polynomial_from_json(j), p, norm_opts.samples, opts.seed);
      nlohmann::ordered_json extra;
      extra["error_bound"] = est.error_bound;
      extra["samples"] = norm_opts.samples;
      extra["seed"] = opts.seed;
      emit_norm(norm_opts.kind, est.value, to_string(est.method), extra, opts);
      return kExitOk;
    }
    if (method == "quad") {
      const int d = j.at("d").get<int>();
      const int nodes =
          norm_opts.nodes > 0 ? norm_opts.nodes : auto_nodes(d, opts.quad_budget);
      LpEstimate est;
      if (trig)
        est = lp_norm_quadrature(trig_polynomial_from_json(j), p, nodes, opts.quad_budget);
      else
        est = lp_norm_quadrature(polynomial_from_json(j), p, nodes, opts.quad_budget);
      nlohmann::ordered_json extra;
      extra["nodes_per_dim"] = nodes;
      emit_norm(norm_opts.kind, est.value, to_string(est.method), extra, opts);
      return kExitOk;
    }
    throw std::invalid_argument("norm: unknown method " + method);
  }

  if (trig)
    throw std::invalid_argument("norm: --kind " + norm_opts.kind +
                                " needs an analytic polynomial");
  const Polynomial f = polynomial_from_json(j);

  if (norm_opts.kind == "hankel") {
    const FactorizationGrid grid = default_grid(f);
    const HankelMatrix matrix = build_matrix(f, grid.rows);
    maybe_dump_matrix(matrix, norm_opts.dump_matrix_path);
    const NormResult result = operator_norm(matrix);
    nlohmann::ordered_json extra;
    extra["index_set_size"] = static_cast<int>(grid.rows.size());
    extra["iterations"] = result.iterations;
    extra["residual"] = result.residual;
    emit_norm("hankel", result.value, to_string(result.method), extra, opts);
    return kExitOk;
  }
  if (norm_opts.kind == "schur") {
    const FactorizationGrid grid = default_grid(f);
    SchurWeights weights;
    for (const MonomialId id : grid.rows)
      weights.values[id] = std::exp2(-0.5 * big_omega(id));
    const HankelMatrix matrix = build_matrix(f, grid.rows);
    maybe_dump_matrix(matrix, norm_opts.dump_matrix_path);
    const double bound = schur_bound(matrix, weights);
    nlohmann::ordered_json extra;
    extra["index_set_size"] = static_cast<int>(grid.rows.size());
    extra["weights"] = "2^(-omega/2)";
    emit_norm("schur", bound, "schur-test", extra, opts);
    return kExitOk;
  }
  if (norm_opts.kind == "wf") {
    const FactorizationGrid grid = default_grid(f);
    const WfSolveOutput solve = wf_norm_primal(f, grid, norm_opts.wf_tol);
    if (opts.format == "json") {
      nlohmann::ordered_json j;
      j["upper"] = solve.result.upper;
      j["lower"] = solve.result.lower;
      j["grid_size"] = nlohmann::ordered_json::array(
          {static_cast<int>(grid.rows.size()), static_cast<int>(grid.cols.size())});
      j["iterations"] = solve.result.iterations;
      j["residuals"] = nlohmann::ordered_json{{"primal", solve.result.primal_residual},
                                              {"dual", solve.result.dual_residual}};
      j["factorization"] = nlohmann::ordered_json::array();
      for (const auto& [g, h] : solve.factorization.pairs)
        j["factorization"].push_back(
            nlohmann::ordered_json{{"g", to_json(g)}, {"h", to_json(h)}});
      write_output(dump_json(j), opts.out_path);
    } else {
      nlohmann::ordered_json extra;
      extra["lower"] = solve.result.lower;
      extra["iterations"] = solve.result.iterations;
      extra["rank"] = static_cast<int>(solve.factorization.pairs.size());
      emit_norm("wf", solve.result.upper, "nuclear-norm-admm", extra, opts);
    }
    return kExitOk;
  }
  throw std::invalid_argument("norm: unknown kind " + norm_opts.kind);
}

int run_construct(int d, const CommonOptions& opts) {
  const Construction c = build_construction(d, opts.max_dimension);
  nlohmann::ordered_json j;
  j["d"] = c.d;
  j["psi"] = to_json(c.psi);
  j["f"] = to_json(c.f);
  j["index_set"] = c.index_set;
  j["weights"] = nlohmann::ordered_json::array();
  for (const MonomialId id : c.index_set) {
    nlohmann::ordered_json w;
    w["n"] = id;
    w["omega"] = -c.weights.half_log2->at(id);
    w["value"] = c.weights.values.at(id);
    j["weights"].push_back(std::move(w));
  }
  write_output(dump_json(j), opts.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Multiplicative Hankel forms on the polydisc: construction, certification, "
      "and norm computation"};
  app.require_subcommand(1);

  CommonOptions opts;
  int d = 0;
  int d_min = 0, d_max = 0;
  NormOptions norm_opts;

  CLI::App* certify_cmd =
      app.add_subcommand("certify", "build and certify the construction for one dimension");
  certify_cmd->add_option("--d", d, "even dimension")->required();
  add_common_options(certify_cmd, opts, {"json", "csv", "human"});

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "certify a range of dimensions and fit the growth rate");
  sweep_cmd->add_option("--d-min", d_min, "smallest dimension")->required();
  sweep_cmd->add_option("--d-max", d_max, "largest dimension")->required();
  add_common_options(sweep_cmd, opts, {"json", "csv", "human"});

  CLI::App* norm_cmd = app.add_subcommand("norm", "compute one norm of a polynomial file");
  norm_cmd->add_option("--kind", norm_opts.kind, "which norm")
      ->required()
      ->check(CLI::IsMember({"l1", "l2", "hankel", "schur", "wf"}));
  norm_cmd->add_option("--poly", norm_opts.poly_path, "polynomial JSON file")->required();
  norm_cmd->add_option("--method", norm_opts.method,
                       "evaluation method for l1/l2: quad, mc, separable, or exact");
  norm_cmd->add_option("--nodes", norm_opts.nodes, "quadrature nodes per dimension");
  norm_cmd->add_option("--samples", norm_opts.samples, "Monte Carlo samples");
  norm_cmd->add_option("--wf-tol", norm_opts.wf_tol, "weak factorization solver tolerance");
  norm_cmd->add_option("--dump-matrix", norm_opts.dump_matrix_path,
                       "for hankel/schur: write the matrix to this file "
                       "(.csv for CSV, anything else for JSON)");
  add_common_options(norm_cmd, opts, {"json", "human"});

  CLI::App* construct_cmd = app.add_subcommand(
      "construct", "dump the symbol, extremal polynomial, index set, and weights");
  construct_cmd->add_option("--d", d, "even dimension")->required();
  add_common_options(construct_cmd, opts, {"json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (certify_cmd->parsed()) return run_certify(d, opts);
    if (sweep_cmd->parsed()) return run_sweep(d_min, d_max, opts);
    if (norm_cmd->parsed()) return run_norm(norm_opts, opts);
    if (construct_cmd->parsed()) return run_construct(d, opts);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitValidation;
}

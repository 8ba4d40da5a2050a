// eqchern: run the built-in examples, check model files, merge reports.
//
// Exit codes: 0 pass, 1 a check failed, 2 usage error, 3 input error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "eqchern/model_io.hpp"
#include "report_io.hpp"

namespace {

using namespace eqchern;
namespace fs = std::filesystem;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_input = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string example;
  std::string model_file;
  std::vector<std::string> inputs;
  int theta_samples = 128;
  int fourier_window = 63;
  int gh_order = 24;
  std::vector<double> eps;
  std::string test = "gaussian";
  double tol = -1.0;  // per-command default when negative
  std::string format = "json";
  std::string out_dir = ".";
};

void print_checks(const std::vector<report::Check>& checks) {
  for (const auto& c : checks)
    std::printf("%-28s %-12.4g <= %-8.2g %s\n", c.name.c_str(), c.value, c.tolerance, c.pass ? "PASS" : "FAIL");
}

bool all_pass(const std::vector<report::Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

fs::path output_dir(const Options& o) {
  fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create output directory '" + o.out_dir + "'");
  return dir;
}

int run_c_plane(const Options& o) {
  const double tol = o.tol < 0.0 ? 1e-4 : o.tol;
  QuadratureSpec spec;
  spec.gh_order = o.gh_order;
  FourierSpec fourier;
  fourier.window = o.fourier_window;
  const ActionModel model = c_plane_model();
  const IndexReport r = index_character(model, o.theta_samples, spec, fourier);

  double closed_form = 0.0;
  for (std::size_t k = 0; k < r.thetas.size(); ++k) {
    const Complex q = std::exp(Complex{0.0, 1.0} * r.thetas[k]);
    closed_form = std::max(closed_form, std::abs(r.values[k] + q / (1.0 - q)));
  }
  double positive = 0.0;
  double nonpositive = 0.0;
  for (int n = 1; n <= 16; ++n) positive = std::max(positive, std::abs(r.fourier[n] + 1.0));
  for (int n = -16; n <= 0; ++n) nonpositive = std::max(nonpositive, std::abs(r.fourier[n]));
  const std::vector<report::Check> checks{
      report::bound_check("closed_form_max_error", closed_form, 1e-6),
      report::bound_check("c_1..16_max_deviation", positive, tol),
      report::bound_check("c_-16..0_max_abs", nonpositive, tol),
      report::bound_check("closedness_residual", r.closedness_residual, 1e-8),
  };
  const auto dir = output_dir(o);
  const auto doc = report::document({report::index_run(r, checks)});
  report::write_text_file((dir / "c-plane.json").string(), report::dump(doc));
  report::write_text_file((dir / "c-plane.fourier.csv").string(), r.fourier.to_csv());

  std::printf("model c-plane: %d theta samples, Gauss-Hermite order %d\n", o.theta_samples, o.gh_order);
  for (int n = -2; n <= 4; ++n) std::printf("  c_%-3d = % .12f %+.3e i\n", n, r.fourier[n].real(), r.fourier[n].imag());
  print_checks(checks);
  return all_pass(checks) ? exit_pass : exit_fail;
}

int run_zero_op(const Options& o) {
  const double tol = o.tol < 0.0 ? 1e-4 : o.tol;
  double shift = 0.0;
  if (o.test == "gaussian") shift = 0.0;
  else if (o.test == "shifted-gaussian") shift = 1.0;
  else throw UsageError("--test must be gaussian or shifted-gaussian");
  const std::vector<double> eps = o.eps.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : o.eps;
  QuadratureSpec spec;
  spec.gh_order = o.gh_order;
  const ActionModel model = zero_operator_model();
  const auto test = [shift](double x) { return Complex{std::exp(-(x - shift) * (x - shift))}; };
  const DeltaPairingReport r = delta_pairing(model, test, eps, spec);

  // Pairing e^{−(X−m)²} with the regularized index e^{−X²/4ε}/√(4πε).
  double oracle = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double s = 1.0 + 4.0 * eps[k];
    oracle = std::max(oracle, std::abs(r.values[k] - std::exp(-shift * shift / s) / std::sqrt(s)));
  }
  const std::vector<report::Check> checks{
      report::bound_check("extrapolation_error", std::abs(r.extrapolated - r.test_at_zero), tol),
      report::bound_check("gaussian_oracle_max_error", oracle, 1e-10),
  };
  const auto dir = output_dir(o);
  const auto doc = report::document({report::delta_pairing_run(model.name, o.test, r, checks)});
  report::write_text_file((dir / "zero-op.json").string(), report::dump(doc));
  std::string csv = "eps,re,im\n";
  char line[96];
  for (std::size_t k = 0; k < eps.size(); ++k) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", eps[k], r.values[k].real(), r.values[k].imag());
    csv += line;
  }
  report::write_text_file((dir / "zero-op.pairing.csv").string(), csv);

  std::printf("model zero-op: test %s\n", o.test.c_str());
  for (std::size_t k = 0; k < eps.size(); ++k)
    std::printf("  eps %-8.2g pairing % .12f\n", eps[k], r.values[k].real());
  std::printf("  extrapolated % .12f, test(0) % .12f\n", r.extrapolated.real(), r.test_at_zero.real());
  print_checks(checks);
  return all_pass(checks) ? exit_pass : exit_fail;
}

int run_example(const Options& o) {
  if (o.example == "c-plane") return run_c_plane(o);
  if (o.example == "zero-op") return run_zero_op(o);
  throw UsageError("unknown example '" + o.example + "' (expected c-plane or zero-op)");
}

int check_symbol(const Options& o) {
  const ActionModel model = load_model(o.model_file);
  const std::vector<double> eps = o.eps.empty() ? default_eps_list() : o.eps;
  const double delta = o.tol < 0.0 ? 1e-3 : o.tol;
  const auto cutoffs = default_cutoffs();
  const auto transversal = transversal_ellipticity_check(model, cutoffs, SymbolGrid{}, eps, delta);
  const auto ellipticity = ellipticity_scan(augmented_symbol(model), model, default_shell_grid());

  const auto dir = output_dir(o);
  const auto doc = report::document({report::symbol_check_run(model.name, transversal, ellipticity)});
  report::write_text_file((dir / (model.name + ".symbol.json")).string(), report::dump(doc));

  std::printf("model %s\n", model.name.c_str());
  for (std::size_t k = 0; k < transversal.cutoffs.size(); ++k) {
    const auto& c = transversal.condition_c[k];
    const auto& d = transversal.decay[k];
    for (std::size_t e = 0; e < c.eps.size(); ++e)
      std::printf("  %s eps %-6.2g c_eps %-10.4g ratio %.4f\n", transversal.cutoffs[k].c_str(), c.eps[e],
                  c.c_outer[e], c.ratio[e]);
    std::printf("  %s condition (c) %s, condition (b) %s%s\n", transversal.cutoffs[k].c_str(),
                c.pass ? "PASS" : "FAIL", d.pass ? "PASS" : "FAIL", d.vacuous ? " (vacuous)" : "");
  }
  std::printf("transversal ellipticity     %s\n", transversal.pass ? "PASS" : "FAIL");
  std::printf("ellipticity of augmented    %s (min normalized |det| %.3g)\n", ellipticity.pass ? "PASS" : "FAIL",
              ellipticity.min_normalized_det);
  return transversal.pass && ellipticity.pass ? exit_pass : exit_fail;
}

int merge_reports(const Options& o) {
  std::vector<report::Json> docs;
  for (const auto& path : o.inputs) docs.push_back(report::read_json_file(path));
  const auto doc = report::merge(docs);
  const auto dir = output_dir(o);
  if (o.format == "json") {
    report::write_text_file((dir / "report.json").string(), report::dump(doc));
  } else {
    report::write_text_file((dir / "summary.csv").string(), report::summary_csv(doc));
    for (const auto& run : doc["runs"])
      if (run["kind"] == "index")
        report::write_text_file((dir / (run["model"].get<std::string>() + ".fourier.csv")).string(),
                                report::fourier_csv(run));
  }
  bool pass = true;
  for (const auto& run : doc["runs"]) pass = pass && run["pass"].get<bool>();
  std::printf("%zu runs merged, %s\n", doc["runs"].size(), pass ? "all PASS" : "some FAIL");
  return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant Chern characters of transversally elliptic symbols"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run-example", "Run a built-in example and its golden checks");
  run->add_option("name", o.example, "c-plane or zero-op")->required();
  run->add_option("--theta-samples", o.theta_samples, "θ samples for the Fourier fit")->check(CLI::PositiveNumber);
  run->add_option("--fourier-window", o.fourier_window, "fit c_n for |n| <= window")->check(CLI::NonNegativeNumber);
  run->add_option("--gh-order", o.gh_order, "Gauss-Hermite nodes per real dimension")->check(CLI::Range(8, 200));
  run->add_option("--eps", o.eps, "regulator values, comma separated")->delimiter(',');
  run->add_option("--test", o.test, "gaussian or shifted-gaussian");
  run->add_option("--tol", o.tol, "tolerance of the golden checks");
  run->add_option("--out-dir", o.out_dir, "directory for report files");

  auto* check = app.add_subcommand("check-symbol", "Symbol algebra and ellipticity checks for a model file");
  check->add_option("model", o.model_file, "model file")->required();
  check->add_option("--eps", o.eps, "ε list for condition (c), comma separated")->delimiter(',');
  check->add_option("--tol", o.tol, "δ for the decay check on T_G M");
  check->add_option("--out-dir", o.out_dir, "directory for report files");

  auto* rep = app.add_subcommand("report", "Merge JSON reports");
  rep->add_option("inputs", o.inputs, "report files")->required();
  rep->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  rep->add_option("--out-dir", o.out_dir, "directory for the merged output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*run) return run_example(o);
    if (*check) return check_symbol(o);
    return merge_reports(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return exit_usage;
  } catch (const ParseError& e) {
    std::cerr << o.model_file << ":" << e.what() << "\n";
    return exit_input;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
}

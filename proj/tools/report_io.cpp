#include "report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace eqchern::report {

namespace {

// Non-finite values have no JSON spelling; they are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json complexes(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (Complex c : v) out.push_back(complex_json(c));
  return out;
}

Json checks_json(const std::vector<Check>& checks, bool& all) {
  Json out = Json::array();
  all = true;
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"value", number(c.value)}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    all = all && c.pass;
  }
  return out;
}

}  // namespace

Check bound_check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

Json complex_json(Complex c) { return Json::array({number(c.real()), number(c.imag())}); }

Json index_run(const IndexReport& r, const std::vector<Check>& checks) {
  Json fourier = Json::array();
  for (int n = r.fourier.n_min(); n <= r.fourier.n_max(); ++n)
    fourier.push_back({{"n", n}, {"c", complex_json(r.fourier[n])}});
  bool pass = true;
  Json c = checks_json(checks, pass);
  return {{"kind", "index"},
          {"model", r.model},
          {"gh_order", r.gh_order},
          {"contour_shift", r.contour_shift},
          {"normalization", complex_json(r.normalization)},
          {"orientation", r.orientation},
          {"fourier_residual_rms", number(r.fourier_residual_rms)},
          {"quadrature_error", number(r.quadrature_error)},
          {"closedness_residual", number(r.closedness_residual)},
          {"thetas", complexes(r.thetas)},
          {"values", complexes(r.values)},
          {"fourier", fourier},
          {"checks", c},
          {"pass", pass}};
}

Json delta_pairing_run(const std::string& model, const std::string& test_name, const DeltaPairingReport& r,
                       const std::vector<Check>& checks) {
  bool pass = true;
  Json c = checks_json(checks, pass);
  return {{"kind", "delta_pairing"},
          {"model", model},
          {"test", test_name},
          {"interpretation", "pairing of the index distribution with a test function"},
          {"eps", numbers(r.eps)},
          {"values", complexes(r.values)},
          {"extrapolated", complex_json(r.extrapolated)},
          {"test_at_zero", complex_json(r.test_at_zero)},
          {"checks", c},
          {"pass", pass}};
}

Json symbol_check_run(const std::string& model, const TransversalReport& t, const EllipticityReport& e) {
  Json cutoffs = Json::array();
  for (std::size_t k = 0; k < t.cutoffs.size(); ++k) {
    const auto& c = t.condition_c[k];
    const auto& d = t.decay[k];
    cutoffs.push_back({{"name", t.cutoffs[k]},
                       {"condition_c",
                        {{"eps", numbers(c.eps)},
                         {"c_outer", numbers(c.c_outer)},
                         {"c_inner", numbers(c.c_inner)},
                         {"ratio", numbers(c.ratio)},
                         {"stabilization_ratio", c.stabilization_ratio},
                         {"heuristic", c.heuristic},
                         {"pass", c.pass}}},
                       {"decay",
                        {{"radii", numbers(d.radii)},
                         {"shell_sup", numbers(d.shell_sup)},
                         {"delta", d.delta},
                         {"vacuous", d.vacuous},
                         {"pass", d.pass}}}});
  }
  return {{"kind", "symbol_check"},
          {"model", model},
          {"transversal", {{"cutoffs", cutoffs}, {"pass", t.pass}}},
          {"ellipticity",
           {{"radii", numbers(e.radii)},
            {"shell_min", numbers(e.shell_min)},
            {"min_normalized_det", number(e.min_normalized_det)},
            {"growth_exponent", number(e.growth_exponent)},
            {"threshold", e.threshold},
            {"r0", e.r0},
            {"samples", e.samples},
            {"pass", e.pass}}},
          {"pass", t.pass && e.pass}};
}

Json document(std::vector<Json> runs) {
  std::stable_sort(runs.begin(), runs.end(), [](const Json& a, const Json& b) {
    const auto ka = std::make_pair(a.at("model").get<std::string>(), a.at("kind").get<std::string>());
    const auto kb = std::make_pair(b.at("model").get<std::string>(), b.at("kind").get<std::string>());
    return ka < kb;
  });
  return {{"schema_version", schema_version}, {"tool", "eqchern"}, {"runs", std::move(runs)}};
}

Json merge(const std::vector<Json>& documents) {
  std::vector<Json> runs;
  for (const auto& d : documents) {
    if (!d.is_object() || !d.contains("schema_version") || d["schema_version"] != schema_version)
      throw InvalidArgument("report: unsupported or missing schema_version");
    if (!d.contains("runs") || !d["runs"].is_array()) throw InvalidArgument("report: missing runs");
    for (const auto& r : d["runs"]) runs.push_back(r);
  }
  return document(std::move(runs));
}

std::string fourier_csv(const Json& run) {
  const auto& f = run.at("fourier");
  if (f.empty()) throw InvalidArgument("report: empty Fourier table");
  CharacterSeries s(f.front().at("n").get<int>(), f.back().at("n").get<int>());
  for (const auto& row : f) {
    const auto& c = row.at("c");
    s.set(row.at("n").get<int>(), Complex{c.at(0).get<double>(), c.at(1).get<double>()});
  }
  return s.to_csv();
}

std::string summary_csv(const Json& doc) {
  std::string out = "kind,model,pass\n";
  for (const auto& r : doc.at("runs"))
    out += r.at("kind").get<std::string>() + "," + r.at("model").get<std::string>() + "," +
           (r.at("pass").get<bool>() ? "true" : "false") + "\n";
  return out;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidArgument("write failed for '" + path + "'");
}

}  // namespace eqchern::report

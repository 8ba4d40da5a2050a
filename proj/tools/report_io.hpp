#pragma once

// JSON run reports (schema_version 1) and CSV tables for the eqchern tool.

#include <string>
#include <vector>

#include <json.hpp>

#include "eqchern/quadrature.hpp"
#include "eqchern/symbolalg.hpp"

namespace eqchern::report {

using Json = nlohmann::json;

inline constexpr int schema_version = 1;

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// value ≤ tolerance.
Check bound_check(std::string name, double value, double tolerance);

Json complex_json(Complex c);

Json index_run(const IndexReport& report, const std::vector<Check>& checks);

Json delta_pairing_run(const std::string& model, const std::string& test_name, const DeltaPairingReport& report,
                       const std::vector<Check>& checks);

Json symbol_check_run(const std::string& model, const TransversalReport& transversal,
                      const EllipticityReport& ellipticity);

/// {"schema_version": 1, "runs": [...]} with runs in a stable order.
Json document(std::vector<Json> runs);

/// Concatenates the runs of several documents. Throws InvalidArgument on a
/// missing or mismatched schema_version.
Json merge(const std::vector<Json>& documents);

/// Fourier coefficients of an index run as "n,re,im" CSV.
std::string fourier_csv(const Json& run);

/// One line per run: kind,model,pass.
std::string summary_csv(const Json& doc);

std::string dump(const Json& doc);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace eqchern::report

#include <doctest.h>

#include <limits>

#include "oracles.hpp"
#include "report_io.hpp"

using namespace eqchern;
namespace rep = eqchern::report;

namespace {

IndexReport small_index(const std::string& model) {
  IndexReport r;
  r.model = model;
  r.thetas = {Complex{0.5, 0.25}, Complex{1.5, 0.25}};
  r.values = {Complex{1.0, -2.0}, Complex{0.25, 0.0}};
  r.fourier = CharacterSeries(-2, 2);
  r.fourier.set(1, -1.0);
  r.fourier.set(-2, Complex{0.0, 1e-9});
  r.fourier_residual_rms = 1e-12;
  r.contour_shift = 0.25;
  r.normalization = symplectic_normalization(4);
  r.orientation = -1;
  r.gh_order = 24;
  return r;
}

}  // namespace

TEST_SUITE("report_io") {
  TEST_CASE("documents are versioned and ordered") {
    const auto a = rep::index_run(small_index("zeta"), {rep::bound_check("residual", 1e-12, 1e-6)});
    const auto b = rep::index_run(small_index("alpha"), {});
    DeltaPairingReport d;
    d.eps = {0.1};
    d.values = {Complex{0.9}};
    const auto c = rep::delta_pairing_run("alpha", "gaussian", d, {rep::bound_check("err", 0.1, 0.01)});
    const auto doc = rep::document({a, b, c});
    CHECK(doc["schema_version"] == rep::schema_version);
    REQUIRE(doc["runs"].size() == 3);
    CHECK(doc["runs"][0]["model"] == "alpha");
    CHECK(doc["runs"][0]["kind"] == "delta_pairing");
    CHECK(doc["runs"][1]["kind"] == "index");
    CHECK(doc["runs"][2]["model"] == "zeta");
    CHECK(doc["runs"][2]["pass"] == true);
    CHECK(doc["runs"][0]["pass"] == false);
    CHECK(rep::document({c, b, a}) == doc);
  }

  TEST_CASE("merge") {
    const auto one = rep::document({rep::index_run(small_index("b"), {})});
    const auto two = rep::document({rep::index_run(small_index("a"), {})});
    const auto merged = rep::merge({one, two});
    REQUIRE(merged["runs"].size() == 2);
    CHECK(merged["runs"][0]["model"] == "a");
    CHECK(merged["runs"][1]["model"] == "b");
    CHECK(rep::dump(merged) == rep::dump(rep::merge({two, one})));

    auto wrong = one;
    wrong["schema_version"] = 2;
    CHECK_THROWS_AS(rep::merge({one, wrong}), InvalidArgument);
    auto missing = one;
    missing.erase("schema_version");
    CHECK_THROWS_AS(rep::merge({missing}), InvalidArgument);
    CHECK_THROWS_AS(rep::merge({rep::Json::array()}), InvalidArgument);
  }

  TEST_CASE("non-finite values become null") {
    auto r = small_index("m");
    r.quadrature_error = std::numeric_limits<double>::quiet_NaN();
    r.values[0] = Complex{std::numeric_limits<double>::infinity(), 1.0};
    const auto run = rep::index_run(r, {rep::bound_check("x", std::numeric_limits<double>::infinity(), 1.0)});
    CHECK(run["quadrature_error"].is_null());
    CHECK(run["values"][0][0].is_null());
    CHECK(run["values"][0][1] == 1.0);
    CHECK(run["checks"][0]["value"].is_null());
    CHECK(run["pass"] == false);
    CHECK_NOTHROW(rep::dump(rep::document({run})));
  }

  TEST_CASE("Fourier CSV round trip") {
    const auto r = small_index("m");
    const auto run = rep::index_run(r, {});
    const auto csv = rep::fourier_csv(run);
    CHECK(csv == r.fourier.to_csv());
    const auto back = CharacterSeries::from_csv(csv);
    CHECK(back == r.fourier);
    CHECK(back.to_csv() == csv);

    const auto reparsed = rep::Json::parse(rep::dump(rep::document({run})));
    CHECK(rep::fourier_csv(reparsed["runs"][0]) == csv);
  }

  TEST_CASE("summary CSV") {
    const auto doc = rep::document({rep::index_run(small_index("m"), {rep::bound_check("x", 2.0, 1.0)})});
    CHECK(rep::summary_csv(doc) == "kind,model,pass\nindex,m,false\n");
  }

  TEST_CASE("bound checks") {
    CHECK(rep::bound_check("a", 1.0, 1.0).pass);
    CHECK_FALSE(rep::bound_check("a", 1.5, 1.0).pass);
    CHECK_FALSE(rep::bound_check("a", std::numeric_limits<double>::quiet_NaN(), 1.0).pass);
  }
}

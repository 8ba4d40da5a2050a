#include <doctest.h>

#include "eqchern/symbolalg.hpp"
#include "oracles.hpp"

using namespace eqchern;
using oracle::I;

namespace {

SymbolFunction scalar_symbol(std::string name, std::function<Complex(Complex, Complex)> f, double support = 1.0) {
  SymbolFunction b;
  b.name = std::move(name);
  b.x_support_radius = support;
  b.evaluate = [f](std::span<const Complex> x, std::span<const Complex> xi) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = f(x[0], xi[0]);
    return m;
  };
  return b;
}

// (1 + ‖φ_x(ξ)‖²)/(1 + ‖ξ‖²) for the ℂ-plane action, φ_x(ξ) = i x Im(x̄ξ).
double bound_shape(Complex x, Complex xi) {
  const double phi_sq = std::norm(x) * std::pow((std::conj(x) * xi).imag(), 2);
  return (1.0 + phi_sq) / (1.0 + std::norm(xi));
}

// f with sup |f| = 3, attained at x = 0.
double f3(Complex x) { return bump_cutoff(1.0, 3.0).profile(std::abs(x)); }

SymbolFunction saturated() {
  return scalar_symbol("saturated", [](Complex x, Complex xi) { return Complex{f3(x) * bound_shape(x, xi)}; });
}

SymbolFunction constant_in_xi() {
  return scalar_symbol("constant", [](Complex x, Complex) { return Complex{f3(x)}; });
}

SymbolFunction compact_in_xi() {
  return scalar_symbol("compact", [](Complex x, Complex xi) {
    return Complex{f3(x) * bump_cutoff(2.0).profile(std::abs(xi))};
  });
}

SymbolFunction product(const SymbolFunction& a, const SymbolFunction& b) {
  SymbolFunction p;
  p.name = a.name + "*" + b.name;
  p.x_support_radius = std::min(a.x_support_radius, b.x_support_radius);
  p.evaluate = [a, b](std::span<const Complex> x, std::span<const Complex> xi) {
    const Eigen::MatrixXcd ma = a.evaluate(x, xi);
    const Eigen::MatrixXcd mb = b.evaluate(x, xi);
    // Scalar symbols act as multiples of the identity.
    if (ma.size() == 1) return Eigen::MatrixXcd(ma(0, 0) * mb);
    if (mb.size() == 1) return Eigen::MatrixXcd(mb(0, 0) * ma);
    return Eigen::MatrixXcd(ma * mb);
  };
  return p;
}

}  // namespace

TEST_SUITE("symbolalg") {
  TEST_CASE("bump cutoff and norms") {
    const auto c = bump_cutoff(2.0, 3.0);
    CHECK(c.profile(0.0) == doctest::Approx(3.0));
    CHECK(c.profile(1.0) == doctest::Approx(3.0 * std::exp(1.0 - 1.0 / 0.75)));
    CHECK(c.profile(2.0) == 0.0);
    CHECK(c.profile(5.0) == 0.0);
    CHECK_THROWS_AS(bump_cutoff(0.0), InvalidArgument);

    Eigen::MatrixXcd m(2, 2);
    m << 3.0, 0.0, 0.0, Complex(0.0, -4.0);
    CHECK(operator_norm(m) == doctest::Approx(4.0));
    CHECK(operator_norm(Eigen::MatrixXcd(0, 0)) == 0.0);

    const Complex z[] = {Complex{3.0, 4.0}};
    CHECK(base_norm(c_plane_model(), z) == doctest::Approx(5.0));
    const Complex theta[] = {Complex{2.5}};
    CHECK(base_norm(zero_operator_model(), theta) == 0.0);
  }

  TEST_CASE("normalized symbol is order zero") {
    const auto model = c_plane_model();
    const auto s = normalized_symbol(model);
    for (int trial = 0; trial < 50; ++trial) {
      const Complex x[] = {oracle::random_complex(2.0)};
      const Complex xi[] = {oracle::random_complex(1000.0)};
      // |z + iξ| ≤ √2·(|z|² + |ξ|²)^{1/2}
      CHECK(operator_norm(s.evaluate(x, xi)) <= std::sqrt(2.0) * (1.0 + 1e-12));
    }
    // σ̂² → 1 away from T_G M: far out along the orbit direction i·x.
    const Complex x[] = {Complex{0.6, 0.0}};
    const Complex xi[] = {Complex{0.0, 1e6}};
    const Eigen::MatrixXcd m = s.evaluate(x, xi);
    CHECK(operator_norm(Eigen::MatrixXcd::Identity(2, 2) - m * m) < 0.7);
  }

  TEST_CASE("saturated bound") {
    const auto model = c_plane_model();
    const auto eps = default_eps_list();
    const auto r = condition_c_fit(saturated(), model, eps, SymbolGrid{});
    CHECK(r.pass);
    CHECK(r.heuristic);
    REQUIRE(r.c_outer.size() == eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k) {
      CAPTURE(eps[k]);
      CHECK(r.c_outer[k] == doctest::Approx(3.0 - eps[k]).epsilon(1e-12));
      CHECK(r.c_inner[k] == doctest::Approx(3.0 - eps[k]).epsilon(1e-12));
      CHECK(r.ratio[k] < 1.1);
    }
    const auto d = restriction_decay_check(saturated(), model, SymbolGrid{});
    CHECK(d.pass);
    CHECK_FALSE(d.vacuous);
    // On T_G M the function is f(x)/(1 + ‖ξ‖²).
    CHECK(d.shell_sup.back() == doctest::Approx(3.0 / (1.0 + 1e6)).epsilon(1e-9));
  }

  TEST_CASE("constant in xi fails both conditions") {
    const auto model = c_plane_model();
    const auto eps = default_eps_list();
    const auto r = condition_c_fit(constant_in_xi(), model, eps, SymbolGrid{});
    CHECK_FALSE(r.pass);
    for (std::size_t k = 0; k < eps.size(); ++k) {
      CHECK(r.ratio[k] > 3.0);
      // Along the ray ξ ∥ x the bound's right side is ε, so c grows like R².
      const Complex x = 0.0;
      const double r_outer = SymbolGrid{}.radius;
      CHECK(r.c_outer[k] >= (f3(x) - eps[k]) * (1.0 + r_outer * r_outer) * (1.0 - 1e-12));
    }
    const auto d = restriction_decay_check(constant_in_xi(), model, SymbolGrid{});
    CHECK_FALSE(d.pass);
    CHECK(d.shell_sup.back() == doctest::Approx(3.0));
  }

  TEST_CASE("compactly supported symbols pass") {
    const auto model = c_plane_model();
    const auto eps = default_eps_list();
    CHECK(condition_c_fit(compact_in_xi(), model, eps, SymbolGrid{}).pass);
    const auto d = restriction_decay_check(compact_in_xi(), model, SymbolGrid{});
    CHECK(d.pass);
    CHECK(d.shell_sup.back() == 0.0);
  }

  TEST_CASE("c-plane transversal ellipticity") {
    const auto model = c_plane_model();
    const auto cutoffs = default_cutoffs();
    const auto eps = default_eps_list();
    const auto r = transversal_ellipticity_check(model, cutoffs, SymbolGrid{}, eps);
    CHECK(r.pass);
    REQUIRE(r.condition_c.size() == 2);
    REQUIRE(r.decay.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
      CAPTURE(r.cutoffs[k]);
      CHECK(r.condition_c[k].pass);
      for (double ratio : r.condition_c[k].ratio) CHECK(ratio < 1.1);
      CHECK(r.decay[k].pass);
      CHECK(r.decay[k].shell_sup.back() < 1e-3);
    }
    CHECK(r.cutoffs[0] == "bump(r=1)");
  }

  TEST_CASE("zero operator on the circle") {
    const auto model = zero_operator_model();
    const auto cutoffs = default_cutoffs();
    const auto eps = default_eps_list();
    const auto r = transversal_ellipticity_check(model, cutoffs, SymbolGrid{}, eps);
    CHECK(r.pass);
    for (const auto& d : r.decay) CHECK(d.vacuous);
    // 1 − σ² = 1 and (1 + φ²)/(1 + ξ²) = 1 since φ_θ(ξ) = ξ.
    for (const auto& c : r.condition_c)
      for (std::size_t k = 0; k < eps.size(); ++k) CHECK(c.c_outer[k] == doctest::Approx(1.0 - eps[k]));
  }

  TEST_CASE("products of passing symbols pass") {
    const auto model = c_plane_model();
    const auto eps = default_eps_list();
    const auto cutoffs = default_cutoffs();
    const std::vector<SymbolFunction> passing{saturated(), compact_in_xi(), cutoff_defect(model, cutoffs[0]),
                                              cutoff_defect(model, cutoffs[1])};
    for (const auto& a : passing)
      for (const auto& b : passing) {
        const auto p = product(a, b);
        CAPTURE(p.name);
        const auto ra = condition_c_fit(a, model, eps, SymbolGrid{});
        const auto rb = condition_c_fit(b, model, eps, SymbolGrid{});
        const auto rp = condition_c_fit(p, model, eps, SymbolGrid{});
        CHECK(rp.pass);
        // From |ab| ≤ (c_a·g + ε)(c_b·g + ε), with slack for g > 1 near the support edge.
        for (std::size_t k = 0; k < eps.size(); ++k)
          CHECK(rp.c_outer[k] <= ra.c_outer[k] * rb.c_outer[k] + 2.0 * eps[k] * (ra.c_outer[k] + rb.c_outer[k] + 1.0));
      }
  }

  TEST_CASE("conditions b and c agree on the corpus") {
    const auto model = c_plane_model();
    const auto eps = default_eps_list();
    const auto cutoffs = default_cutoffs();
    const std::vector<SymbolFunction> corpus{saturated(), constant_in_xi(), compact_in_xi(),
                                             cutoff_defect(model, cutoffs[0]), cutoff_defect(model, cutoffs[1]),
                                             product(saturated(), constant_in_xi())};
    for (const auto& b : corpus) {
      CAPTURE(b.name);
      CHECK(condition_c_fit(b, model, eps, SymbolGrid{}).pass ==
            restriction_decay_check(b, model, SymbolGrid{}).pass);
    }
  }

  TEST_CASE("invalid grids and inputs") {
    const auto model = c_plane_model();
    const auto eps = default_eps_list();
    SymbolGrid g;
    g.x_points = 0;
    CHECK_THROWS_AS(condition_c_fit(saturated(), model, eps, g), InvalidArgument);
    g = SymbolGrid{};
    g.radii = 1;
    CHECK_THROWS_AS(restriction_decay_check(saturated(), model, g), InvalidArgument);
    g = SymbolGrid{};
    g.directions = 0;
    CHECK_THROWS_AS(condition_c_fit(saturated(), model, eps, g), InvalidArgument);
    g = SymbolGrid{};
    g.min_fraction = 1.5;
    CHECK_THROWS_AS(restriction_decay_check(saturated(), model, g), InvalidArgument);

    CHECK_THROWS_AS(condition_c_fit(saturated(), model, std::span<const double>{}, SymbolGrid{}), InvalidArgument);
    const double zero[] = {0.0};
    CHECK_THROWS_AS(condition_c_fit(saturated(), model, zero, SymbolGrid{}), InvalidArgument);
    CHECK_THROWS_AS(transversal_ellipticity_check(model, std::span<const Cutoff>{}, SymbolGrid{}, eps),
                    InvalidArgument);
    CHECK_THROWS_AS(condition_c_fit(saturated(), c_plane_uv_model(), eps, SymbolGrid{}), UnsupportedModel);
  }
}

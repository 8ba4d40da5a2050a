#include <doctest.h>

#include "eqchern/quadrature.hpp"
#include "oracles.hpp"

using namespace eqchern;
using oracle::I;

namespace {

const double sqrt_pi = std::sqrt(oracle::pi);

Poly var(const ActionModel& m, const char* name) { return Poly::variable(m.algebra, name); }

// −(|u|² + |v|²) on the uv model.
Poly gaussian_exponent(const ActionModel& m) {
  return Complex{-1.0} * (var(m, "u") * var(m, "ubar") + var(m, "v") * var(m, "vbar"));
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Hermite rule") {
    for (int order : {1, 8, 24, 48}) {
      const auto rule = gauss_hermite(order);
      REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
      double m0 = 0.0, m2 = 0.0, m4 = 0.0, m1 = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double x = rule.nodes[k];
        m0 += rule.weights[k];
        m1 += rule.weights[k] * x;
        m2 += rule.weights[k] * x * x;
        m4 += rule.weights[k] * x * x * x * x;
      }
      CAPTURE(order);
      CHECK(m0 == doctest::Approx(sqrt_pi).epsilon(1e-13));
      CHECK(std::abs(m1) < 1e-13);
      if (order >= 2) CHECK(m2 == doctest::Approx(sqrt_pi / 2.0).epsilon(1e-13));
      if (order >= 3) CHECK(m4 == doctest::Approx(3.0 * sqrt_pi / 4.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_hermite(0), InvalidArgument);
  }

  TEST_CASE("symplectic normalization") {
    CHECK(std::abs(symplectic_normalization(2) - 1.0 / (2.0 * oracle::pi * I)) < 1e-16);
    CHECK(std::abs(symplectic_normalization(4) - 1.0 / std::pow(2.0 * oracle::pi * I, 2)) < 1e-16);
  }

  TEST_CASE("Gaussian moments") {
    const auto m = c_plane_uv_model();
    const QuadratureSpec spec;
    const auto q = gaussian_exponent(m);
    const double pi2 = oracle::pi * oracle::pi;
    CHECK(std::abs(integrate_gaussian(Poly(1.0), q, m, spec) - pi2) < 1e-12);
    CHECK(std::abs(integrate_gaussian(var(m, "u") * var(m, "ubar"), q, m, spec) - pi2) < 1e-10);
    // Odd moments vanish.
    CHECK(std::abs(integrate_gaussian(var(m, "u"), q, m, spec)) < 1e-14);
    CHECK(std::abs(integrate_gaussian(var(m, "u") * var(m, "v") * var(m, "vbar"), q, m, spec)) < 1e-14);
    // Shifted and oscillating exponents: e^{−|u−1|²} and e^{−|u|² + i(u+ū)}.
    const Poly shifted = q + var(m, "u") + var(m, "ubar") - Poly(1.0);
    CHECK(std::abs(integrate_gaussian(Poly(1.0), shifted, m, spec) - pi2) < 1e-11);
    const Poly oscillating = q + I * (var(m, "u") + var(m, "ubar"));
    CHECK(std::abs(integrate_gaussian(Poly(1.0), oscillating, m, spec) - pi2 * std::exp(-1.0)) < 1e-11);
    // Anisotropic: e^{−2|u|²−|v|²/2} has integral (π/2)(2π).
    const Poly aniso = Complex{-2.0} * var(m, "u") * var(m, "ubar") - Complex{0.5} * var(m, "v") * var(m, "vbar");
    CHECK(std::abs(integrate_gaussian(Poly(1.0), aniso, m, spec) - pi2) < 1e-11);
  }

  TEST_CASE("non-decaying integrands") {
    const auto m = c_plane_uv_model();
    const QuadratureSpec spec;
    CHECK_THROWS_AS(integrate_gaussian(Poly(1.0), Poly(), m, spec), DivergenceError);
    CHECK_THROWS_AS(integrate_gaussian(Poly(1.0), I * var(m, "u") * var(m, "ubar"), m, spec), DivergenceError);
    CHECK_THROWS_AS(integrate_gaussian(Poly(1.0), Complex{-1.0} * var(m, "u") * var(m, "ubar"), m, spec),
                    DivergenceError);
    CHECK_THROWS_AS(integrate_gaussian(Poly(1.0), var(m, "u") * var(m, "ubar"), m, spec), DivergenceError);
    CHECK_THROWS_AS(integrate_gaussian(Poly(1.0), var(m, "u") * var(m, "u") * var(m, "u"), m, spec),
                    UnsupportedShape);

    // The zero operator on S¹ only oscillates in ξ.
    const auto s1 = zero_operator_model();
    CHECK_THROWS_AS(integrate_top_form(s1, 1.0, spec), DivergenceError);
    CHECK_THROWS_AS(index_character(s1, 16, spec), DivergenceError);
  }

  TEST_CASE("spec validation") {
    const auto m = c_plane_uv_model();
    const auto q = gaussian_exponent(m);
    QuadratureSpec low;
    low.gh_order = 7;
    CHECK_THROWS_AS(integrate_gaussian(Poly(1.0), q, m, low), InvalidArgument);
    QuadratureSpec zero_jac;
    zero_jac.jacobian = 0.0;
    CHECK_THROWS_AS(integrate_gaussian(Poly(1.0), q, m, zero_jac), InvalidArgument);
  }

  TEST_CASE("top-form extraction") {
    const auto m = c_plane_uv_model();
    const QuadratureSpec spec;
    const Mask top = m.algebra->top_mask();
    // ∫ e^{−r²} du dū dv dv̄ = (−2i)²·(−1)·π²/(2πi)² = −1.
    WeightedForm w{gaussian_exponent(m), SymbolicForm::monomial(m.algebra, top, Poly(1.0))};
    CHECK(std::abs(integrate_top_form(w, m, spec) - (-1.0)) < 1e-12);

    QuadratureSpec scaled = spec;
    scaled.jacobian = 0.25;
    CHECK(std::abs(integrate_top_form(w, m, scaled) - (-0.25)) < 1e-12);
    QuadratureSpec raw = spec;
    raw.normalize = false;
    CHECK(std::abs(integrate_top_form(w, m, raw) - 4.0 * oracle::pi * oracle::pi) < 1e-10);

    // Lower-degree parts do not contribute.
    w.form += SymbolicForm::monomial(m.algebra, Mask{0b0011}, Poly(5.0));
    w.form += SymbolicForm::scalar(m.algebra, Poly(7.0));
    CHECK(std::abs(integrate_top_form(w, m, spec) - (-1.0)) < 1e-12);

    // Odd top coefficient u·e^{−r²}.
    const WeightedForm odd{gaussian_exponent(m), SymbolicForm::monomial(m.algebra, top, var(m, "u"))};
    CHECK(std::abs(integrate_top_form(odd, m, spec)) < 1e-14);

    const WeightedForm empty{gaussian_exponent(m), SymbolicForm(m.algebra)};
    CHECK(integrate_top_form(empty, m, spec) == Complex{});
  }

  TEST_CASE("c-plane index values") {
    const QuadratureSpec spec;
    for (const auto& model : {c_plane_uv_model(), c_plane_model()}) {
      CAPTURE(model.name);
      CHECK(std::abs(integrate_top_form(model, oracle::pi, spec) - 0.5) < 1e-6);
      const Complex half_pi = oracle::pi / 2.0;
      CHECK(std::abs(integrate_top_form(model, half_pi, spec) - oracle::c_plane_index(half_pi)) < 1e-6);
      CHECK(std::abs(oracle::c_plane_index(half_pi) - (-I / (1.0 - I))) < 1e-15);
    }
  }

  TEST_CASE("coordinate route independence") {
    const QuadratureSpec spec;
    const auto uv = c_plane_uv_model();
    const auto z = c_plane_model();
    for (Complex theta : {Complex{0.3}, Complex{1.7}, Complex{4.4}, Complex{2.0, 0.25}, Complex{5.5, -0.3}}) {
      CAPTURE(theta);
      const Complex a = integrate_top_form(uv, theta, spec);
      const Complex b = integrate_top_form(z, theta, spec);
      CHECK(std::abs(a - b) < 1e-6);
      CHECK(std::abs(a - oracle::c_plane_index(theta)) < 1e-6 * std::max(1.0, std::abs(oracle::c_plane_index(theta))));
    }
  }

  TEST_CASE("conjugate symmetry") {
    const QuadratureSpec spec;
    const auto model = c_plane_uv_model();
    for (int k = 1; k < 16; ++k) {
      const double theta = 2.0 * oracle::pi * k / 16.0 - 0.05;
      CAPTURE(theta);
      const Complex a = integrate_top_form(model, theta, spec);
      const Complex b = integrate_top_form(model, 2.0 * oracle::pi - theta, spec);
      CHECK(std::abs(b - std::conj(a)) < 1e-6);
    }
  }

  TEST_CASE("order convergence") {
    const auto model = c_plane_uv_model();
    QuadratureSpec a, b;
    a.gh_order = 24;
    b.gh_order = 48;
    CHECK(std::abs(integrate_top_form(model, oracle::pi, a) - integrate_top_form(model, oracle::pi, b)) < 1e-8);
  }

  TEST_CASE("thread count does not change results") {
    const auto model = c_plane_uv_model();
    QuadratureSpec spec;
    spec.threads = 1;
    const Complex ref = integrate_top_form(model, Complex{1.1, 0.25}, spec);
    for (unsigned t : {2u, 3u, 7u, 16u}) {
      spec.threads = t;
      const Complex v = integrate_top_form(model, Complex{1.1, 0.25}, spec);
      CAPTURE(t);
      CHECK(v.real() == ref.real());
      CHECK(v.imag() == ref.imag());
    }
  }

  TEST_CASE("integrand is finite as theta goes to zero") {
    const auto model = c_plane_uv_model();
    const auto pt = oracle::point({Complex{0.3, -0.2}, Complex{-0.1, 0.4}});
    const double r2 = std::norm(Complex{0.3, -0.2}) + std::norm(Complex{-0.1, 0.4});
    Complex previous{};
    for (int k = 0; k <= 6; ++k) {
      const double theta = 0.1 * std::pow(2.0, -k);
      const Complex v = assembled_top_coefficient(model, theta, pt);
      CAPTURE(k);
      // The transverse form keeps the index's simple pole: (1 − e^{iθ})·Â²·top = e^{iθ}e^{−r²}, and
      // (iθ)² against Â² cancels so the product stays bounded.
      const Complex scaled = (1.0 - oracle::q(theta)) * v;
      CHECK(std::isfinite(scaled.real()));
      CHECK(std::isfinite(scaled.imag()));
      CHECK(std::abs(scaled - oracle::q(theta) * std::exp(-r2)) < 1e-10);
      if (k > 0) CHECK(std::abs(scaled - std::exp(-r2)) < std::abs(previous - std::exp(-r2)));
      previous = scaled;
    }
  }

  TEST_CASE("index character of the c-plane model") {
    const auto model = c_plane_uv_model();
    const auto report = index_character(model, 128, QuadratureSpec{});
    REQUIRE(report.values.size() == 128);
    CHECK(report.fourier.n_min() == -63);
    CHECK(report.fourier.n_max() == 63);
    for (const auto& v : report.values) CHECK((std::isfinite(v.real()) && std::isfinite(v.imag())));
    for (int n = 1; n <= 16; ++n) {
      CAPTURE(n);
      CHECK(std::abs(report.fourier[n] - (-1.0)) < 1e-4);
    }
    for (int n = -63; n <= 0; ++n) {
      CAPTURE(n);
      CHECK(std::abs(report.fourier[n]) < 1e-4);
    }
    CHECK(report.fourier_residual_rms < 1e-6);
    CHECK(report.quadrature_error < 1e-8);
    CHECK(report.closedness_residual < 1e-10);
    CHECK(report.orientation == -1);
    CHECK(report.gh_order == 24);
    CHECK(std::abs(report.normalization - symplectic_normalization(4)) < 1e-16);
    for (std::size_t k = 0; k < report.thetas.size(); ++k)
      CHECK(std::abs(report.values[k] - oracle::c_plane_index(report.thetas[k])) < 1e-6);
  }

  TEST_CASE("theta grid and Fourier fit") {
    const auto grid = theta_grid(4, 0.25);
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].real() == doctest::Approx(oracle::pi / 4.0));
    CHECK(grid[3].real() == doctest::Approx(7.0 * oracle::pi / 4.0));
    for (const auto& t : grid) CHECK(t.imag() == 0.25);
    CHECK_THROWS_AS(theta_grid(0), InvalidArgument);

    std::vector<double> thetas;
    std::vector<Complex> values;
    for (int k = 0; k < 32; ++k) {
      const double t = 2.0 * oracle::pi * (k + 0.5) / 32.0;
      thetas.push_back(t);
      values.push_back(2.0 - 3.0 * std::exp(-2.0 * I * t) + I * std::exp(5.0 * I * t));
    }
    double rms = 1.0;
    const auto s = fit_fourier(thetas, values, 8, &rms);
    CHECK(rms < 1e-13);
    for (int n = -8; n <= 8; ++n) {
      const Complex expected = n == 0 ? Complex{2.0} : n == -2 ? Complex{-3.0} : n == 5 ? I : Complex{};
      CAPTURE(n);
      CHECK(std::abs(s[n] - expected) < 1e-13);
    }
    CHECK_THROWS_AS(fit_fourier(thetas, std::span<const Complex>(values).first(3), 1), DimensionMismatch);
    CHECK_THROWS_AS(fit_fourier(thetas, values, 16), InvalidArgument);
    CHECK_THROWS_AS(fit_fourier(thetas, values, -1), InvalidArgument);
  }

  TEST_CASE("extrapolation to zero") {
    const std::vector<double> x{0.4, 0.2, 0.1};
    std::vector<Complex> y;
    for (double t : x) y.push_back(Complex{1.0, -1.0} + 2.0 * t + Complex{0.0, 3.0} * t * t);
    CHECK(std::abs(extrapolate_to_zero(x, y) - Complex{1.0, -1.0}) < 1e-13);
    const double one[] = {0.5};
    const Complex c[] = {Complex{4.0}};
    CHECK(extrapolate_to_zero(one, c) == Complex{4.0});
    CHECK_THROWS_AS(extrapolate_to_zero(x, std::span<const Complex>(y).first(2)), InvalidArgument);
  }

  TEST_CASE("delta pairing on the circle") {
    const auto model = zero_operator_model();
    const QuadratureSpec spec;
    auto gauss = [](double x) { return Complex{std::exp(-x * x)}; };

    const double single[] = {1e-3};
    const auto r = delta_pairing(model, gauss, single, spec);
    REQUIRE(r.values.size() == 1);
    CHECK(std::abs(r.values[0] - 1.0) < 0.02);
    CHECK(std::abs(r.values[0] - oracle::gaussian_pairing(1e-3, 0.0)) < 1e-8);
    CHECK(r.test_at_zero == Complex{1.0});

    const double eps[] = {4e-3, 2e-3, 1e-3};
    const auto e = delta_pairing(model, gauss, eps, spec);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(e.values[k] - oracle::gaussian_pairing(eps[k], 0.0)) < 1e-8);
    CHECK(std::abs(e.extrapolated - 1.0) < 1e-4);

    auto shifted = [](double x) { return Complex{std::exp(-(x - 1.0) * (x - 1.0))}; };
    const auto s = delta_pairing(model, shifted, eps, spec);
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(s.values[k] - oracle::gaussian_pairing(eps[k], 1.0)) < 1e-8);
    CHECK(std::abs(s.extrapolated - std::exp(-1.0)) < 1e-4);
    CHECK(std::abs(s.test_at_zero - std::exp(-1.0)) < 1e-15);

    const auto z = delta_pairing(model, [](double) { return Complex{}; }, eps, spec);
    for (const auto& v : z.values) CHECK(v == Complex{});
    CHECK(z.extrapolated == Complex{});

    const double bad[] = {1e-3, 0.0};
    CHECK_THROWS_AS(delta_pairing(model, gauss, bad, spec), InvalidArgument);
    const double negative[] = {-1e-3};
    CHECK_THROWS_AS(delta_pairing(model, gauss, negative, spec), InvalidArgument);
    CHECK_THROWS_AS(delta_pairing(model, gauss, std::span<const double>{}, spec), InvalidArgument);
  }
}

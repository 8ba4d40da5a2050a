#include <doctest.h>

#include "eqchern/geometry.hpp"
#include "oracles.hpp"

using namespace eqchern;
using oracle::I;

namespace {

using Matrix4 = std::array<std::array<Complex, 4>, 4>;

double diff(const NumericSuperMatrix& m, const Matrix4& ref) {
  double out = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const auto& e = m(i, j);
      out = std::max(out, std::abs(e.scalar_part() - ref[i][j]));
      out = std::max(out, oracle::max_abs(e - NumericForm::scalar(e.algebra(), e.scalar_part())));
    }
  return out;
}

// The first augmented symbol, written out entry by entry.
Matrix4 paper_l(Complex z, Complex xi) {
  const double im = (std::conj(z) * xi).imag();
  const Complex a = std::conj(z) - I * std::conj(xi);
  const Complex b = z + I * xi;
  return {{{0.0, 0.0, -I * std::conj(z) * im, a},
           {0.0, 0.0, b, -I * z * im},
           {I * z * im, a, 0.0, 0.0},
           {b, I * std::conj(z) * im, 0.0, 0.0}}};
}

// The endpoint of the homotopy.
Matrix4 paper_l_tilde(Complex z, Complex xi) {
  const Complex a = std::conj(z) - I * std::conj(xi);
  const Complex b = z + I * xi;
  const Complex c = I * z + xi;
  return {{{0.0, 0.0, std::conj(c), a}, {0.0, 0.0, b, -c}, {c, a, 0.0, 0.0}, {b, -std::conj(c), 0.0, 0.0}}};
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("infinitesimal generator") {
    const auto model = c_plane_model();
    const Complex one[] = {1.0};
    const auto rho = infinitesimal_generator(model, 1.0, one);
    REQUIRE(rho.size() == 1);
    CHECK(std::abs(rho[0] - (-I)) < 1e-15);
    // d/dt e^{−it}·z at t = 0 by central differences.
    const Complex z{0.3, -1.2};
    const Complex zs[] = {z};
    const double h = 1e-6;
    const Complex fd = (std::exp(-I * h) * z - std::exp(I * h) * z) / (2.0 * h);
    CHECK(std::abs(infinitesimal_generator(model, 1.0, zs)[0] - fd) < 1e-9);
    const Complex zero[] = {0.0};
    CHECK(std::abs(infinitesimal_generator(model, 1.0, zero)[0]) == 0.0);
  }

  TEST_CASE("circle vector field on S1") {
    const auto model = zero_operator_model();
    const auto zeta = fundamental_vector_field(model, Complex{2.0});
    const std::vector<Complex> pt{0.4, 1.5};
    CHECK(zeta[*model.algebra->find_generator("dtheta")].evaluate(pt) == Complex{2.0});
    CHECK(zeta[*model.algebra->find_generator("dxi")].evaluate(pt) == Complex{0.0});
  }

  TEST_CASE("orbital projection") {
    const auto model = c_plane_model();
    auto phi = [&](Complex z, Complex xi) {
      const Complex zs[] = {z};
      const Complex xs[] = {xi};
      return orbital_projection(model, zs, xs)[0];
    };
    CHECK(std::abs(phi(1.0, I) - I) < 1e-15);
    CHECK(std::abs(phi(0.0, {2.0, 3.0})) == 0.0);
    CHECK(std::abs(phi({1.0, 1.0}, 1.0) - Complex(1.0, -1.0)) < 1e-15);

    const auto symbolic = orbital_projection_symbolic(model);
    for (int trial = 0; trial < 100; ++trial) {
      const Complex z = oracle::random_complex(2.0);
      const Complex xi = oracle::random_complex(2.0);
      const Complex expected = I * z * (std::conj(z) * xi).imag();
      CHECK(std::abs(phi(z, xi) - expected) < 1e-12);
      const auto pt = oracle::point({z, xi});
      CHECK(std::abs(symbolic[0].evaluate(pt) - expected) < 1e-12);
      // φ² = |ρ|²·φ, and φ vanishes exactly on covectors orthogonal to the orbit.
      CHECK(std::abs(phi(z, phi(z, xi)) - std::norm(z) * phi(z, xi)) < 1e-11);
      CHECK(std::abs(phi(z, I * (-I * z) * oracle::uniform(-3, 3))) < 1e-12);
    }
  }

  TEST_CASE("Clifford multiplication") {
    const auto model = c_plane_model();
    const Complex w[] = {I};
    const auto c = clifford_multiplication(model, w);
    CHECK(c(0, 1).scalar_part() == -I);
    CHECK(c(1, 0).scalar_part() == I);
    CHECK(c * c == NumericSuperMatrix::identity(model.algebra, model.bundle_w.parities));
    const Complex zero[] = {0.0};
    CHECK(clifford_multiplication(model, zero).is_zero());
    // Exact at rational points.
    const Complex r[] = {{3.0, 4.0}};
    const auto cr = clifford_multiplication(model, r);
    CHECK(cr * cr == NumericSuperMatrix::identity(model.algebra, model.bundle_w.parities) * Complex{25.0});
    for (int trial = 0; trial < 100; ++trial) {
      const Complex x[] = {oracle::random_complex(3.0)};
      const auto m = clifford_multiplication(model, x);
      const auto id = NumericSuperMatrix::identity(model.algebra, model.bundle_w.parities);
      CHECK(max_abs_coefficient(m * m - id * Complex{std::norm(x[0])}) < 1e-12);
      CHECK(total_parity(m) == Parity::odd);
    }
  }

  TEST_CASE("graded tensor bundle") {
    const auto tb = total_bundle(c_plane_model());
    CHECK(tb.weights == std::vector<int>{0, 2, 1, 1});
    CHECK(tb.grading == Grading{Parity::even, Parity::even, Parity::odd, Parity::odd});
  }

  TEST_CASE("augmented symbol matches the displayed matrix") {
    const auto model = c_plane_model();
    const auto l = augmented_symbol(model);
    CHECK(total_parity(l) == Parity::odd);
    for (int trial = 0; trial < 50; ++trial) {
      const Complex z = oracle::random_complex(2.0);
      const Complex xi = oracle::random_complex(2.0);
      CHECK(diff(evaluate(l, oracle::point({z, xi})), paper_l(z, xi)) < 1e-12);
    }
    // On T_G M (ξ a real multiple of z) only σ_A ⊗ 1 survives.
    const auto sigma = lift_from_e(model, model.symbol);
    for (int trial = 0; trial < 20; ++trial) {
      const Complex z = oracle::random_complex(2.0);
      const auto pt = oracle::point({z, z * oracle::uniform(-3, 3)});
      CHECK(max_abs_coefficient(evaluate(l, pt) - evaluate(sigma, pt)) < 1e-12);
    }
    CHECK(augmented_symbol(zero_operator_model()).is_zero());
  }

  TEST_CASE("ellipticity scans") {
    const auto model = c_plane_model();
    const auto grid = default_shell_grid();
    const auto l = ellipticity_scan(augmented_symbol(model), model, grid);
    CHECK(l.pass);
    CHECK(l.samples >= 10000);
    CHECK(l.min_normalized_det > 1e-6);

    const auto sigma = ellipticity_scan(model.symbol, model, grid);
    CHECK_FALSE(sigma.pass);
    CHECK(sigma.min_normalized_det == 0.0);

    const auto id = ellipticity_scan(SymbolicSuperMatrix::identity(model.algebra, model.bundle_e.parities), model, grid);
    CHECK(id.pass);
    CHECK(id.min_normalized_det == doctest::Approx(1.0).epsilon(1e-12));

    ShellGrid empty = grid;
    empty.radii.clear();
    CHECK_THROWS_AS(ellipticity_scan(model.symbol, model, empty), InvalidArgument);
  }

  TEST_CASE("homotopy from L to L-tilde") {
    const auto model = c_plane_model();
    const auto path = homotopy_path(model);
    REQUIRE(path.stages.size() == 2);
    CHECK(path.stages[0].to == path.stages[1].from);
    for (int trial = 0; trial < 20; ++trial) {
      const Complex z = oracle::random_complex(2.0);
      const Complex xi = oracle::random_complex(2.0);
      const auto pt = oracle::point({z, xi});
      CHECK(diff(evaluate(path.start(), pt), paper_l(z, xi)) < 1e-12);
      CHECK(diff(evaluate(path.end(), pt), paper_l_tilde(z, xi)) < 1e-12);
      CHECK(diff(evaluate(path.at(1, 1.0), pt), paper_l_tilde(z, xi)) < 1e-12);
      // L̃² = (|z+iξ|² + |iz+ξ|²)·I
      const auto lt = evaluate(path.end(), pt);
      const double r2 = std::norm(z + I * xi) + std::norm(I * z + xi);
      CHECK(max_abs_coefficient(lt * lt - NumericSuperMatrix::identity(model.algebra, lt.grading()) * Complex{r2}) <
            1e-12);
    }
    const auto grid = default_shell_grid();
    for (std::size_t stage = 0; stage < 2; ++stage)
      for (int k = 0; k <= 10; ++k) {
        const auto r = ellipticity_scan(path.at(stage, k / 10.0), model, grid);
        CAPTURE(stage);
        CAPTURE(k);
        CHECK(r.pass);
      }
  }

  TEST_CASE("uv coordinates") {
    const auto uv = c_plane_uv_model();
    CHECK(uv.jacobian == doctest::Approx(0.25));
    CHECK(uv.orientation == -1);
    CHECK(c_plane_model().orientation == -1);
    // 𝐃 = d + iL̃ in (u, v).
    for (int trial = 0; trial < 20; ++trial) {
      const Complex u = oracle::random_complex(2.0);
      const Complex v = oracle::random_complex(2.0);
      const Complex ub = std::conj(u), vb = std::conj(v);
      const Matrix4 d{{{0.0, 0.0, I * vb, I * ub}, {0.0, 0.0, I * u, -I * v}, {I * v, I * ub, 0.0, 0.0},
                       {I * u, -I * vb, 0.0, 0.0}}};
      CHECK(diff(evaluate(*uv.odd_term, oracle::point({u, v})), d) < 1e-12);
    }
    // L̃² = (|u|²+|v|²)·I at random points.
    for (int trial = 0; trial < 100; ++trial) {
      const Complex u = oracle::random_complex(2.0);
      const Complex v = oracle::random_complex(2.0);
      const auto lt = evaluate(*uv.odd_term, oracle::point({u, v})) * (-I);
      const auto id = NumericSuperMatrix::identity(uv.algebra, lt.grading());
      CHECK(max_abs_coefficient(lt * lt - id * Complex{std::norm(u) + std::norm(v)}) < 1e-12);
    }
  }

  TEST_CASE("model validation") {
    auto model = c_plane_model();
    model.bundle_e.weights = {0};
    CHECK_THROWS_AS(validate_model(model), DimensionMismatch);

    model = c_plane_model();
    model.symbol(0, 0) = SymbolicForm::scalar(model.algebra, Poly(1.0));
    CHECK_THROWS_AS(validate_model(model), InvalidArgument);

    const auto s1 = zero_operator_model();
    CHECK_THROWS_AS(homotopy_path(s1), UnsupportedModel);
    CHECK_THROWS_AS(clifford_multiplication(c_plane_model(), std::span<const Complex>{}), DimensionMismatch);
  }

  TEST_CASE("symbol values from real coordinates") {
    const auto model = c_plane_model();
    const std::vector<double> real{1.0, 2.0, -0.5, 0.25};
    const auto s = symbol_values(model, real);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == Complex(1.0, 2.0));
    CHECK(s[1] == Complex(1.0, -2.0));
    CHECK(s[2] == Complex(-0.5, 0.25));
    CHECK(s[3] == Complex(-0.5, -0.25));
    CHECK(real_dimension(model) == 4);
    CHECK(real_dimension(zero_operator_model()) == 2);
  }
}

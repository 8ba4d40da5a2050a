#include "eqchern/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace eqchern {

namespace {

constexpr Complex I{0.0, 1.0};

SymbolicForm scalar_form(const AlgebraPtr& algebra, const Poly& p) { return SymbolicForm::scalar(algebra, p); }

Poly symbol(const ActionModel& model, const std::string& name) { return Poly::variable(model.algebra, name); }

void require_pairing(const ActionModel& model) {
  for (const auto& c : model.coordinates)
    if (c.role == CoordinateRole::mixed)
      throw UnsupportedModel("model '" + model.name + "' has mixed coordinates; base/fiber pairing is unavailable");
  if (base_coordinates(model).size() != fiber_coordinates(model).size())
    throw UnsupportedModel("model '" + model.name + "' has unequal base and fiber counts");
}

}  // namespace

std::string conjugate_name(const std::string& name) { return name + "bar"; }

AlgebraPtr make_model_algebra(std::span<const Coordinate> coordinates) {
  std::vector<Algebra::Symbol> symbols;
  for (const auto& c : coordinates) {
    if (c.kind == CoordinateKind::complex) {
      const std::string bar = conjugate_name(c.name);
      symbols.push_back({c.name, "d" + c.name, bar});
      symbols.push_back({bar, "d" + bar, c.name});
    } else {
      symbols.push_back({c.name, "d" + c.name, ""});
    }
  }
  return Algebra::create(std::move(symbols));
}

std::vector<std::size_t> base_coordinates(const ActionModel& model) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < model.coordinates.size(); ++i)
    if (model.coordinates[i].role == CoordinateRole::base) out.push_back(i);
  return out;
}

std::vector<std::size_t> fiber_coordinates(const ActionModel& model) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < model.coordinates.size(); ++i)
    if (model.coordinates[i].role == CoordinateRole::fiber) out.push_back(i);
  return out;
}

std::size_t real_dimension(const ActionModel& model) {
  std::size_t n = 0;
  for (const auto& c : model.coordinates) n += c.kind == CoordinateKind::complex ? 2 : 1;
  return n;
}

void validate_model(const ActionModel& model) {
  if (!model.algebra) throw InvalidArgument("model '" + model.name + "' has no algebra");
  for (const auto* b : {&model.bundle_e, &model.bundle_w}) {
    if (b->weights.empty()) throw InvalidArgument("bundle of rank zero");
    if (b->weights.size() != b->parities.size())
      throw DimensionMismatch("bundle weights and parities have different lengths");
  }
  if (model.symbol.grading() != model.bundle_e.parities)
    throw DimensionMismatch("symbol size or grading does not match E");
  for (std::size_t i = 0; i < model.symbol.dim(); ++i)
    for (std::size_t j = 0; j < model.symbol.dim(); ++j)
      if (model.symbol(i, j).max_degree() > 0) throw InvalidArgument("symbol entries must be functions");
  if (!model.symbol.is_zero() && total_parity(model.symbol) != Parity::odd)
    throw InvalidArgument("symbol is not odd with respect to the grading of E");
  if (model.odd_term) {
    if (model.odd_term->grading() != total_bundle(model).grading)
      throw DimensionMismatch("superconnection size or grading does not match E ⊗ W");
    if (!model.odd_term->is_zero() && total_parity(*model.odd_term) != Parity::odd)
      throw InvalidArgument("superconnection odd term is not odd");
  }
  if (model.orientation != 1 && model.orientation != -1) throw InvalidArgument("orientation must be ±1");
  if (!(model.jacobian > 0.0)) throw InvalidArgument("jacobian must be positive");
  if (model.symbol_order < 0) throw InvalidArgument("symbol order must be non-negative");

  const auto base = base_coordinates(model);
  const auto fiber = fiber_coordinates(model);
  if (base.size() == fiber.size()) {
    for (std::size_t k = 0; k < base.size(); ++k) {
      const auto& b = model.coordinates[base[k]];
      const auto& f = model.coordinates[fiber[k]];
      const bool b_complex = b.kind == CoordinateKind::complex;
      const bool f_complex = f.kind == CoordinateKind::complex;
      if (b_complex != f_complex || f.kind == CoordinateKind::angle)
        throw InvalidArgument("fiber coordinate '" + f.name + "' does not match base coordinate '" + b.name + "'");
    }
  } else if (!base.empty() || !fiber.empty()) {
    bool mixed = false;
    for (const auto& c : model.coordinates) mixed = mixed || c.role == CoordinateRole::mixed;
    if (!mixed) throw InvalidArgument("base and fiber coordinate counts differ");
  }
}

std::vector<Complex> symbol_values_from_coordinates(const ActionModel& model, std::span<const Complex> coordinates) {
  if (coordinates.size() != model.coordinates.size())
    throw DimensionMismatch("expected one value per coordinate");
  std::vector<Complex> values(model.algebra->num_symbols());
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    const auto& c = model.coordinates[i];
    if (c.kind == CoordinateKind::complex) {
      values[model.algebra->symbol_index(c.name)] = coordinates[i];
      values[model.algebra->symbol_index(conjugate_name(c.name))] = std::conj(coordinates[i]);
    } else {
      values[model.algebra->symbol_index(c.name)] = coordinates[i].real();
    }
  }
  return values;
}

std::vector<Complex> symbol_values(const ActionModel& model, std::span<const double> real_point) {
  if (real_point.size() != real_dimension(model)) throw DimensionMismatch("point has wrong real dimension");
  std::vector<Complex> coordinates;
  std::size_t k = 0;
  for (const auto& c : model.coordinates) {
    if (c.kind == CoordinateKind::complex) {
      coordinates.emplace_back(real_point[k], real_point[k + 1]);
      k += 2;
    } else {
      coordinates.emplace_back(real_point[k++], 0.0);
    }
  }
  return symbol_values_from_coordinates(model, coordinates);
}

std::vector<Complex> symbol_values(const ActionModel& model, std::span<const Complex> base_point,
                                   std::span<const Complex> covector) {
  const auto base = base_coordinates(model);
  const auto fiber = fiber_coordinates(model);
  if (base_point.size() != base.size() || covector.size() != fiber.size())
    throw DimensionMismatch("point or covector has the wrong number of components");
  if (base.size() + fiber.size() != model.coordinates.size())
    throw UnsupportedModel("model has coordinates that are neither base nor fiber");
  std::vector<Complex> coordinates(model.coordinates.size());
  for (std::size_t k = 0; k < base.size(); ++k) coordinates[base[k]] = base_point[k];
  for (std::size_t k = 0; k < fiber.size(); ++k) coordinates[fiber[k]] = covector[k];
  return symbol_values_from_coordinates(model, coordinates);
}

int symplectic_orientation(std::span<const Coordinate> coordinates) {
  // Real slots in declaration order, tagged with their symplectic position.
  std::vector<std::size_t> base_slots;
  std::vector<std::size_t> fiber_slots;
  std::size_t slot = 0;
  for (const auto& c : coordinates) {
    const std::size_t width = c.kind == CoordinateKind::complex ? 2 : 1;
    for (std::size_t w = 0; w < width; ++w, ++slot) {
      if (c.role == CoordinateRole::base) base_slots.push_back(slot);
      else if (c.role == CoordinateRole::fiber) fiber_slots.push_back(slot);
      else throw UnsupportedModel("symplectic orientation needs base/fiber coordinates");
    }
  }
  if (base_slots.size() != fiber_slots.size()) throw UnsupportedModel("base and fiber dimensions differ");
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < base_slots.size(); ++k) {
    order.push_back(base_slots[k]);
    order.push_back(fiber_slots[k]);
  }
  int sign = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j)
      if (order[i] > order[j]) sign = -sign;
  return sign;
}

TotalBundle total_bundle(const ActionModel& model) {
  TotalBundle out;
  for (int pass = 0; pass < 2; ++pass) {
    const Parity want = pass == 0 ? Parity::even : Parity::odd;
    for (std::size_t i = 0; i < model.bundle_e.rank(); ++i) {
      for (std::size_t j = 0; j < model.bundle_w.rank(); ++j) {
        const int p = bit_of(model.bundle_e.parities[i]) ^ bit_of(model.bundle_w.parities[j]);
        if (static_cast<Parity>(p) != want) continue;
        out.grading.push_back(want);
        out.weights.push_back(model.bundle_e.weights[i] + model.bundle_w.weights[j]);
        out.factors.emplace_back(i, j);
      }
    }
  }
  return out;
}

SymbolicSuperMatrix lift_from_e(const ActionModel& model, const SymbolicSuperMatrix& a) {
  if (a.grading() != model.bundle_e.parities) throw DimensionMismatch("lift_from_e: operator does not act on E");
  const auto tb = total_bundle(model);
  SymbolicSuperMatrix out(Algebra::unify(model.algebra, a.algebra()), tb.grading);
  for (std::size_t r = 0; r < tb.factors.size(); ++r)
    for (std::size_t c = 0; c < tb.factors.size(); ++c)
      if (tb.factors[r].second == tb.factors[c].second) out(r, c) = a(tb.factors[r].first, tb.factors[c].first);
  return out;
}

SymbolicSuperMatrix lift_from_w(const ActionModel& model, const SymbolicSuperMatrix& b) {
  if (b.grading() != model.bundle_w.parities) throw DimensionMismatch("lift_from_w: operator does not act on W");
  const auto parity = total_parity(b);
  if (!parity) throw UnsupportedShape("lift_from_w: operator is not homogeneous");
  const auto tb = total_bundle(model);
  SymbolicSuperMatrix out(Algebra::unify(model.algebra, b.algebra()), tb.grading);
  for (std::size_t r = 0; r < tb.factors.size(); ++r) {
    for (std::size_t c = 0; c < tb.factors.size(); ++c) {
      const auto [k, l] = tb.factors[r];
      const auto [i, j] = tb.factors[c];
      if (k != i) continue;
      const bool flip = *parity == Parity::odd && model.bundle_e.parities[i] == Parity::odd;
      out(r, c) = flip ? -b(l, j) : b(l, j);
    }
  }
  return out;
}

TangentVector infinitesimal_generator(const ActionModel& model, double v, std::span<const Complex> base_point) {
  const auto base = base_coordinates(model);
  if (base_point.size() != base.size()) throw DimensionMismatch("point must assign every base coordinate");
  TangentVector out;
  for (std::size_t k = 0; k < base.size(); ++k) {
    const auto& c = model.coordinates[base[k]];
    const double n = c.weight;
    switch (c.kind) {
      case CoordinateKind::complex: out.push_back(-I * n * v * base_point[k]); break;
      case CoordinateKind::angle: out.emplace_back(-n * v, 0.0); break;
      case CoordinateKind::real: out.emplace_back(0.0, 0.0); break;
    }
  }
  return out;
}

std::vector<Poly> fundamental_vector_field(const ActionModel& model, Complex theta) {
  const auto& alg = model.algebra;
  std::vector<Poly> out(alg->num_generators());
  for (const auto& c : model.coordinates) {
    const double n = c.weight;
    if (n == 0.0) continue;
    switch (c.kind) {
      case CoordinateKind::complex: {
        const std::string bar = conjugate_name(c.name);
        out[*alg->differential_of(alg->symbol_index(c.name))] = I * theta * n * symbol(model, c.name);
        out[*alg->differential_of(alg->symbol_index(bar))] = -I * theta * n * symbol(model, bar);
        break;
      }
      case CoordinateKind::angle: out[*alg->differential_of(alg->symbol_index(c.name))] = Poly(theta * n); break;
      case CoordinateKind::real: break;
    }
  }
  return out;
}

TangentVector orbital_projection(const ActionModel& model, std::span<const Complex> base_point,
                                 std::span<const Complex> covector) {
  require_pairing(model);
  if (covector.size() != base_point.size()) throw DimensionMismatch("covector has the wrong number of components");
  const auto rho = infinitesimal_generator(model, 1.0, base_point);
  const auto base = base_coordinates(model);
  // ρᵗξ = ⟨ρ, ξ⟩ for the flat metric, Re(a·conj(b)) on each complex slot.
  double pairing = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (model.coordinates[base[k]].kind == CoordinateKind::complex) {
      pairing += (rho[k] * std::conj(covector[k])).real();
    } else {
      pairing += rho[k].real() * covector[k].real();
    }
  }
  TangentVector out(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) out[k] = rho[k] * pairing;
  return out;
}

namespace {

// ρ (v = 1) and ⟨ρ, ξ⟩ as polynomials.
std::pair<std::vector<Poly>, Poly> symbolic_rho(const ActionModel& model) {
  require_pairing(model);
  const auto base = base_coordinates(model);
  const auto fiber = fiber_coordinates(model);
  std::vector<Poly> rho;
  Poly pairing;
  for (std::size_t k = 0; k < base.size(); ++k) {
    const auto& b = model.coordinates[base[k]];
    const auto& f = model.coordinates[fiber[k]];
    const double n = b.weight;
    switch (b.kind) {
      case CoordinateKind::complex: {
        const Poly r = -I * n * symbol(model, b.name);
        const Poly r_bar = I * n * symbol(model, conjugate_name(b.name));
        pairing += Complex{0.5} * (r * symbol(model, conjugate_name(f.name)) + r_bar * symbol(model, f.name));
        rho.push_back(r);
        break;
      }
      case CoordinateKind::angle:
        rho.emplace_back(-n);
        pairing += Poly(-n) * symbol(model, f.name);
        break;
      case CoordinateKind::real: rho.emplace_back(0.0); break;
    }
  }
  return {rho, pairing};
}

}  // namespace

std::vector<Poly> orbital_projection_symbolic(const ActionModel& model) {
  auto [rho, pairing] = symbolic_rho(model);
  for (auto& r : rho) r = r * pairing;
  return rho;
}

NumericSuperMatrix clifford_multiplication(const ActionModel& model, std::span<const Complex> w) {
  const auto& grading = model.bundle_w.parities;
  NumericSuperMatrix out(model.algebra, grading);
  if (grading.size() == 1) return out;
  if (grading.size() != 2 || grading[0] != Parity::even || grading[1] != Parity::odd)
    throw UnsupportedModel("clifford_multiplication: W must be ℂ ⊕ εℂ or rank 1");
  if (w.size() != 1) throw DimensionMismatch("clifford_multiplication: expected one complex direction");
  out(0, 1) = NumericForm::scalar(model.algebra, std::conj(w[0]));
  out(1, 0) = NumericForm::scalar(model.algebra, w[0]);
  return out;
}

SymbolicSuperMatrix clifford_multiplication(const ActionModel& model, const Poly& w) {
  const auto& grading = model.bundle_w.parities;
  SymbolicSuperMatrix out(model.algebra, grading);
  if (grading.size() == 1) return out;
  if (grading.size() != 2 || grading[0] != Parity::even || grading[1] != Parity::odd)
    throw UnsupportedModel("clifford_multiplication: W must be ℂ ⊕ εℂ or rank 1");
  out(0, 1) = scalar_form(model.algebra, w.conjugate());
  out(1, 0) = scalar_form(model.algebra, w);
  return out;
}

namespace {

Poly single_direction(const std::vector<Poly>& w, const ActionModel& model) {
  if (model.bundle_w.rank() == 1) return Poly{};
  if (w.size() != 1) throw UnsupportedModel("Clifford augmentation needs exactly one complex base coordinate");
  if (model.coordinates[base_coordinates(model)[0]].kind != CoordinateKind::complex)
    throw UnsupportedModel("Clifford augmentation needs a complex base coordinate");
  return w[0];
}

SymbolicSuperMatrix augmented_with(const ActionModel& model, const Poly& w) {
  return lift_from_e(model, model.symbol) + lift_from_w(model, clifford_multiplication(model, w));
}

}  // namespace

SymbolicSuperMatrix augmented_symbol(const ActionModel& model) {
  return augmented_with(model, single_direction(orbital_projection_symbolic(model), model));
}

ShellGrid default_shell_grid() {
  ShellGrid g;
  for (int r = 1; r <= 8; ++r) g.radii.push_back(r);
  return g;
}

namespace {

// A symbol whose largest singular value is below `floor` counts as singular.
double normalized_abs_det(const Eigen::MatrixXcd& m, double floor, double& abs_det) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  abs_det = 1.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) abs_det *= s(i);
  if (s.size() == 0 || s(0) <= floor) return 0.0;
  double normalized = 1.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) normalized *= s(i) / s(0);
  return normalized;
}

bool has_hopf_grid(const ActionModel& model) {
  return model.coordinates.size() == 2 && model.coordinates[0].kind == CoordinateKind::complex &&
         model.coordinates[1].kind == CoordinateKind::complex;
}

}  // namespace

EllipticityReport ellipticity_scan(const SymbolicSuperMatrix& symbol_matrix, const ActionModel& model,
                                   const ShellGrid& grid, double threshold, double r0) {
  if (grid.radii.empty()) throw InvalidArgument("ellipticity_scan: empty grid");
  const bool hopf = has_hopf_grid(model);
  if (hopf ? (grid.polar < 2 || grid.azimuth < 1) : grid.random_points == 0)
    throw InvalidArgument("ellipticity_scan: empty grid");
  const std::size_t n = symbol_matrix.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (symbol_matrix(i, j).max_degree() > 0) throw InvalidArgument("ellipticity_scan: symbol has form entries");

  EllipticityReport report;
  report.threshold = threshold;
  report.r0 = r0;
  report.radii = grid.radii;
  report.min_normalized_det = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(grid.seed);
  std::normal_distribution<double> normal;
  const std::size_t dim = real_dimension(model);

  std::vector<double> log_r;
  std::vector<double> log_mean;
  bool any_beyond = false;
  for (double r : grid.radii) {
    std::vector<std::vector<Complex>> points;
    if (hopf) {
      for (int a = 0; a < grid.polar; ++a) {
        const double eta = a * std::numbers::pi / (2.0 * (grid.polar - 1));
        for (int b = 0; b < grid.azimuth; ++b) {
          const double alpha = 2.0 * std::numbers::pi * b / grid.azimuth;
          for (int c = 0; c < grid.azimuth; ++c) {
            const double beta = 2.0 * std::numbers::pi * c / grid.azimuth;
            const std::vector<Complex> coords{r * std::cos(eta) * std::polar(1.0, alpha),
                                              r * std::sin(eta) * std::polar(1.0, beta)};
            points.push_back(symbol_values_from_coordinates(model, coords));
          }
        }
      }
    } else {
      for (std::size_t p = 0; p < grid.random_points; ++p) {
        std::vector<double> x(dim);
        double norm = 0.0;
        for (auto& v : x) {
          v = normal(rng);
          norm += v * v;
        }
        norm = std::sqrt(norm);
        for (auto& v : x) v *= r / norm;
        points.push_back(symbol_values(model, x));
      }
    }

    const double floor = 1e-9 * std::pow(std::max(1.0, r), model.symbol_order);
    double shell_min = std::numeric_limits<double>::infinity();
    double mean = 0.0;
    for (const auto& values : points) {
      Eigen::MatrixXcd m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = symbol_matrix(i, j).scalar_part().evaluate(values);
      double abs_det = 0.0;
      shell_min = std::min(shell_min, normalized_abs_det(m, floor, abs_det));
      mean += abs_det;
    }
    mean /= static_cast<double>(points.size());
    report.samples += points.size();
    report.shell_min.push_back(shell_min);
    if (r >= r0) {
      any_beyond = true;
      report.min_normalized_det = std::min(report.min_normalized_det, shell_min);
    }
    if (mean > 0.0 && r > 0.0) {
      log_r.push_back(std::log(r));
      log_mean.push_back(std::log(mean));
    }
  }
  if (!any_beyond) throw InvalidArgument("ellipticity_scan: no shell at or beyond r0");

  if (log_r.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < log_r.size(); ++k) {
      mx += log_r[k];
      my += log_mean[k];
    }
    mx /= static_cast<double>(log_r.size());
    my /= static_cast<double>(log_r.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < log_r.size(); ++k) {
      sxy += (log_r[k] - mx) * (log_mean[k] - my);
      sxx += (log_r[k] - mx) * (log_r[k] - mx);
    }
    report.growth_exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  report.pass = report.min_normalized_det > threshold;
  return report;
}

SymbolicSuperMatrix HomotopyPath::at(std::size_t stage, double s) const {
  const auto& st = stages.at(stage);
  return st.from * Complex{1.0 - s, 0.0} + st.to * Complex{s, 0.0};
}

HomotopyPath homotopy_path(const ActionModel& model) {
  if (model.bundle_w.rank() != 2) throw UnsupportedModel("homotopy_path: W must have rank 2");
  auto [rho, pairing] = symbolic_rho(model);
  if (rho.size() != 1 || model.coordinates[base_coordinates(model)[0]].kind != CoordinateKind::complex)
    throw UnsupportedModel("homotopy_path: needs one complex base coordinate");
  const auto fiber = fiber_coordinates(model);
  // φ = (−ρ)(−⟨ρ,ξ⟩); the first stage takes the scalar factor to 1.
  const Poly w0 = rho[0] * pairing;
  const Poly w1 = -rho[0];
  const Poly w2 = w1 + symbol(model, model.coordinates[fiber[0]].name);
  const auto l0 = augmented_with(model, w0);
  const auto l1 = augmented_with(model, w1);
  const auto l2 = augmented_with(model, w2);
  return HomotopyPath{{{l0, l1}, {l1, l2}}};
}

SymbolicSuperMatrix superconnection_from_homotopy(const ActionModel& model) {
  return homotopy_path(model).end() * I;
}

ActionModel change_of_variables(const ActionModel& model, const CoordinateChange& change) {
  ActionModel out = model;
  out.coordinates = change.coordinates;
  out.algebra = make_model_algebra(out.coordinates);

  const auto& old_alg = *model.algebra;
  std::vector<Poly> images(old_alg.num_symbols());
  for (std::size_t s = 0; s < old_alg.num_symbols(); ++s) {
    auto it = change.substitution.find(old_alg.symbol_name(s));
    if (it == change.substitution.end())
      throw InvalidArgument("change_of_variables: no image for '" + old_alg.symbol_name(s) + "'");
    Poly image;
    for (const auto& [name, coefficient] : it->second) {
      if (!out.algebra->find_symbol(name))
        throw InvalidArgument("change_of_variables: unknown new coordinate '" + name + "'");
      image += coefficient * Poly::variable(out.algebra, name);
    }
    images[s] = image;
  }

  auto pull = [&](const SymbolicSuperMatrix& m) {
    SymbolicSuperMatrix r(out.algebra, m.grading());
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j) r(i, j) = pullback(m(i, j), images, out.algebra);
    return r;
  };
  out.symbol = pull(model.symbol);
  if (model.odd_term) out.odd_term = pull(*model.odd_term);

  // Real Jacobian ∂(old real coordinates)/∂(new real coordinates), column by column.
  const std::size_t n_new = real_dimension(out);
  const std::size_t n_old = real_dimension(model);
  if (n_new != n_old) throw DimensionMismatch("change_of_variables: real dimensions differ");
  Eigen::MatrixXd jac(n_old, n_new);
  for (std::size_t m = 0; m < n_new; ++m) {
    std::vector<double> e(n_new, 0.0);
    e[m] = 1.0;
    const auto new_values = symbol_values(out, e);
    std::size_t row = 0;
    for (const auto& c : model.coordinates) {
      const Complex v = images[old_alg.symbol_index(c.name)].evaluate(new_values);
      jac(row++, m) = v.real();
      if (c.kind == CoordinateKind::complex) jac(row++, m) = v.imag();
    }
  }
  const double det = jac.determinant();
  if (std::abs(det) < 1e-14) throw InvalidArgument("change_of_variables: singular substitution");
  out.jacobian = model.jacobian * std::abs(det);
  out.orientation = model.orientation * (det > 0 ? 1 : -1);
  return out;
}

ActionModel c_plane_model() {
  ActionModel m;
  m.name = "c-plane";
  m.coordinates = {{"z", CoordinateKind::complex, CoordinateRole::base, 1},
                   {"xi", CoordinateKind::complex, CoordinateRole::fiber, 1}};
  m.algebra = make_model_algebra(m.coordinates);
  m.bundle_e = {{0, 1}, {Parity::even, Parity::odd}};
  m.bundle_w = {{0, 1}, {Parity::even, Parity::odd}};
  const Poly z = symbol(m, "z");
  const Poly xi = symbol(m, "xi");
  const Poly b = z + I * xi;  // symbol of ∂̄ + z, up to the normalization of ξ
  m.symbol = SymbolicSuperMatrix(m.algebra, m.bundle_e.parities);
  m.symbol(0, 1) = scalar_form(m.algebra, b.conjugate());
  m.symbol(1, 0) = scalar_form(m.algebra, b);
  m.tangent_weights = {1};
  m.orientation = symplectic_orientation(m.coordinates);
  m.odd_term = superconnection_from_homotopy(m);
  validate_model(m);
  return m;
}

ActionModel c_plane_uv_model() {
  CoordinateChange change;
  change.coordinates = {{"u", CoordinateKind::complex, CoordinateRole::mixed, 1},
                        {"v", CoordinateKind::complex, CoordinateRole::mixed, 1}};
  // Inverse of u = z + iξ, v = iz + ξ.
  change.substitution = {
      {"z", {{"u", 0.5}, {"v", -0.5 * I}}},
      {"zbar", {{"ubar", 0.5}, {"vbar", 0.5 * I}}},
      {"xi", {{"v", 0.5}, {"u", -0.5 * I}}},
      {"xibar", {{"vbar", 0.5}, {"ubar", 0.5 * I}}},
  };
  ActionModel m = change_of_variables(c_plane_model(), change);
  m.name = "c-plane-uv";
  validate_model(m);
  return m;
}

ActionModel zero_operator_model() {
  ActionModel m;
  m.name = "zero-op";
  m.coordinates = {{"theta", CoordinateKind::angle, CoordinateRole::base, 1},
                   {"xi", CoordinateKind::real, CoordinateRole::fiber, 0}};
  m.algebra = make_model_algebra(m.coordinates);
  m.bundle_e = {{0}, {Parity::even}};
  m.bundle_w = {{0}, {Parity::even}};
  m.symbol = SymbolicSuperMatrix(m.algebra, m.bundle_e.parities);
  // i·ω with the Liouville form ω = −ξ dθ.
  SymbolicSuperMatrix odd(m.algebra, total_bundle(m).grading);
  odd(0, 0) = SymbolicForm::generator(m.algebra, "dtheta").times(-I * symbol(m, "xi"));
  m.odd_term = odd;
  m.orientation = symplectic_orientation(m.coordinates);
  validate_model(m);
  return m;
}

}  // namespace eqchern

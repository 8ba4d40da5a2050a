#include "eqchern/equivariant.hpp"

#include <cmath>
#include <numbers>

namespace eqchern {

namespace {

constexpr Complex I{0.0, 1.0};

}  // namespace

Superconnection Superconnection::from_model(const ActionModel& model) {
  if (!model.odd_term) throw UnsupportedModel("model '" + model.name + "' has no superconnection term");
  if (!model.odd_term->is_zero() && total_parity(*model.odd_term) != Parity::odd)
    throw InvalidArgument("superconnection odd term fails the parity audit");
  return Superconnection{*model.odd_term};
}

SymbolicSuperMatrix moment(const ActionModel& model, Complex theta) {
  const auto tb = total_bundle(model);
  std::vector<Poly> diag;
  for (int w : tb.weights) diag.emplace_back(I * theta * static_cast<double>(w));
  return SymbolicSuperMatrix::diagonal(model.algebra, tb.grading, diag);
}

SymbolicSuperMatrix EquivariantCurvature::part(int degree) const {
  return value.map([degree](const SymbolicForm& f) { return f.part(degree); });
}

EquivariantCurvature equivariant_curvature(const Superconnection& sc, const ActionModel& model, Complex theta,
                                           const std::optional<SymbolicSuperMatrix>& moment_override) {
  const auto& b = sc.odd_term;
  const auto zeta = fundamental_vector_field(model, theta);
  EquivariantCurvature out;
  out.theta = theta;
  out.moment = moment_override ? *moment_override : moment(model, theta);
  out.value = exterior_derivative(b) + b * b - interior_product(zeta, b) + out.moment;
  return out;
}

NumericForm chern_form(const EquivariantCurvature& curvature, std::span<const Complex> point, double tol) {
  return supertrace(super_exp(evaluate(curvature.value, point), tol));
}

NumericForm chern_form(const ActionModel& model, Complex theta, std::span<const Complex> point, double tol) {
  return chern_form(equivariant_curvature(Superconnection::from_model(model), model, theta), point, tol);
}

NumericForm WeightedForm::evaluate(std::span<const Complex> point) const {
  return eqchern::evaluate(form, point) * std::exp(exponent.evaluate(point));
}

WeightedForm chern_form_symbolic(const EquivariantCurvature& curvature, double tol) {
  const auto& f = curvature.value;
  const auto body = f.degree_zero_part();
  const std::size_t n = f.dim();
  if (n == 0) throw InvalidArgument("chern_form_symbolic: empty curvature");

  // Common non-constant part q of the diagonal.
  Poly q = body(0, 0).scalar_part();
  q -= Poly(q.constant_term());
  std::vector<Poly> constants(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !body(i, j).is_zero()) throw UnsupportedShape("chern_form_symbolic: body is not diagonal");
    Poly c = body(i, i).scalar_part() - q;
    if (!c.is_constant()) throw UnsupportedShape("chern_form_symbolic: body is not scalar plus constant");
    constants[i] = c;
  }
  SymbolicSuperMatrix reduced = f;
  for (std::size_t i = 0; i < n; ++i) reduced(i, i) -= SymbolicForm::scalar(f.algebra(), q);
  const auto diag = SymbolicSuperMatrix::diagonal(f.algebra(), f.grading(), constants);
  const auto e = super_exp_duhamel(reduced, diag, tol);
  return WeightedForm{q, supertrace(e)};
}

WeightedForm chern_form_symbolic(const ActionModel& model, Complex theta, double tol) {
  return chern_form_symbolic(equivariant_curvature(Superconnection::from_model(model), model, theta), tol);
}

Complex bundle_character(std::span<const int> weights, const Grading& parities, Complex theta) {
  if (weights.size() != parities.size()) throw DimensionMismatch("bundle_character: weights and parities differ");
  Complex sum{};
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const Complex term = std::exp(I * static_cast<double>(weights[k]) * theta);
    sum += parities[k] == Parity::even ? term : -term;
  }
  return sum;
}

void check_pole(const ActionModel& model, Complex theta, const PoleGuard& guard) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (!guard.allow_near_pole && model.bundle_w.rank() > 1) {
    const double nearest = std::round(theta.real() / two_pi) * two_pi;
    if (std::abs(theta - Complex{nearest, 0.0}) < guard.theta_distance)
      throw PoleError("θ is within the pole guard of 2πℤ");
  }
  const Complex w = bundle_character(model.bundle_w.weights, model.bundle_w.parities, theta);
  if (std::abs(w) < guard.min_character) throw PoleError("ch(W)(θ) is too small to divide by");
}

NumericForm transverse_chern(const ActionModel& model, Complex theta, std::span<const Complex> point,
                             const PoleGuard& guard, double tol) {
  check_pole(model, theta, guard);
  const Complex w = bundle_character(model.bundle_w.weights, model.bundle_w.parities, theta);
  return chern_form(model, theta, point, tol) * (1.0 / w);
}

WeightedForm transverse_chern_symbolic(const ActionModel& model, Complex theta, const PoleGuard& guard, double tol) {
  check_pole(model, theta, guard);
  const Complex w = bundle_character(model.bundle_w.weights, model.bundle_w.parities, theta);
  auto out = chern_form_symbolic(model, theta, tol);
  out.form *= 1.0 / w;
  return out;
}

double closedness_residual(const WeightedForm& form, const ActionModel& model, Complex theta,
                           std::span<const Complex> point) {
  // (d − ι)(e^q α) = e^q (dq ∧ α + dα − ια).
  const auto zeta = fundamental_vector_field(model, theta);
  const auto dq = exterior_derivative(SymbolicForm::scalar(model.algebra, form.exponent));
  const auto r = dq * form.form + exterior_derivative(form.form) - interior_product(std::span<const Poly>(zeta), form.form);
  return max_abs_coefficient(WeightedForm{form.exponent, r}.evaluate(point));
}

double closedness_residual(const ActionModel& model, Complex theta, std::span<const Complex> point,
                           const std::optional<SymbolicSuperMatrix>& moment_override) {
  const auto curvature = equivariant_curvature(Superconnection::from_model(model), model, theta, moment_override);
  return closedness_residual(chern_form_symbolic(curvature), model, theta, point);
}

}  // namespace eqchern

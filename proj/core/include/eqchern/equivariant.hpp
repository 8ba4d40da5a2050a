#pragma once

// Cartan-model calculus for superconnections d + B on the trivial bundle
// 𝓔 = E ⊗ W over a flat model, with the circle parameter θ entering
// numerically.

#include <optional>
#include <span>

#include "eqchern/geometry.hpp"

namespace eqchern {

/// 𝐃 = d + B. B is stored with any factor i already applied (B = iL̃ for
/// the ℂ-plane, B = iω for the zero operator).
struct Superconnection {
  SymbolicSuperMatrix odd_term;

  static Superconnection from_model(const ActionModel& model);
};

/// iθ·diag(weights of 𝓔) over the model algebra.
SymbolicSuperMatrix moment(const ActionModel& model, Complex theta);

struct EquivariantCurvature {
  Complex theta;
  SymbolicSuperMatrix value;   // dB + B·B − ι_ζ B + μ
  SymbolicSuperMatrix moment;

  SymbolicSuperMatrix body() const { return value.degree_zero_part(); }
  SymbolicSuperMatrix part(int degree) const;
};

/// `moment_override` replaces the weight moment (used for negative controls).
EquivariantCurvature equivariant_curvature(const Superconnection& sc, const ActionModel& model, Complex theta,
                                           const std::optional<SymbolicSuperMatrix>& moment_override = std::nullopt);

/// trₛ exp(𝐅_𝔤(θ)) at a point given as symbol values, by scaling and squaring.
NumericForm chern_form(const ActionModel& model, Complex theta, std::span<const Complex> point, double tol = 1e-14);
NumericForm chern_form(const EquivariantCurvature& curvature, std::span<const Complex> point, double tol = 1e-14);

/// e^{exponent}·form with a polynomial exponent, the shape every Chern form
/// of a flat model takes.
struct WeightedForm {
  Poly exponent;
  SymbolicForm form;

  NumericForm evaluate(std::span<const Complex> point) const;
};

/// trₛ exp(𝐅_𝔤) symbolically. The body must be q·I + (constant diagonal) for a
/// polynomial q; then exp factors as e^q times a Duhamel series with
/// polynomial coefficients. Throws UnsupportedShape otherwise.
WeightedForm chern_form_symbolic(const EquivariantCurvature& curvature, double tol = 1e-14);
WeightedForm chern_form_symbolic(const ActionModel& model, Complex theta, double tol = 1e-14);

/// Σ ± e^{i w θ} over the summands, signed by parity.
Complex bundle_character(std::span<const int> weights, const Grading& parities, Complex theta);

struct PoleGuard {
  double theta_distance = 1e-6;  // rejection radius around 2πℤ
  double min_character = 1e-8;   // |ch(W)| floor, always enforced
  bool allow_near_pole = false;
};

/// Throws PoleError when θ is too close to 2πℤ (unless allowed) or ch(W)(θ) is too small.
void check_pole(const ActionModel& model, Complex theta, const PoleGuard& guard = {});

/// ch_𝔤(𝐃) / ch_𝔤(W).
NumericForm transverse_chern(const ActionModel& model, Complex theta, std::span<const Complex> point,
                             const PoleGuard& guard = {}, double tol = 1e-14);
WeightedForm transverse_chern_symbolic(const ActionModel& model, Complex theta, const PoleGuard& guard = {},
                                       double tol = 1e-14);

/// max |coefficient| of (d − ι_ζ(θ)) applied to e^q·α, at a point.
double closedness_residual(const WeightedForm& form, const ActionModel& model, Complex theta,
                           std::span<const Complex> point);

/// Residual of the model's own Chern form.
double closedness_residual(const ActionModel& model, Complex theta, std::span<const Complex> point,
                           const std::optional<SymbolicSuperMatrix>& moment_override = std::nullopt);

}  // namespace eqchern

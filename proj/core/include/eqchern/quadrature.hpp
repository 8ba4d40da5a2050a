#pragma once

// Berezin extraction and Gauss–Hermite integration over TM, index
// characters sampled in θ, and the regularized pairing for the zero operator.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eqchern/characters.hpp"
#include "eqchern/equivariant.hpp"

namespace eqchern {

struct QuadratureSpec {
  int gh_order = 24;        // Gauss–Hermite nodes per real dimension, at least 8
  int angle_points = 0;     // periodic trapezoid nodes per angle; 0 means 2·gh_order
  double prune = 1e-16;     // drop tensor points whose weight product is below this
  double jacobian = 1.0;    // extra constant factor; coordinate changes are already pulled back
  bool normalize = true;    // multiply by (2πi)^{−dim_R(TM)/2}
  unsigned threads = 0;     // 0: hardware concurrency; results do not depend on it
};

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // for the weight e^{−x²}
};

GaussHermiteRule gauss_hermite(int order);

/// (2πi)^{−n/2} for real dimension n.
Complex symplectic_normalization(std::size_t real_dimension);

/// ∫ p·e^{q} d^n x over the real coordinates of the model (Lebesgue measure,
/// declared order; angles over [0, 2π)). q must be quadratic with negative
/// definite real part on the non-angle coordinates and independent of angles.
Complex integrate_gaussian(const Poly& p, const Poly& q, const ActionModel& model, const QuadratureSpec& spec);

/// ∫_{TM} e^{q}·α: the top coefficient of α, converted to the real volume form
/// with the model orientation, normalization and jacobian applied.
Complex integrate_top_form(const WeightedForm& form, const ActionModel& model, const QuadratureSpec& spec);

/// ∫_{TM} Â²(θ)·ch_𝔤[σ](θ) for the model's transverse Chern character.
Complex integrate_top_form(const ActionModel& model, Complex theta, const QuadratureSpec& spec,
                           const PoleGuard& guard = {});

/// Â²(θ) times the top coefficient of the transverse Chern character at a
/// point: the integrand before fiber integration.
Complex assembled_top_coefficient(const ActionModel& model, Complex theta, std::span<const Complex> point,
                                  const PoleGuard& guard = {});

struct FourierSpec {
  int window = 63;             // fit c_n for |n| ≤ window
  double contour_shift = 0.25; // samples at θ + iη, selecting the expansion in |e^{iθ}| < 1
};

struct IndexReport {
  std::string model;
  std::vector<Complex> thetas;
  std::vector<Complex> values;
  CharacterSeries fourier;
  double fourier_residual_rms = 0.0;
  double contour_shift = 0.0;
  double quadrature_error = 0.0;     // |value(order) − value(order − 8)| at the first sample
  double closedness_residual = 0.0;  // max over probe points at the first sample
  Complex normalization;
  int orientation = 1;
  int gh_order = 0;
};

/// θ_k = 2π(k + ½)/count + iη.
std::vector<Complex> theta_grid(int count, double contour_shift = 0.0);

/// Values of the index integral on a θ grid and their Fourier coefficients,
/// fitted by least squares on the shifted contour Im θ = η and rescaled.
IndexReport index_character(const ActionModel& model, int theta_samples, const QuadratureSpec& spec,
                            const FourierSpec& fourier = {});

/// Least-squares fit of Σ_{|n|≤window} d_n e^{inθ} to samples at real θ.
CharacterSeries fit_fourier(std::span<const double> thetas, std::span<const Complex> values, int window,
                            double* residual_rms = nullptr);

struct DeltaPairingReport {
  std::vector<double> eps;
  std::vector<Complex> values;
  Complex extrapolated;
  Complex test_at_zero;
};

/// (1/2π) ∫ test(X) I_ε(X) dX with I_ε(X) = ∫_{TM} ch_𝔤(X)·e^{−ε|ξ|²}, the
/// regularized index of a model whose Chern form only oscillates in ξ.
/// The outer integral uses Gauss–Hermite nodes X = 2√ε·y matched to the
/// regulator. Extrapolates polynomially in ε to ε = 0.
DeltaPairingReport delta_pairing(const ActionModel& model, const std::function<Complex(double)>& test,
                                 std::span<const double> eps, const QuadratureSpec& spec);

/// Polynomial (Neville) extrapolation of (x_k, y_k) to x = 0.
Complex extrapolate_to_zero(std::span<const double> x, std::span<const Complex> y);

}  // namespace eqchern

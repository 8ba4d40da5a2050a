#pragma once

// Sampled checks of membership in the orbital symbol algebra: decay on the
// transverse cotangent space T_G M (condition b) and the bound
// |b| ≤ c_ε (1 + ‖φ_x(ξ)‖²)/(1 + ‖ξ‖²) + ε (condition c).

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eqchern/geometry.hpp"

namespace eqchern {

/// b(x, ξ): base point (one value per base coordinate) and covector (one per
/// fiber coordinate) to a matrix; |b| is its operator norm.
struct SymbolFunction {
  std::string name;
  std::function<Eigen::MatrixXcd(std::span<const Complex>, std::span<const Complex>)> evaluate;
  double x_support_radius = 1.0;  // ignored for angle coordinates
};

/// Radial cutoff a(x) = profile(‖x‖), with angle coordinates left out of ‖x‖.
struct Cutoff {
  std::string name;
  double radius = 1.0;
  std::function<double(double)> profile;
};

/// height·exp(1 − 1/(1 − |x|²/r²)) inside the ball, 0 outside.
Cutoff bump_cutoff(double radius, double height = 1.0);

struct SymbolGrid {
  double radius = 1000.0;    // outer |ξ|
  int x_points = 64;
  int directions = 32;       // ξ directions, measured from the orbit-orthogonal one
  int radii = 24;            // log-spaced in [radius·min_fraction, radius], plus ξ = 0
  double min_fraction = 1e-4;
};

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& m);

/// ‖x‖ over the non-angle base coordinates.
double base_norm(const ActionModel& model, std::span<const Complex> base_point);

/// (1 + ‖x‖² + ‖ξ‖²)^{−order/2}·σ(x, ξ).
SymbolFunction normalized_symbol(const ActionModel& model);

/// a(x)·(1 − σ̂²).
SymbolFunction cutoff_defect(const ActionModel& model, const Cutoff& cutoff);

struct ConditionCReport {
  std::vector<double> eps;
  std::vector<double> c_outer;   // minimal c_ε on the grid of radius R
  std::vector<double> c_inner;   // same on radius R/2
  std::vector<double> ratio;     // c_outer / c_inner
  double stabilization_ratio = 1.1;
  bool heuristic = true;         // stabilization is a sampling criterion, not a proof
  bool pass = false;
};

ConditionCReport condition_c_fit(const SymbolFunction& b, const ActionModel& model, std::span<const double> eps_list,
                                 const SymbolGrid& grid);

struct DecayReport {
  std::vector<double> radii;
  std::vector<double> shell_sup;  // sup |b| over T_G M at |ξ| = r
  double delta = 1e-3;
  bool vacuous = false;           // T_G M is the zero section; nothing escapes to infinity
  bool pass = false;
};

DecayReport restriction_decay_check(const SymbolFunction& b, const ActionModel& model, const SymbolGrid& grid,
                                    double delta = 1e-3);

struct TransversalReport {
  std::vector<std::string> cutoffs;
  std::vector<ConditionCReport> condition_c;
  std::vector<DecayReport> decay;
  bool pass = false;
};

std::vector<Cutoff> default_cutoffs();
std::vector<double> default_eps_list();

TransversalReport transversal_ellipticity_check(const ActionModel& model, std::span<const Cutoff> cutoffs,
                                                const SymbolGrid& grid, std::span<const double> eps_list,
                                                double delta = 1e-3);

}  // namespace eqchern

#pragma once

// Circle actions on flat models of TM: coordinates with weights, the
// equivariant bundles E and W, the symbol, and the derived objects built from
// them (orbital projection, Clifford augmentation, homotopies).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqchern/supermatrix.hpp"

namespace eqchern {

enum class CoordinateKind { complex, real, angle };

// Mixed coordinates come out of a change of variables that blends base and
// fiber directions; they carry weights but no base/fiber pairing.
enum class CoordinateRole { base, fiber, mixed };

struct Coordinate {
  std::string name;
  CoordinateKind kind = CoordinateKind::complex;
  CoordinateRole role = CoordinateRole::base;
  int weight = 0;
};

struct BundleData {
  std::vector<int> weights;
  Grading parities;

  std::size_t rank() const { return weights.size(); }
};

struct ActionModel {
  std::string name;
  std::vector<Coordinate> coordinates;
  AlgebraPtr algebra;
  BundleData bundle_e;
  BundleData bundle_w;
  SymbolicSuperMatrix symbol;                    // on E, form degree 0
  std::optional<SymbolicSuperMatrix> odd_term;   // superconnection odd part on E ⊗ W
  std::vector<int> tangent_weights;              // complex tangent weights of M entering Â
  int orientation = 1;                           // sign of the TM orientation vs real_coordinate order
  double jacobian = 1.0;                         // |det ∂(original)/∂(current)| after coordinate changes
  int symbol_order = 1;                          // growth order used to normalize the symbol
};

/// Name of the conjugate symbol of a complex coordinate.
std::string conjugate_name(const std::string& name);

/// Complex coordinate z contributes symbols z, zbar with generators dz, dzbar;
/// real and angle coordinates contribute one symbol each.
AlgebraPtr make_model_algebra(std::span<const Coordinate> coordinates);

/// Consistency checks on weights, ranks, grading and symbol parity.
void validate_model(const ActionModel& model);

std::size_t real_dimension(const ActionModel& model);

/// Symbol values for a point given in real coordinates (Re/Im per complex
/// coordinate, in declaration order).
std::vector<Complex> symbol_values(const ActionModel& model, std::span<const double> real_point);

/// Symbol values from one complex number per coordinate (real parts are used
/// for real and angle coordinates).
std::vector<Complex> symbol_values_from_coordinates(const ActionModel& model, std::span<const Complex> coordinates);

/// Symbol values from a base point and a covector, one entry per base/fiber coordinate.
std::vector<Complex> symbol_values(const ActionModel& model, std::span<const Complex> base_point,
                                   std::span<const Complex> covector);

std::vector<std::size_t> base_coordinates(const ActionModel& model);
std::vector<std::size_t> fiber_coordinates(const ActionModel& model);

/// Sign of the symplectic orientation dx_1 dξ_1 … dx_n dξ_n relative to the
/// declared real coordinate order.
int symplectic_orientation(std::span<const Coordinate> coordinates);

struct TotalBundle {
  Grading grading;
  std::vector<int> weights;
  std::vector<std::pair<std::size_t, std::size_t>> factors;  // (E index, W index) per basis vector
};

/// Basis of 𝓔 = E ⊗ W: even pairs first, then odd, each ordered by (E index, W index).
TotalBundle total_bundle(const ActionModel& model);

/// A ⊗ 1 on 𝓔 for A acting on E.
SymbolicSuperMatrix lift_from_e(const ActionModel& model, const SymbolicSuperMatrix& a);

/// 1 ⊗ B on 𝓔 for homogeneous B acting on W, with the graded sign (−1)^{|B||e|}.
SymbolicSuperMatrix lift_from_w(const ActionModel& model, const SymbolicSuperMatrix& b);

using TangentVector = std::vector<Complex>;

/// ρ_x(v) = d/dt|₀ exp(−tv)·x on the base coordinates: −i·n·v·z for a
/// weight-n complex coordinate, −n·v for an angle.
TangentVector infinitesimal_generator(const ActionModel& model, double v, std::span<const Complex> base_point);

/// Components, one per generator, of the vector field generating
/// x ↦ exp(tθ)·x on TM: iθn·w on w, −iθn·w̄ on w̄, n·θ on an angle. This is
/// the field contracted in the Cartan differential d − ι.
std::vector<Poly> fundamental_vector_field(const ActionModel& model, Complex theta);

/// φ = ρρᵗ applied to a covector (identified with a tangent vector by the flat metric).
TangentVector orbital_projection(const ActionModel& model, std::span<const Complex> base_point,
                                 std::span<const Complex> covector);

/// φ_x(ξ) as polynomials in the model symbols, one per base coordinate.
std::vector<Poly> orbital_projection_symbolic(const ActionModel& model);

/// c(w) on W. Rank 2 (ℂ ⊕ εℂ): [[0, w̄], [w, 0]]; rank 1: the zero map.
NumericSuperMatrix clifford_multiplication(const ActionModel& model, std::span<const Complex> w);
SymbolicSuperMatrix clifford_multiplication(const ActionModel& model, const Poly& w);

/// σ_A ⊗ 1 + 1 ⊗ c(φ_x(ξ)) on 𝓔.
SymbolicSuperMatrix augmented_symbol(const ActionModel& model);

struct ShellGrid {
  std::vector<double> radii;
  int polar = 9;      // Hopf grid: η = k·π/(2(polar−1))
  int azimuth = 12;   // Hopf grid: α, β = 2πk/azimuth
  std::size_t random_points = 1296;  // per shell, for models without a Hopf grid
  std::uint64_t seed = 20240601;
};

/// Shells r = 1..8 with the Hopf grid, ≈10⁴ samples.
ShellGrid default_shell_grid();

struct EllipticityReport {
  std::vector<double> radii;
  std::vector<double> shell_min;  // min normalized |det| per shell
  double min_normalized_det = 0.0;  // over shells with r ≥ r0
  double growth_exponent = 0.0;     // slope of log mean |det| against log r
  double threshold = 0.0;
  double r0 = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

/// Scans |det| of the symbol normalized by its largest singular value,
/// |det S| / σ_max(S)^n, over spherical shells in TM. Samples with
/// σ_max below 1e−9·max(1, r)^order count as zero.
EllipticityReport ellipticity_scan(const SymbolicSuperMatrix& symbol, const ActionModel& model,
                                   const ShellGrid& grid, double threshold = 1e-6, double r0 = 2.0);

struct HomotopyPath {
  struct Stage {
    SymbolicSuperMatrix from;
    SymbolicSuperMatrix to;
  };
  std::vector<Stage> stages;

  /// (1−s)·from + s·to on the given stage.
  SymbolicSuperMatrix at(std::size_t stage, double s) const;
  const SymbolicSuperMatrix& start() const { return stages.front().from; }
  const SymbolicSuperMatrix& end() const { return stages.back().to; }
};

/// Two linear stages: the factor ⟨ρ,ξ⟩ of φ is deformed to 1, then ξ is
/// added to the Clifford argument. Requires one complex base coordinate and
/// W of rank 2.
HomotopyPath homotopy_path(const ActionModel& model);

/// i times the endpoint of the homotopy: the odd part of 𝐃 = d + iL̃.
SymbolicSuperMatrix superconnection_from_homotopy(const ActionModel& model);

/// Linear change of variables. Each old symbol maps to Σ coefficient·(new symbol).
struct CoordinateChange {
  std::vector<Coordinate> coordinates;
  std::map<std::string, std::vector<std::pair<std::string, Complex>>> substitution;
};

/// Rewrites symbol and superconnection in the new coordinates. The absolute
/// Jacobian is multiplied into `jacobian`, its sign into `orientation`.
ActionModel change_of_variables(const ActionModel& model, const CoordinateChange& change);

/// Circle acting on ℂ with A = ∂̄_z + z; coordinates (z, ξ).
ActionModel c_plane_model();

/// The same model after u = z + iξ, v = iz + ξ.
ActionModel c_plane_uv_model();

/// Zero operator on S¹ with the Liouville superconnection; coordinates (θ, ξ).
ActionModel zero_operator_model();

}  // namespace eqchern

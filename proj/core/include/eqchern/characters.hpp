#pragma once

// Truncated Laurent series in t = e^{iθ}, the arithmetic of circle
// characters after inverting (1 − tᵐ).

#include <span>
#include <string>
#include <vector>

#include "eqchern/exterior.hpp"

namespace eqchern {

enum class Direction { positive, negative };

/// Coefficients c_n for n in [n_min, n_max]. Coefficients outside the window
/// are treated as unknown; products keep the window of their operands and
/// are exact there when both operands vanish below their windows (positive
/// expansions and polynomials).
class CharacterSeries {
 public:
  static constexpr int default_min = -64;
  static constexpr int default_max = 64;

  CharacterSeries() : CharacterSeries(default_min, default_max) {}
  CharacterSeries(int n_min, int n_max);

  static CharacterSeries monomial(int n, Complex c, int n_min = default_min, int n_max = default_max);

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  bool in_window(int n) const { return n >= n_min_ && n <= n_max_; }

  /// Zero outside the window.
  Complex operator[](int n) const { return in_window(n) ? c_[static_cast<std::size_t>(n - n_min_)] : Complex{}; }
  void set(int n, Complex c);
  void add(int n, Complex c);

  /// Restrict to a sub-window.
  CharacterSeries window(int n_min, int n_max) const;

  friend CharacterSeries operator+(const CharacterSeries& a, const CharacterSeries& b);
  friend CharacterSeries operator-(const CharacterSeries& a, const CharacterSeries& b);
  friend CharacterSeries operator*(const CharacterSeries& a, const CharacterSeries& b);
  friend CharacterSeries operator*(Complex s, const CharacterSeries& a);
  friend bool operator==(const CharacterSeries& a, const CharacterSeries& b) = default;

  /// Σ c_n e^{inθ} over the window.
  Complex evaluate(Complex theta) const;

  /// Largest |c_n − round(c_n)| (imaginary parts count in full).
  double integrality_defect() const;
  bool is_integral(double tol = 1e-9) const { return integrality_defect() < tol; }

  /// "n,re,im" header plus one row per coefficient.
  std::string to_csv() const;
  static CharacterSeries from_csv(const std::string& text);

 private:
  int n_min_;
  int n_max_;
  std::vector<Complex> c_;
};

/// 1/(1 − c·tᵐ): Σ_k cᵏ t^{km} (positive) or −c⁻¹t^{−m} Σ_k c^{−k} t^{−km} (negative).
CharacterSeries geometric_expand(Complex c, int m, Direction direction, int n_min = CharacterSeries::default_min,
                                 int n_max = CharacterSeries::default_max);

/// Â(M)²(iθ) = Π_w (iwθ)² e^{iwθ}/(1 − e^{iwθ})² over the complex tangent weights.
Complex ahat_squared(Complex theta, std::span<const int> weights);
inline Complex ahat_squared(Complex theta) {
  const int w[] = {1};
  return ahat_squared(theta, w);
}

/// The same through det((R/2)/sinh(R/2)): Π over the eigenvalues ±iwθ of R.
Complex ahat_squared_det(Complex theta, std::span<const int> weights);

/// Â² = prefactor · θ^{theta_power} · series(t).
struct AhatSeries {
  CharacterSeries series;
  Complex prefactor;
  int theta_power = 0;
};

AhatSeries ahat_squared_series(std::span<const int> weights, Direction direction = Direction::positive,
                               int n_min = CharacterSeries::default_min, int n_max = CharacterSeries::default_max);

/// numerator · Π_j 1/(1 − t^{w_j}), i.e. the quotient by Σ_k (−1)^k Λᵏ N.
CharacterSeries localized_index(const CharacterSeries& numerator, std::span<const int> normal_weights,
                                Direction direction);

}  // namespace eqchern

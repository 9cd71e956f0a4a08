#pragma once

#include "aq/fock.hpp"
#include "aq/series.hpp"
#include "aq/symplectic.hpp"

#include <functional>
#include <optional>
#include <random>

namespace aq {

/// The frame derivations do not commute or the Wick tensor depends on the base point.
class FlatFrameViolation : public Error {
public:
  using Error::Error;
};

using GaussMatrix = std::vector<std::vector<GaussRational>>;

/// Λ = −½(G + iΠ), G = (JᵀΩ)⁻¹ the inverse metric and Π = Ω⁻ᵀ the frame Poisson tensor.
/// Throws PreconditionError naming the failed compatibility check.
GaussMatrix wick_tensor(const RatMatrix& omega, const RatMatrix& J);

/// Composition data of the Wick-type star product in a flat frame.
class FlatFrameConfig {
public:
  /// Validates commuting anchor images, constant invertible Ω, and
  /// Λ − Λᵀ = −iΠ with −(Λ + Λᵀ) positive semidefinite.
  static FlatFrameConfig make(AlgebroidPresentation A, PolyMatrix<Rational> omega, const GaussMatrix& lambda);
  /// No validation; Λ may carry polynomial entries. Used to exhibit associativity defects.
  static FlatFrameConfig unchecked(AlgebroidPresentation A, PolyMatrix<Rational> omega,
                                   PolyMatrix<GaussRational> lambda);

  const AlgebroidPresentation& algebroid() const { return A_; }
  const PolyMatrix<Rational>& omega() const { return omega_; }
  const PolyMatrix<GaussRational>& lambda() const { return lambda_; }
  const ChartPtr& chart() const { return A_.chart(); }
  std::size_t rank() const { return A_.rank(); }

  /// D_i p = ρ(e_i)(p).
  GaussPoly derivation(std::size_t i, const GaussPoly& p) const;

private:
  FlatFrameConfig(AlgebroidPresentation A, PolyMatrix<Rational> omega, PolyMatrix<GaussRational> lambda);

  AlgebroidPresentation A_;
  PolyMatrix<Rational> omega_;
  PolyMatrix<GaussRational> lambda_;
  PolyMatrix<GaussRational> anchor_gauss_;
};

/// (f★g)_k = Σ over multisets {(i_p, j_p)^{m_p}} of Π Λ_{i_p j_p}^{m_p}/m_p! (D^α f)(D^β g), k ≤ N.
FormalFunction star(const FlatFrameConfig& cfg, const GaussPoly& f, const GaussPoly& g, std::size_t order);
FormalFunction star(const FlatFrameConfig& cfg, const PolyFn& f, const PolyFn& g, std::size_t order);
/// ħ-bilinear extension to series of equal truncation order.
FormalFunction star(const FlatFrameConfig& cfg, const FormalFunction& F, const FormalFunction& G);

PolyFn random_polynomial(const ChartPtr& chart, unsigned degree, std::mt19937_64& rng);

struct AssociativityReport {
  std::size_t trials = 0;
  std::size_t order = 0;
  /// Lowest order at which some trial had a nonzero defect; order + 1 when none did.
  std::size_t first_nonzero_order = 0;
  std::string witness;
  bool passed() const { return first_nonzero_order > order; }
};

AssociativityReport check_associativity(const FlatFrameConfig& cfg, std::size_t order, std::size_t trials,
                                        unsigned degree, std::uint64_t seed);

/// Bargmann parameter used for a deformation parameter ħ: the Toeplitz layer runs at h = 2ħ,
/// so that [T_x, T_y] = −iħ.
constexpr double bargmann_h(double hbar) { return 2 * hbar; }

struct SymbolEstimate {
  std::vector<ComplexPoly> coefficients;
  std::vector<double> errors;
};

struct ExtractOptions {
  unsigned degree_bound = 4;
  double threshold = 1e-3;
  /// Fitted coefficients below this magnitude are treated as zero; the degree-4 fit on the
  /// default grid amplifies floating-point noise to about 1e-9.
  double chop = 1e-8;
};

/// Recovers f_0..f_N of T(ħ) ~ Σ ħ^k T_{f_k} by Berezin symbols at `points`, Neville
/// extrapolation to ħ → 0, least-squares polynomial fits on `chart` and peel-off.
SymbolEstimate total_symbol_extract(const std::function<FockOperator(double)>& family,
                                    const std::vector<double>& hbar_grid,
                                    const std::vector<std::vector<Complex>>& points, std::size_t order,
                                    const ChartPtr& chart, const ExtractOptions& opts = {});

/// Points on a small square grid in each complex coordinate.
std::vector<std::vector<Complex>> default_base_points(std::size_t modes);

std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

struct OracleReport {
  std::size_t order = 0;
  std::vector<double> hbar;
  std::vector<double> residual;
  std::vector<double> scale;
  std::optional<double> slope;
  /// Every residual sits at the floating-point floor: the truncated series reproduces the
  /// operator product exactly.
  bool degenerate = false;
  bool passed() const { return degenerate || (slope && *slope >= static_cast<double>(order) + 0.8); }
};

struct OracleOptions {
  std::size_t cutoff = 32;
  std::size_t buffer = 8;
  double floor = 1e-10;
};

/// ‖T_f T_g − Σ_{k≤N} ħ^k T_{(f★g)_k}‖ below the buffer, fitted against ħ on a log-log scale.
OracleReport oracle_compare(const FlatFrameConfig& cfg, const GaussPoly& f, const GaussPoly& g, std::size_t order,
                            const std::vector<double>& hbar_grid, const OracleOptions& opts = {});

} // namespace aq

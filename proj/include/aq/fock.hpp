#pragma once

#include "aq/heisenberg.hpp"
#include "aq/polynomial.hpp"

#include <complex>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace aq {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// J with ω(J·,J·) = ω and g = ω(J·,·) positive, plus a Darboux frame
/// B = [q_1..q_n, p_1..p_n] (columns) with ω(q_a, p_b) = δ_ab and p_a = −J q_a.
struct CompatibleStructure {
  Matrix<double> J;
  Matrix<double> g;
  Matrix<double> darboux;
  double condition_number = 1;
};

/// J = −A(−A²)^{-1/2} where ω(u,v) = g0(Au,v), computed after symmetrising by g0^{1/2}.
CompatibleStructure compatible_J(const Matrix<double>& omega, const Matrix<double>& g0);

/// Symmetric Fock space over n modes truncated at total occupation N.
/// Basis: occupation multi-indices, ordered by level then lexicographically.
class FockSpace {
public:
  FockSpace(std::size_t modes, std::size_t cutoff);

  std::size_t modes() const { return modes_; }
  std::size_t cutoff() const { return cutoff_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::vector<std::size_t>>& basis() const { return basis_; }
  std::size_t level(std::size_t index) const { return levels_.at(index); }
  std::optional<std::size_t> index_of(const std::vector<std::size_t>& occupation) const;
  /// Number of basis states with total occupation ≤ max_level (they come first).
  std::size_t count_up_to(std::size_t max_level) const;

private:
  std::size_t modes_;
  std::size_t cutoff_;
  std::vector<std::vector<std::size_t>> basis_;
  std::vector<std::size_t> levels_;
};

using FockSpacePtr = std::shared_ptr<const FockSpace>;

inline FockSpacePtr make_fock_space(std::size_t modes, std::size_t cutoff) {
  return std::make_shared<const FockSpace>(modes, cutoff);
}

/// Dense complex operator on a truncated Fock space.
class FockOperator {
public:
  FockOperator(FockSpacePtr space, CMatrix m);
  static FockOperator zero(FockSpacePtr space);
  static FockOperator identity(FockSpacePtr space);

  const FockSpacePtr& space() const { return space_; }
  const CMatrix& matrix() const { return m_; }

  FockOperator adjoint() const { return {space_, m_.adjoint()}; }
  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(Complex s) const { return {space_, m_ * s}; }

  /// Block on the states of total occupation ≤ max_level.
  CMatrix restricted(std::size_t max_level) const;
  /// Operator 2-norm of `restricted(max_level)`.
  double restricted_norm(std::size_t max_level) const;

  /// Row-major, little-endian float64 (re, im) pairs.
  void write_binary(std::ostream& os) const;
  /// One row per line, "re im" pairs with 17 significant digits.
  void write_text(std::ostream& os) const;

private:
  void require_same_space(const FockOperator& o, const char* what) const;

  FockSpacePtr space_;
  CMatrix m_;
};

double spectral_norm(const CMatrix& m);

FockOperator annihilation(const FockSpacePtr& space, std::size_t mode);
FockOperator creation(const FockSpacePtr& space, std::size_t mode);

/// Images of the frame generators under dπ_λ. With b_k the Darboux columns,
/// dπ(b_j) = √(λ/2)(a_j − a_j†), dπ(b_{n+j}) = i√(λ/2)(a_j + a_j†), dπ(Z) = iλ.
struct Representation {
  FockSpacePtr space;
  CompatibleStructure structure;
  double lambda;
  std::vector<FockOperator> darboux_generators;
  FockOperator central;

  /// dπ(ξ) + t·dπ(Z) for ξ in frame coordinates.
  FockOperator generator(const Vector<double>& xi, double t) const;
  /// π_λ(ξ, t) = exp(dπ(ξ) + t·dπ(Z)).
  FockOperator group_element(const Vector<double>& xi, double t) const;
  FockOperator group_element(const GroupElement<double>& g) const { return group_element(g.xi, g.t); }
};

Representation build_representation(const FockSpacePtr& space, const CompatibleStructure& C, double lambda);

FockOperator vacuum_projector(const FockSpacePtr& space);

/// Gauss-Hermite nodes and weights for ∫ e^{−y²} f(y) dy (Golub-Welsch).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(std::size_t order);

struct QuadratureSpec {
  std::size_t order = 32;
  /// Extra occupation levels carried during quadrature, then discarded.
  std::size_t pad = 32;
  bool check_convergence = true;
  double tolerance = 1e-6;
};

struct Quantization {
  FockOperator op;
  /// Normalisation of Op(u) = c_norm ∫ û(x) π_λ(x, 0) dx.
  double c_norm;
  double trace;
  std::size_t order;
  /// Largest entry change when the quadrature order is doubled (0 when not checked).
  double convergence_shift = 0;
};

/// Op_λ(u) for a symbol with Gaussian closed form; throws NonConvergence when doubling
/// the quadrature order moves an entry by more than the tolerance.
Quantization quantize_symbol(const HomogeneousSymbol& u, double lambda, const FockSpacePtr& space,
                             const CompatibleStructure& C, const QuadratureSpec& spec = {});

struct PurifyOptions {
  double tol = 1e-12;
  std::size_t max_iter = 50;
  bool symmetrize = false;
};

struct PurifyResult {
  CMatrix S;
  /// ‖Δ_k‖₂ for k = 0..iterations.
  std::vector<double> residuals;
  /// ‖S'² − S' − (−3Δ² + 4Δ³)‖ / (‖S'‖² + ‖S'‖) per step.
  std::vector<double> identity_errors;
  std::size_t iterations = 0;
  std::optional<double> fitted_order;
};

/// S' = S − (2S − 1)Δ with Δ = S² − S, until ‖Δ‖₂ ≤ tol.
PurifyResult purify_projector(const CMatrix& S0, const PurifyOptions& opts = {});
PurifyResult purify_projector(const FockOperator& S0, const PurifyOptions& opts = {});

/// Least-squares slope of log δ_{k+1} against log δ_k over steps with δ_{k+1} above `floor`.
std::optional<double> fit_convergence_order(const std::vector<double>& residuals, double floor = 1e-13);

/// Hermitian test seed U diag(d) U* whose eigenvalues satisfy max |d² − d| = delta0.
CMatrix random_near_projector(std::size_t dim, double delta0, std::uint64_t seed);

/// T_f in the Bargmann model with weight exp(−|z|²/h), z_j = x_j + i y_j; the chart of `f`
/// lists x_1..x_n then y_1..y_n.
FockOperator bargmann_toeplitz(const ComplexPoly& f, double h, const FockSpacePtr& space);

template <class Scalar>
FockOperator bargmann_toeplitz(const Polynomial<Scalar>& f, double h, const FockSpacePtr& space) {
  return bargmann_toeplitz(to_complex_poly(f), h, space);
}

/// Unnormalised coherent state k_w with components w̄^α / √(h^{|α|} α!).
CVector coherent_state(const FockSpacePtr& space, const std::vector<Complex>& w, double h);

} // namespace aq

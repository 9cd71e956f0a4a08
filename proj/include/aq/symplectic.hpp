#pragma once

#include "aq/algebroid.hpp"
#include "aq/exact_linalg.hpp"
#include "aq/series.hpp"

#include <span>

namespace aq {

struct SymplecticVerdict {
  bool antisymmetric = false;
  bool closed = false;
  FrameKForm d_omega;
  bool nondegenerate = false;
  PolyFn determinant;

  bool passed() const { return antisymmetric && closed && nondegenerate; }
};

/// Closedness (dΩ = 0 exactly) and strong nondegeneracy (det Ω a nonzero constant).
SymplecticVerdict check_symplectic(const AlgebroidPresentation& A, const PolyMatrix<Rational>& omega);

/// Antisymmetric bivector on the base chart, stored as a matrix π^{ab}.
struct PoissonBivector {
  PolyMatrix<Rational> pi;
  const ChartPtr& chart() const { return pi.chart(); }
};

/// π^{ab} = Σ_{ij} ρ_{ia} (Ω⁻¹)_{ji} ρ_{jb}.
PoissonBivector induced_poisson(const AlgebroidPresentation& A, const PolyMatrix<Rational>& omega);

/// The Schouten trivector [π,π] (zero exactly iff π is Poisson).
AntisymmetricTensor schouten_jacobi(const PoissonBivector& pi);

PolyFn poisson_bracket(const PoissonBivector& pi, const PolyFn& f, const PolyFn& g);

/// True iff, at `point`, every column of the evaluated π lies in the span of the anchor images.
bool leaf_contained(const AlgebroidPresentation& A, const PoissonBivector& pi, std::span<const Rational> point);

/// Rank r+1 presentation with the central generator Z at index r and c̃_{ij}^Z = Ω_{ij}.
struct CentralExtension {
  AlgebroidPresentation algebroid;
  PolyMatrix<Rational> omega;
  std::size_t rank() const { return omega.rows(); }
  std::size_t z_index() const { return omega.rows(); }
};

CentralExtension central_extension(const AlgebroidPresentation& A, const PolyMatrix<Rational>& omega);

struct ContactVerdict {
  FrameKForm d_theta;
  FrameKForm pullback_omega;
  /// d(dθ); equals the pullback of dΩ, so it vanishes iff Ω is closed.
  FrameKForm dd_theta;
  bool differential_matches = false;
  bool closed = false;
  bool passed() const { return differential_matches && closed; }
  std::string witness() const;
};

/// θ = −Z*: checks dθ = pr*Ω and d(dθ) = 0 on the extension.
ContactVerdict contact_form_check(const CentralExtension& E);

/// Functions on the dual of the extension: η-Laurent polynomials in the base coordinates and
/// fiber coordinates xi_1..xi_r.
using FiberLinearFn = EtaLaurent<Rational>;

/// Chart of the fiber coordinates: base names followed by xi_1..xi_r.
ChartPtr fiber_chart(const CentralExtension& E);

FiberLinearFn lift_base(const CentralExtension& E, const PolyFn& f);
FiberLinearFn fiber_coordinate(const CentralExtension& E, std::size_t i);
FiberLinearFn eta(const CentralExtension& E);

/// Linear Poisson bracket on the dual of the extension.
FiberLinearFn linear_poisson_bracket(const CentralExtension& E, const FiberLinearFn& F, const FiberLinearFn& G);

/// How the constraint matrix enters the Dirac correction.
enum class DiracConvention {
  /// Σ [C⁻ᵀ]_{ij}{F,ξ_i}{ξ_j,G}: the contraction convention used for π.
  contraction,
  /// Σ [C⁻¹]_{ij}{F,ξ_i}{ξ_j,G}: the ordinary matrix inverse, which reverses the sign.
  matrix_inverse,
};

/// Dirac bracket of lifted base functions on {ξ = 0}, as an η-Laurent polynomial on the base chart.
EtaLaurent<Rational> dirac_bracket_on_S(const CentralExtension& E, const PolyFn& f, const PolyFn& g,
                                        DiracConvention convention = DiracConvention::contraction);

} // namespace aq

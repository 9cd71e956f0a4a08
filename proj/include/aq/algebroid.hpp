#pragma once

#include "aq/poly_matrix.hpp"

#include <map>
#include <string>
#include <vector>

namespace aq {

/// Fully antisymmetric k-index array of polynomials over an index range of size `range`.
/// Only strictly increasing index tuples are stored; other orderings are derived by sign.
class AntisymmetricTensor {
public:
  using Indices = std::vector<std::size_t>;

  AntisymmetricTensor(ChartPtr chart, std::size_t range, std::size_t degree)
      : chart_(std::move(chart)), range_(range), degree_(degree) {}

  const ChartPtr& chart() const { return chart_; }
  std::size_t range() const { return range_; }
  std::size_t degree() const { return degree_; }
  const std::map<Indices, PolyFn>& components() const { return comps_; }

  /// Component at an arbitrary index tuple (zero on repeats, signed on permutations).
  PolyFn operator()(const Indices& idx) const;
  /// Sets the component at `idx` and, implicitly, every permutation of it.
  void set(const Indices& idx, const PolyFn& value);

  bool is_zero() const { return comps_.empty(); }
  friend bool operator==(const AntisymmetricTensor& a, const AntisymmetricTensor& b) {
    return a.range_ == b.range_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
  }
  friend AntisymmetricTensor operator-(const AntisymmetricTensor& a, const AntisymmetricTensor& b);

  /// First nonzero component, rendered as "[i,j,...] = expr" with 1-based indices.
  std::string first_nonzero() const;

private:
  // Sorts idx in place; returns +1/-1 for the permutation parity or 0 on a repeat.
  int canonicalize(Indices& idx) const;

  ChartPtr chart_;
  std::size_t range_;
  std::size_t degree_;
  std::map<Indices, PolyFn> comps_;
};

using FrameKForm = AntisymmetricTensor;

/// A Lie algebroid over a single chart: anchor rows ρ(e_i) and structure functions c_{ij}^k.
/// Construction only checks shapes; the algebroid axioms are verified by check_axioms.
class AlgebroidPresentation {
public:
  AlgebroidPresentation(ChartPtr chart, std::size_t rank, PolyMatrix<Rational> anchor,
                        std::vector<PolyFn> structure);

  /// Presentation with zero structure functions.
  static AlgebroidPresentation abelian(PolyMatrix<Rational> anchor);

  const ChartPtr& chart() const { return chart_; }
  std::size_t rank() const { return rank_; }
  std::size_t base_dim() const { return chart_->dim(); }
  const PolyMatrix<Rational>& anchor() const { return anchor_; }

  const PolyFn& structure(std::size_t i, std::size_t j, std::size_t k) const {
    return structure_.at((i * rank_ + j) * rank_ + k);
  }
  void set_structure(std::size_t i, std::size_t j, std::size_t k, PolyFn value);

  /// ρ(e_i)(p) = Σ_a ρ_{ia} ∂_a p.
  PolyFn apply_anchor(std::size_t i, const PolyFn& p) const;

  friend bool operator==(const AlgebroidPresentation& a, const AlgebroidPresentation& b) {
    return same_chart(a.chart_, b.chart_) && a.rank_ == b.rank_ && a.anchor_ == b.anchor_ &&
           a.structure_ == b.structure_;
  }

private:
  ChartPtr chart_;
  std::size_t rank_;
  PolyMatrix<Rational> anchor_;
  std::vector<PolyFn> structure_;
};

/// Coefficients of a section over the frame e_1..e_r.
using Section = std::vector<PolyFn>;

Section frame_section(const AlgebroidPresentation& A, std::size_t i);
Section zero_section(const AlgebroidPresentation& A);

PolyFn apply_section(const AlgebroidPresentation& A, const Section& X, const PolyFn& p);

Section bracket_sections(const AlgebroidPresentation& A, const Section& X, const Section& Y);

struct AxiomCheck {
  std::string name;
  bool passed = true;
  std::string witness;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool passed() const;
  const AxiomCheck& check(const std::string& name) const;
};

/// Antisymmetry, anchor morphism and Jacobi identity, each with a witness on failure.
AxiomReport check_axioms(const AlgebroidPresentation& A);

/// Chevalley-Eilenberg differential with anchor. Degrees k with k + 1 > rank give the
/// (component-free) zero form; k > rank is rejected.
FrameKForm ce_differential(const AlgebroidPresentation& A, const FrameKForm& alpha);

/// The frame 2-form with components Ω_{ij} (Ω must be antisymmetric).
FrameKForm two_form(const PolyMatrix<Rational>& omega);

} // namespace aq

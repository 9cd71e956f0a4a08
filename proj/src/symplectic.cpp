#include "aq/symplectic.hpp"

namespace aq {

SymplecticVerdict check_symplectic(const AlgebroidPresentation& A, const PolyMatrix<Rational>& omega) {
  if (omega.rows() != A.rank() || omega.cols() != A.rank())
    throw ChartMismatch("check_symplectic: omega must be rank x rank");
  require_same_chart(A.chart(), omega.chart(), "check_symplectic");
  SymplecticVerdict v{false, false, FrameKForm(A.chart(), A.rank(), 3), false, PolyFn(A.chart())};
  v.antisymmetric = omega.is_antisymmetric();
  if (!v.antisymmetric) return v;
  v.d_omega = ce_differential(A, two_form(omega));
  v.closed = v.d_omega.is_zero();
  v.determinant = omega.determinant();
  v.nondegenerate = !v.determinant.is_zero() && v.determinant.is_constant();
  return v;
}

PoissonBivector induced_poisson(const AlgebroidPresentation& A, const PolyMatrix<Rational>& omega) {
  if (omega.rows() != A.rank() || !omega.is_antisymmetric())
    throw PreconditionError("induced_poisson: omega must be an antisymmetric rank x rank matrix");
  const PolyMatrix<Rational> frame_pi = omega.inverse().transpose();
  return PoissonBivector{A.anchor().transpose() * frame_pi * A.anchor()};
}

AntisymmetricTensor schouten_jacobi(const PoissonBivector& P) {
  const PolyMatrix<Rational>& pi = P.pi;
  const std::size_t m = pi.rows();
  AntisymmetricTensor out(P.chart(), m, 3);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c) {
        PolyFn s(P.chart());
        for (std::size_t d = 0; d < m; ++d) {
          if (!pi(d, a).is_zero()) s += pi(d, a) * derive(pi(b, c), d);
          if (!pi(d, b).is_zero()) s += pi(d, b) * derive(pi(c, a), d);
          if (!pi(d, c).is_zero()) s += pi(d, c) * derive(pi(a, b), d);
        }
        out.set({a, b, c}, s);
      }
  return out;
}

PolyFn poisson_bracket(const PoissonBivector& P, const PolyFn& f, const PolyFn& g) {
  require_same_chart(P.chart(), f.chart(), "poisson_bracket");
  require_same_chart(P.chart(), g.chart(), "poisson_bracket");
  const std::size_t m = P.pi.rows();
  std::vector<PolyFn> df, dg;
  for (std::size_t a = 0; a < m; ++a) {
    df.push_back(derive(f, a));
    dg.push_back(derive(g, a));
  }
  PolyFn r(P.chart());
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (!P.pi(a, b).is_zero() && !df[a].is_zero() && !dg[b].is_zero()) r += P.pi(a, b) * df[a] * dg[b];
  return r;
}

bool leaf_contained(const AlgebroidPresentation& A, const PoissonBivector& P, std::span<const Rational> point) {
  const std::size_t m = A.base_dim();
  const std::size_t r = A.rank();
  RatMatrix anchor_cols(m, r);
  RatMatrix joined(m, r + m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < r; ++i) anchor_cols(a, i) = joined(a, i) = A.anchor()(i, a).evaluate(point);
    for (std::size_t b = 0; b < m; ++b) joined(a, r + b) = P.pi(a, b).evaluate(point);
  }
  return exact_rank(joined) == exact_rank(anchor_cols);
}

CentralExtension central_extension(const AlgebroidPresentation& A, const PolyMatrix<Rational>& omega) {
  const std::size_t r = A.rank();
  if (omega.rows() != r || !omega.is_antisymmetric())
    throw PreconditionError("central_extension: omega must be an antisymmetric rank x rank matrix");
  PolyMatrix<Rational> anchor(A.chart(), r + 1, A.base_dim());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t a = 0; a < A.base_dim(); ++a) anchor(i, a) = A.anchor()(i, a);
  AlgebroidPresentation ext = AlgebroidPresentation::abelian(anchor);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t k = 0; k < r; ++k) ext.set_structure(i, j, k, A.structure(i, j, k));
      ext.set_structure(i, j, r, omega(i, j));
    }
  return CentralExtension{std::move(ext), omega};
}

std::string ContactVerdict::witness() const {
  if (!differential_matches) return "d(theta) - pr*omega " + (d_theta - pullback_omega).first_nonzero();
  if (!closed) return "d(d(theta)) " + dd_theta.first_nonzero();
  return "";
}

ContactVerdict contact_form_check(const CentralExtension& E) {
  const AlgebroidPresentation& B = E.algebroid;
  const std::size_t z = E.z_index();
  FrameKForm theta(B.chart(), B.rank(), 1);
  theta.set({z}, PolyFn::constant(B.chart(), Rational(-1)));
  FrameKForm pullback(B.chart(), B.rank(), 2);
  for (std::size_t i = 0; i < E.rank(); ++i)
    for (std::size_t j = i + 1; j < E.rank(); ++j) pullback.set({i, j}, E.omega(i, j));

  ContactVerdict v{ce_differential(B, theta), pullback, FrameKForm(B.chart(), B.rank(), 3)};
  v.dd_theta = ce_differential(B, v.d_theta);
  v.differential_matches = v.d_theta == v.pullback_omega;
  v.closed = v.dd_theta.is_zero();
  return v;
}

ChartPtr fiber_chart(const CentralExtension& E) {
  std::vector<std::string> names = E.algebroid.chart()->names();
  for (std::size_t i = 0; i < E.rank(); ++i) {
    const std::string xi = "xi_" + std::to_string(i + 1);
    if (E.algebroid.chart()->index_of(xi))
      throw PreconditionError("fiber chart: base coordinate `" + xi + "` clashes with a fiber coordinate");
    names.push_back(xi);
  }
  return make_chart(std::move(names));
}

namespace {

std::vector<std::size_t> base_axes(const CentralExtension& E) {
  std::vector<std::size_t> axes(E.algebroid.base_dim());
  for (std::size_t a = 0; a < axes.size(); ++a) axes[a] = a;
  return axes;
}

PolyFn embed_base(const CentralExtension& E, const ChartPtr& fc, const PolyFn& p) {
  const auto axes = base_axes(E);
  return embed(p, fc, std::span<const std::size_t>(axes));
}

FiberLinearFn derive_laurent(const FiberLinearFn& F, std::size_t axis) {
  return F.map(F.chart(), [axis](const PolyFn& p) { return derive(p, axis); });
}

// Restriction to ξ = 0, expressed on the base chart.
EtaLaurent<Rational> restrict_to_zero_section(const CentralExtension& E, const FiberLinearFn& F) {
  const ChartPtr& base = E.algebroid.chart();
  const std::size_t m = base->dim();
  return F.map(base, [&](const PolyFn& p) {
    PolyFn r(base);
    for (const auto& [e, c] : p.terms()) {
      bool on_zero_section = true;
      for (std::size_t k = m; k < e.size(); ++k) on_zero_section = on_zero_section && e[k] == 0;
      if (on_zero_section) r.add_term(Exponent(e.begin(), e.begin() + static_cast<long>(m)), c);
    }
    return r;
  });
}

} // namespace

FiberLinearFn lift_base(const CentralExtension& E, const PolyFn& f) {
  require_same_chart(E.algebroid.chart(), f.chart(), "lift_base");
  const ChartPtr fc = fiber_chart(E);
  return FiberLinearFn(0, embed_base(E, fc, f));
}

FiberLinearFn fiber_coordinate(const CentralExtension& E, std::size_t i) {
  if (i >= E.rank()) throw PreconditionError("fiber_coordinate: index out of range");
  const ChartPtr fc = fiber_chart(E);
  return FiberLinearFn(0, PolyFn::variable(fc, E.algebroid.base_dim() + i));
}

FiberLinearFn eta(const CentralExtension& E) {
  const ChartPtr fc = fiber_chart(E);
  return FiberLinearFn(1, PolyFn::constant(fc, Rational(1)));
}

FiberLinearFn linear_poisson_bracket(const CentralExtension& E, const FiberLinearFn& F, const FiberLinearFn& G) {
  const ChartPtr fc = fiber_chart(E);
  require_same_chart(fc, F.chart(), "linear_poisson_bracket");
  require_same_chart(fc, G.chart(), "linear_poisson_bracket");
  const AlgebroidPresentation& B = E.algebroid;
  const std::size_t m = B.base_dim();
  const std::size_t r = E.rank();
  const std::size_t z = E.z_index();

  std::vector<FiberLinearFn> dF_xi, dG_xi, dF_x, dG_x;
  for (std::size_t i = 0; i < r; ++i) {
    dF_xi.push_back(derive_laurent(F, m + i));
    dG_xi.push_back(derive_laurent(G, m + i));
  }
  for (std::size_t a = 0; a < m; ++a) {
    dF_x.push_back(derive_laurent(F, a));
    dG_x.push_back(derive_laurent(G, a));
  }

  FiberLinearFn out(fc);
  for (std::size_t i = 0; i < r; ++i) {
    if (dF_xi[i].is_zero() && dG_xi[i].is_zero()) continue;
    for (std::size_t j = 0; j < r; ++j) {
      if (dF_xi[i].is_zero() || dG_xi[j].is_zero()) continue;
      FiberLinearFn bracket(fc);
      for (std::size_t k = 0; k < r; ++k) {
        const PolyFn& c = B.structure(i, j, k);
        if (!c.is_zero()) bracket.add(0, embed_base(E, fc, c) * PolyFn::variable(fc, m + k));
      }
      if (!B.structure(i, j, z).is_zero()) bracket.add(1, embed_base(E, fc, B.structure(i, j, z)));
      out += dF_xi[i] * dG_xi[j] * bracket;
    }
    for (std::size_t a = 0; a < m; ++a) {
      const PolyFn& rho = B.anchor()(i, a);
      if (rho.is_zero()) continue;
      const FiberLinearFn anchor_term(0, embed_base(E, fc, rho));
      out += anchor_term * (dF_xi[i] * dG_x[a] - dF_x[a] * dG_xi[i]);
    }
  }
  return out;
}

EtaLaurent<Rational> dirac_bracket_on_S(const CentralExtension& E, const PolyFn& f, const PolyFn& g,
                                        DiracConvention convention) {
  const std::size_t r = E.rank();
  const FiberLinearFn F = lift_base(E, f);
  const FiberLinearFn G = lift_base(E, g);
  std::vector<FiberLinearFn> xi;
  for (std::size_t i = 0; i < r; ++i) xi.push_back(fiber_coordinate(E, i));

  // C_{ij} = {ξ_i, ξ_j} on 𝒮 must be η times a constant invertible matrix.
  RatMatrix M(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const auto c = restrict_to_zero_section(E, linear_poisson_bracket(E, xi[i], xi[j]));
      for (const auto& [k, p] : c.terms())
        if (k != 1 || !p.is_constant())
          throw PreconditionError("dirac_bracket_on_S: omega is not constant on the frame");
      M(i, j) = c.coeff(1).constant_term();
    }
  RatMatrix K = exact_inverse(M);
  if (convention == DiracConvention::contraction) K.transposeInPlace();

  const ChartPtr& base = E.algebroid.chart();
  EtaLaurent<Rational> result = restrict_to_zero_section(E, linear_poisson_bracket(E, F, G));
  std::vector<EtaLaurent<Rational>> left, right;
  for (std::size_t i = 0; i < r; ++i) {
    left.push_back(restrict_to_zero_section(E, linear_poisson_bracket(E, F, xi[i])));
    right.push_back(restrict_to_zero_section(E, linear_poisson_bracket(E, xi[i], G)));
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      if (K(i, j).is_zero()) continue;
      // [C⁻¹] = η⁻¹ M⁻¹
      const EtaLaurent<Rational> weight(-1, PolyFn::constant(base, K(i, j)));
      result -= weight * left[i] * right[j];
    }
  return result;
}

} // namespace aq

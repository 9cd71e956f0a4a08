#include "aq/star.hpp"

#include <Eigen/QR>

#include <cmath>
#include <map>

namespace aq {

namespace {

RatMatrix constant_matrix(const PolyMatrix<Rational>& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_constant()) throw PreconditionError("expected a constant matrix");
      r(i, j) = m(i, j).constant_term();
    }
  return r;
}

PolyMatrix<GaussRational> to_gauss(const PolyMatrix<Rational>& m) {
  PolyMatrix<GaussRational> r(m.chart(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = aq::to_gauss(m(i, j));
  return r;
}

std::string section_text(const AlgebroidPresentation& A, std::size_t i, std::size_t j) {
  std::string s;
  for (std::size_t k = 0; k < A.rank(); ++k) {
    const PolyFn& c = A.structure(i, j, k);
    if (c.is_zero()) continue;
    const std::string e = "e_" + std::to_string(k + 1);
    const std::string term = c == PolyFn::constant(A.chart(), Rational(1)) ? e : "(" + to_string(c) + ")*" + e;
    s += s.empty() ? term : " + " + term;
  }
  return s.empty() ? "0" : s;
}

} // namespace

GaussMatrix wick_tensor(const RatMatrix& omega, const RatMatrix& J) {
  const Eigen::Index r = omega.rows();
  if (omega.cols() != r || J.rows() != r || J.cols() != r) throw ChartMismatch("wick_tensor: shapes differ");
  if (omega != -omega.transpose()) throw PreconditionError("wick_tensor: omega is not antisymmetric");
  if (J * J != -RatMatrix::Identity(r, r)) throw PreconditionError("wick_tensor: J fails check `J^2 = -I`");
  if (J.transpose() * omega * J != omega)
    throw PreconditionError("wick_tensor: J fails check `omega(J.,J.) = omega`");
  const RatMatrix g = J.transpose() * omega;
  if (!is_positive_definite(g)) throw PreconditionError("wick_tensor: J fails check `omega(J.,.) positive definite`");
  const RatMatrix G = exact_inverse(g);
  const RatMatrix Pi = exact_inverse(omega).transpose();
  GaussMatrix L(static_cast<std::size_t>(r), std::vector<GaussRational>(static_cast<std::size_t>(r)));
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = GaussRational(-G(i, j) / 2, -Pi(i, j) / 2);
  return L;
}

FlatFrameConfig::FlatFrameConfig(AlgebroidPresentation A, PolyMatrix<Rational> omega, PolyMatrix<GaussRational> lambda)
    : A_(std::move(A)), omega_(std::move(omega)), lambda_(std::move(lambda)), anchor_gauss_(to_gauss(A_.anchor())) {
  if (omega_.rows() != A_.rank() || lambda_.rows() != A_.rank() || lambda_.cols() != A_.rank())
    throw ChartMismatch("flat frame: omega and lambda must be rank x rank");
}

FlatFrameConfig FlatFrameConfig::unchecked(AlgebroidPresentation A, PolyMatrix<Rational> omega,
                                           PolyMatrix<GaussRational> lambda) {
  return FlatFrameConfig(std::move(A), std::move(omega), std::move(lambda));
}

FlatFrameConfig FlatFrameConfig::make(AlgebroidPresentation A, PolyMatrix<Rational> omega, const GaussMatrix& lambda) {
  const std::size_t r = A.rank();
  const std::size_t m = A.base_dim();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      std::string field;
      for (std::size_t a = 0; a < m; ++a) {
        const PolyFn comp = A.apply_anchor(i, A.anchor()(j, a)) - A.apply_anchor(j, A.anchor()(i, a));
        if (comp.is_zero()) continue;
        if (!field.empty()) field += " + ";
        field += "(" + to_string(comp) + ")*d/d" + A.chart()->name(a);
      }
      if (!field.empty())
        throw FlatFrameViolation("flat-frame violation: [e_" + std::to_string(i + 1) + ",e_" + std::to_string(j + 1) +
                                 "] = " + section_text(A, i, j) + " with anchor image " + field +
                                 "; the frame derivations do not commute");
    }
  if (!omega.is_constant()) throw FlatFrameViolation("flat-frame violation: omega is not constant in the frame");
  if (!omega.is_antisymmetric()) throw PreconditionError("flat frame: omega is not antisymmetric");
  const RatMatrix W = constant_matrix(omega);
  const RatMatrix Pi = exact_inverse(W).transpose();

  if (lambda.size() != r) throw ChartMismatch("flat frame: lambda must be rank x rank");
  RatMatrix sym(r, r);
  PolyMatrix<GaussRational> L(A.chart(), r, r);
  for (std::size_t i = 0; i < r; ++i) {
    if (lambda[i].size() != r) throw ChartMismatch("flat frame: lambda must be rank x rank");
    for (std::size_t j = 0; j < r; ++j) {
      const GaussRational anti = lambda[i][j] - lambda[j][i];
      if (!(anti == GaussRational(Rational(0), -Pi(i, j))))
        throw PreconditionError("flat frame: lambda - lambda^T differs from -i*Pi at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
      const GaussRational s = lambda[i][j] + lambda[j][i];
      if (!s.imag().is_zero()) throw PreconditionError("flat frame: lambda + lambda^T is not real");
      sym(i, j) = -s.real();
      L(i, j) = GaussPoly::constant(A.chart(), lambda[i][j]);
    }
  }
  if (!is_positive_semidefinite(sym))
    throw PreconditionError("flat frame: -(lambda + lambda^T) is not positive semidefinite");
  return FlatFrameConfig(std::move(A), std::move(omega), std::move(L));
}

GaussPoly FlatFrameConfig::derivation(std::size_t i, const GaussPoly& p) const {
  require_same_chart(chart(), p.chart(), "derivation");
  GaussPoly r(chart());
  for (std::size_t a = 0; a < A_.base_dim(); ++a) {
    const GaussPoly& rho = anchor_gauss_(i, a);
    if (!rho.is_zero()) r += rho * derive(p, a);
  }
  return r;
}

namespace {

using MultiIndex = std::vector<std::uint32_t>;

// D^α p with memoisation; α counts applications of each D_i.
class DerivativeCache {
public:
  DerivativeCache(const FlatFrameConfig& cfg, GaussPoly p) : cfg_(cfg) {
    cache_.emplace(MultiIndex(cfg.rank(), 0), std::move(p));
  }
  const GaussPoly& get(const MultiIndex& alpha) {
    if (auto it = cache_.find(alpha); it != cache_.end()) return it->second;
    MultiIndex parent = alpha;
    std::size_t i = 0;
    while (parent[i] == 0) ++i;
    parent[i] -= 1;
    GaussPoly d = cfg_.derivation(i, get(parent));
    return cache_.emplace(alpha, std::move(d)).first->second;
  }

private:
  const FlatFrameConfig& cfg_;
  std::map<MultiIndex, GaussPoly> cache_;
};

struct PairTerm {
  std::size_t i, j;
  GaussPoly weight;
};

void accumulate(std::size_t pos, std::size_t remaining, const std::vector<PairTerm>& pairs, MultiIndex& af,
                MultiIndex& ag, GaussPoly& coeff, DerivativeCache& df, DerivativeCache& dg, GaussPoly& out) {
  if (remaining == 0) {
    const GaussPoly& f = df.get(af);
    if (f.is_zero()) return;
    const GaussPoly& g = dg.get(ag);
    if (g.is_zero()) return;
    out += coeff * f * g;
    return;
  }
  if (pos == pairs.size()) return;
  // multiplicity of pairs[pos]: from `remaining` down to 0
  const PairTerm& p = pairs[pos];
  GaussPoly c = coeff;
  std::size_t taken = 0;
  for (; taken <= remaining; ++taken) {
    if (taken > 0) {
      af[p.i] += 1;
      ag[p.j] += 1;
      c = c * p.weight * GaussRational(Rational(1, static_cast<unsigned>(taken)));
      if (df.get(af).is_zero() || dg.get(ag).is_zero()) {
        ++taken;
        break;
      }
    }
    accumulate(pos + 1, remaining - taken, pairs, af, ag, c, df, dg, out);
  }
  af[p.i] -= static_cast<std::uint32_t>(taken - 1);
  ag[p.j] -= static_cast<std::uint32_t>(taken - 1);
}

} // namespace

FormalFunction star(const FlatFrameConfig& cfg, const GaussPoly& f, const GaussPoly& g, std::size_t order) {
  require_same_chart(cfg.chart(), f.chart(), "star");
  require_same_chart(cfg.chart(), g.chart(), "star");
  const std::size_t r = cfg.rank();
  std::vector<PairTerm> pairs;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (!cfg.lambda()(i, j).is_zero()) pairs.push_back({i, j, cfg.lambda()(i, j)});

  DerivativeCache df(cfg, f), dg(cfg, g);
  FormalFunction out(order, GaussPoly(cfg.chart()));
  for (std::size_t k = 0; k <= order; ++k) {
    MultiIndex af(r, 0), ag(r, 0);
    GaussPoly one = GaussPoly::constant(cfg.chart(), GaussRational(1));
    accumulate(0, k, pairs, af, ag, one, df, dg, out[k]);
  }
  return out;
}

FormalFunction star(const FlatFrameConfig& cfg, const PolyFn& f, const PolyFn& g, std::size_t order) {
  return star(cfg, to_gauss(f), to_gauss(g), order);
}

FormalFunction star(const FlatFrameConfig& cfg, const FormalFunction& F, const FormalFunction& G) {
  if (F.order() != G.order()) throw ChartMismatch("star: truncation orders differ");
  const std::size_t N = F.order();
  FormalFunction out(N, GaussPoly(cfg.chart()));
  for (std::size_t a = 0; a <= N; ++a) {
    if (F[a].is_zero()) continue;
    for (std::size_t b = 0; a + b <= N; ++b) {
      if (G[b].is_zero()) continue;
      const FormalFunction prod = star(cfg, F[a], G[b], N - a - b);
      for (std::size_t k = 0; a + b + k <= N; ++k) out[a + b + k] += prod[k];
    }
  }
  return out;
}

PolyFn random_polynomial(const ChartPtr& chart, unsigned degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> numer(-5, 5);
  std::uniform_int_distribution<int> denom(1, 3);
  std::bernoulli_distribution keep(0.5);
  PolyFn p(chart);
  const std::size_t m = chart->dim();
  Exponent e(m, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t axis, unsigned left) {
    if (axis == m) {
      if (keep(rng)) p.add_term(e, Rational(numer(rng), denom(rng)));
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[axis] = k;
      rec(axis + 1, left - k);
    }
    e[axis] = 0;
  };
  rec(0, degree);
  return p;
}

AssociativityReport check_associativity(const FlatFrameConfig& cfg, std::size_t order, std::size_t trials,
                                        unsigned degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AssociativityReport rep{trials, order, order + 1, ""};
  auto lift = [&](const PolyFn& p) {
    FormalFunction s(order, GaussPoly(cfg.chart()));
    s[0] = to_gauss(p);
    return s;
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const PolyFn f = random_polynomial(cfg.chart(), degree, rng);
    const PolyFn g = random_polynomial(cfg.chart(), degree, rng);
    const PolyFn h = random_polynomial(cfg.chart(), degree, rng);
    const FormalFunction F = lift(f), G = lift(g), H = lift(h);
    const FormalFunction defect = star(cfg, star(cfg, F, G), H) - star(cfg, F, star(cfg, G, H));
    const std::size_t v = defect.valuation();
    if (v < rep.first_nonzero_order) {
      rep.first_nonzero_order = v;
      rep.witness = "f = " + to_string(f) + ", g = " + to_string(g) + ", h = " + to_string(h) + ": order " +
                    std::to_string(v) + " defect " + to_string(defect[v]);
    }
  }
  return rep;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0 && hi > lo) || count < 2) throw PreconditionError("geometric_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(count - 1));
  for (std::size_t k = 0; k < count; ++k) g[k] = lo * std::pow(ratio, static_cast<double>(k));
  return g;
}

std::vector<std::vector<Complex>> default_base_points(std::size_t modes) {
  const double ticks[] = {-0.4, -0.2, 0.0, 0.2, 0.4};
  std::vector<std::vector<Complex>> pts;
  if (modes == 1) {
    for (double x : ticks)
      for (double y : ticks) pts.push_back({Complex(x, y)});
    return pts;
  }
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const std::size_t count = 40 * modes * modes;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Complex> w(modes);
    for (auto& c : w) c = Complex(u(rng), u(rng));
    pts.push_back(w);
  }
  return pts;
}

namespace {

// Neville's scheme at x = 0; returns (value, |last − previous|).
std::pair<Complex, double> extrapolate_to_zero(const std::vector<double>& xs, const std::vector<Complex>& ys) {
  std::vector<Complex> p = ys;
  const std::size_t n = xs.size();
  Complex previous = p[n - 1];
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double xi = xs[i], xj = xs[i + level];
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
    if (level == n - 2) previous = p[0];
  }
  if (n == 1) return {p[0], 0.0};
  return {p[0], std::abs(p[0] - previous)};
}

std::vector<Exponent> monomials_up_to(std::size_t vars, unsigned degree) {
  std::vector<Exponent> out;
  Exponent e(vars, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t axis, unsigned left) {
    if (axis == vars) {
      out.push_back(e);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[axis] = k;
      rec(axis + 1, left - k);
    }
    e[axis] = 0;
  };
  rec(0, degree);
  return out;
}

Complex berezin(const FockOperator& T, const CVector& k) { return k.dot(T.matrix() * k) / k.squaredNorm(); }

} // namespace

SymbolEstimate total_symbol_extract(const std::function<FockOperator(double)>& family,
                                    const std::vector<double>& hbar_grid,
                                    const std::vector<std::vector<Complex>>& points, std::size_t order,
                                    const ChartPtr& chart, const ExtractOptions& opts) {
  if (hbar_grid.size() < 2) throw PreconditionError("total_symbol_extract: need at least two hbar values");
  if (points.empty()) throw PreconditionError("total_symbol_extract: need base points");
  std::vector<FockOperator> R;
  for (double hb : hbar_grid) R.push_back(family(hb));
  const FockSpacePtr& space = R.front().space();
  const std::size_t n = space->modes();
  if (chart->dim() != 2 * n) throw ChartMismatch("total_symbol_extract: chart must have 2n coordinates");

  const auto monos = monomials_up_to(2 * n, opts.degree_bound);
  if (points.size() < monos.size()) throw PreconditionError("total_symbol_extract: too few base points for the degree bound");
  CMatrix design(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(monos.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> xy(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      xy[j] = points[p][j].real();
      xy[n + j] = points[p][j].imag();
    }
    for (std::size_t c = 0; c < monos.size(); ++c) {
      double v = 1;
      for (std::size_t a = 0; a < 2 * n; ++a) v *= std::pow(xy[a], static_cast<int>(monos[c][a]));
      design(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) = v;
    }
  }
  const Eigen::ColPivHouseholderQR<CMatrix> solver(design);

  // coherent states per (ħ, point)
  std::vector<std::vector<CVector>> states(hbar_grid.size());
  for (std::size_t h = 0; h < hbar_grid.size(); ++h)
    for (const auto& w : points) states[h].push_back(coherent_state(space, w, bargmann_h(hbar_grid[h])));

  SymbolEstimate est;
  for (std::size_t k = 0; k <= order; ++k) {
    CVector limits(static_cast<Eigen::Index>(points.size()));
    double err = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
      std::vector<Complex> ys;
      for (std::size_t h = 0; h < hbar_grid.size(); ++h) ys.push_back(berezin(R[h], states[h][p]));
      const auto [value, e] = extrapolate_to_zero(hbar_grid, ys);
      limits(static_cast<Eigen::Index>(p)) = value;
      err = std::max(err, e);
    }
    const CVector coeffs = solver.solve(limits);
    err = std::max(err, (design * coeffs - limits).cwiseAbs().maxCoeff());
    ComplexPoly fk(chart);
    for (std::size_t c = 0; c < monos.size(); ++c) {
      const Complex v = coeffs(static_cast<Eigen::Index>(c));
      fk.add_term(monos[c], Complex(std::abs(v.real()) < opts.chop ? 0.0 : v.real(), std::abs(v.imag()) < opts.chop ? 0.0 : v.imag()));
    }
    if (err > opts.threshold)
      throw NonConvergence("total_symbol_extract: order " + std::to_string(k) + " extrapolation error " +
                           std::to_string(err) + " above threshold");
    est.coefficients.push_back(fk);
    est.errors.push_back(err);
    if (k == order) break;
    for (std::size_t h = 0; h < hbar_grid.size(); ++h) {
      const double hb = hbar_grid[h];
      R[h] = (R[h] - bargmann_toeplitz(fk, bargmann_h(hb), space)) * Complex(1 / hb, 0);
    }
  }
  return est;
}

OracleReport oracle_compare(const FlatFrameConfig& cfg, const GaussPoly& f, const GaussPoly& g, std::size_t order,
                            const std::vector<double>& hbar_grid, const OracleOptions& opts) {
  const AlgebroidPresentation& A = cfg.algebroid();
  const std::size_t d = A.rank();
  if (d % 2 != 0 || A.base_dim() != d || !(A.anchor() == PolyMatrix<Rational>::identity(A.chart(), d)))
    throw PreconditionError("oracle_compare: the oracle needs the standard frame of R^{2n}");
  PolyMatrix<Rational> standard(A.chart(), d, d);
  for (std::size_t j = 0; j < d / 2; ++j) {
    standard(j, d / 2 + j) = PolyFn::constant(A.chart(), Rational(1));
    standard(d / 2 + j, j) = PolyFn::constant(A.chart(), Rational(-1));
  }
  if (!(cfg.omega() == standard)) throw PreconditionError("oracle_compare: omega must be the standard form");
  if (opts.buffer >= opts.cutoff) throw PreconditionError("oracle_compare: buffer must be below the cutoff");

  const FockSpacePtr space = make_fock_space(d / 2, opts.cutoff);
  const FormalFunction s = star(cfg, f, g, order);
  const std::size_t keep = opts.cutoff - opts.buffer;

  OracleReport rep;
  rep.order = order;
  rep.hbar = hbar_grid;
  std::vector<double> xs, ys;
  bool all_floor = true;
  for (double hb : hbar_grid) {
    const double h = bargmann_h(hb);
    const FockOperator product = bargmann_toeplitz(f, h, space) * bargmann_toeplitz(g, h, space);
    FockOperator series = FockOperator::zero(space);
    double power = 1;
    for (std::size_t k = 0; k <= order; ++k) {
      if (!s[k].is_zero()) series = series + bargmann_toeplitz(s[k], h, space) * Complex(power, 0);
      power *= hb;
    }
    const double R = (product - series).restricted_norm(keep);
    const double scale = product.restricted_norm(keep);
    rep.residual.push_back(R);
    rep.scale.push_back(scale);
    if (R > opts.floor * std::max(scale, 1.0)) {
      all_floor = false;
      xs.push_back(std::log(hb));
      ys.push_back(std::log(R));
    }
  }
  rep.degenerate = all_floor;
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      mx += xs[k];
      my += ys[k];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    rep.slope = sxy / sxx;
  }
  return rep;
}

} // namespace aq

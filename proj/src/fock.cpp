#include "aq/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

namespace aq {

CompatibleStructure compatible_J(const Matrix<double>& omega, const Matrix<double>& g0) {
  const Eigen::Index d = omega.rows();
  if (omega.cols() != d || d % 2 != 0) throw PreconditionError("compatible_J: omega must be square of even size");
  if (g0.rows() != d || g0.cols() != d) throw ChartMismatch("compatible_J: seed metric shape differs from omega");
  if ((omega + omega.transpose()).cwiseAbs().maxCoeff() > 1e-14)
    throw PreconditionError("compatible_J: omega is not antisymmetric");

  Eigen::JacobiSVD<Matrix<double>> svd(omega);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0 || sv(d - 1) < 1e-10 * sv(0))
    throw PreconditionError("compatible_J: degenerate fiber, omega is numerically singular");

  if ((g0 - g0.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw PreconditionError("compatible_J: seed metric is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix<double>> seed(g0);
  if (seed.eigenvalues().minCoeff() <= 0) throw PreconditionError("compatible_J: seed metric is not positive definite");
  const Matrix<double> root = seed.operatorSqrt();
  const Matrix<double> inv_root = seed.operatorInverseSqrt();

  // In g0-orthonormal coordinates A becomes antisymmetric and −A² symmetric positive.
  const Matrix<double> A = -inv_root * omega * inv_root;
  const Matrix<double> minus_A2 = -(A * A);
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(0.5 * (minus_A2 + minus_A2.transpose()));
  const Matrix<double> J_sym = -A * es.operatorInverseSqrt();

  CompatibleStructure C;
  C.J = inv_root * J_sym * root;
  C.g = C.J.transpose() * omega;
  C.g = (0.5 * (C.g + C.g.transpose())).eval();
  C.condition_number = sv(0) / sv(d - 1);
  if (auto failure = compatibility_failure(omega, C.J))
    throw NonConvergence("compatible_J: result fails `" + *failure + "`");

  const Eigen::Index n = d / 2;
  std::vector<Vector<double>> frame;  // g-orthonormal, closed under J
  C.darboux = Matrix<double>(d, d);
  Eigen::Index made = 0;
  for (Eigen::Index k = 0; k < d && made < n; ++k) {
    Vector<double> w = Vector<double>::Unit(d, k);
    for (const auto& f : frame) w -= f * f.dot(C.g * w);
    const double len = std::sqrt(w.dot(C.g * w));
    if (len < 1e-8) continue;
    const Vector<double> q = w / len;
    const Vector<double> p = -C.J * q;
    frame.push_back(q);
    frame.push_back(C.J * q);
    C.darboux.col(made) = q;
    C.darboux.col(n + made) = p;
    ++made;
  }
  return C;
}

FockSpace::FockSpace(std::size_t modes, std::size_t cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes == 0) throw PreconditionError("FockSpace: need at least one mode");
  for (std::size_t level = 0; level <= cutoff; ++level) {
    std::vector<std::vector<std::size_t>> block;
    std::vector<std::size_t> occ(modes, 0);
    // all compositions of `level` into `modes` parts
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t mode, std::size_t left) {
      if (mode + 1 == modes) {
        occ[mode] = left;
        block.push_back(occ);
        return;
      }
      for (std::size_t k = 0; k <= left; ++k) {
        occ[mode] = k;
        rec(mode + 1, left - k);
      }
    };
    rec(0, level);
    std::sort(block.begin(), block.end());
    for (auto& b : block) {
      basis_.push_back(std::move(b));
      levels_.push_back(level);
    }
  }
}

std::optional<std::size_t> FockSpace::index_of(const std::vector<std::size_t>& occupation) const {
  if (occupation.size() != modes_) return std::nullopt;
  std::size_t level = 0;
  for (auto k : occupation) level += k;
  if (level > cutoff_) return std::nullopt;
  const std::size_t begin = level == 0 ? 0 : count_up_to(level - 1);
  const std::size_t end = count_up_to(level);
  auto first = basis_.begin() + static_cast<long>(begin);
  auto last = basis_.begin() + static_cast<long>(end);
  auto it = std::lower_bound(first, last, occupation);
  if (it == last || *it != occupation) return std::nullopt;
  return static_cast<std::size_t>(it - basis_.begin());
}

std::size_t FockSpace::count_up_to(std::size_t max_level) const {
  return static_cast<std::size_t>(std::upper_bound(levels_.begin(), levels_.end(), max_level) - levels_.begin());
}

FockOperator::FockOperator(FockSpacePtr space, CMatrix m) : space_(std::move(space)), m_(std::move(m)) {
  const auto d = static_cast<Eigen::Index>(space_->dim());
  if (m_.rows() != d || m_.cols() != d) throw ChartMismatch("FockOperator: matrix size differs from space");
}

FockOperator FockOperator::zero(FockSpacePtr space) {
  const auto d = static_cast<Eigen::Index>(space->dim());
  return {std::move(space), CMatrix::Zero(d, d)};
}

FockOperator FockOperator::identity(FockSpacePtr space) {
  const auto d = static_cast<Eigen::Index>(space->dim());
  return {std::move(space), CMatrix::Identity(d, d)};
}

void FockOperator::require_same_space(const FockOperator& o, const char* what) const {
  if (space_ != o.space_ && (space_->modes() != o.space_->modes() || space_->cutoff() != o.space_->cutoff()))
    throw ChartMismatch(std::string(what) + ": operators act on different Fock spaces");
}

FockOperator FockOperator::operator*(const FockOperator& o) const {
  require_same_space(o, "operator *");
  return {space_, m_ * o.m_};
}
FockOperator FockOperator::operator+(const FockOperator& o) const {
  require_same_space(o, "operator +");
  return {space_, m_ + o.m_};
}
FockOperator FockOperator::operator-(const FockOperator& o) const {
  require_same_space(o, "operator -");
  return {space_, m_ - o.m_};
}

CMatrix FockOperator::restricted(std::size_t max_level) const {
  const auto k = static_cast<Eigen::Index>(space_->count_up_to(max_level));
  return m_.topLeftCorner(k, k);
}

double FockOperator::restricted_norm(std::size_t max_level) const { return spectral_norm(restricted(max_level)); }

void FockOperator::write_binary(std::ostream& os) const {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const double pair[2] = {m_(i, j).real(), m_(i, j).imag()};
      os.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
}

void FockOperator::write_text(std::ostream& os) const {
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (j) os << ' ';
      os << m_(i, j).real() << ' ' << m_(i, j).imag();
    }
    os << '\n';
  }
  os.precision(old);
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

FockOperator annihilation(const FockSpacePtr& space, std::size_t mode) {
  if (mode >= space->modes()) throw PreconditionError("annihilation: mode out of range");
  FockOperator a = FockOperator::zero(space);
  CMatrix m = a.matrix();
  for (std::size_t col = 0; col < space->dim(); ++col) {
    auto occ = space->basis()[col];
    if (occ[mode] == 0) continue;
    const double amp = std::sqrt(static_cast<double>(occ[mode]));
    occ[mode] -= 1;
    m(static_cast<Eigen::Index>(*space->index_of(occ)), static_cast<Eigen::Index>(col)) = amp;
  }
  return {space, std::move(m)};
}

FockOperator creation(const FockSpacePtr& space, std::size_t mode) { return annihilation(space, mode).adjoint(); }

FockOperator Representation::generator(const Vector<double>& xi, double t) const {
  const auto d = structure.darboux.rows();
  if (xi.size() != d) throw ChartMismatch("representation: element dimension differs from fiber");
  const Vector<double> coords = structure.darboux.partialPivLu().solve(xi);
  CMatrix m = central.matrix() * t;
  for (Eigen::Index k = 0; k < d; ++k) m += darboux_generators[static_cast<std::size_t>(k)].matrix() * coords(k);
  return {space, std::move(m)};
}

FockOperator Representation::group_element(const Vector<double>& xi, double t) const {
  // the generator is skew-Hermitian, so exponentiate through the spectrum of -i X
  const CMatrix H = generator(xi, t).matrix() * Complex(0, -1);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(H);
  const Eigen::VectorXcd phases = (eig.eigenvalues().cast<Complex>() * Complex(0, 1)).array().exp();
  return {space, eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint()};
}

Representation build_representation(const FockSpacePtr& space, const CompatibleStructure& C, double lambda) {
  if (!(lambda > 0)) throw PreconditionError("build_representation: lambda must be positive");
  const std::size_t n = space->modes();
  if (static_cast<std::size_t>(C.darboux.rows()) != 2 * n)
    throw ChartMismatch("build_representation: fiber dimension is not twice the number of modes");
  const double s = std::sqrt(lambda / 2);
  const Complex i(0, 1);
  std::vector<FockOperator> gens(2 * n, FockOperator::zero(space));
  for (std::size_t j = 0; j < n; ++j) {
    const FockOperator a = annihilation(space, j);
    const FockOperator ad = a.adjoint();
    gens[j] = (a - ad) * Complex(s, 0);
    gens[n + j] = (a + ad) * (i * s);
  }
  return Representation{space, C, lambda, std::move(gens), FockOperator::identity(space) * (i * lambda)};
}

FockOperator vacuum_projector(const FockSpacePtr& space) {
  FockOperator p = FockOperator::zero(space);
  CMatrix m = p.matrix();
  m(0, 0) = 1;
  return {space, std::move(m)};
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(std::size_t order) {
  if (order == 0) throw PreconditionError("gauss_hermite: order must be positive");
  const auto m = static_cast<Eigen::Index>(order);
  Matrix<double> T = Matrix<double>::Zero(m, m);
  for (Eigen::Index k = 1; k < m; ++k) T(k, k - 1) = T(k - 1, k) = std::sqrt(static_cast<double>(k) / 2);
  Eigen::SelfAdjointEigenSolver<Matrix<double>> es(T);
  std::vector<double> nodes(order), weights(order);
  for (Eigen::Index k = 0; k < m; ++k) {
    nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    weights[static_cast<std::size_t>(k)] = std::sqrt(std::numbers::pi) * v0 * v0;
  }
  return {nodes, weights};
}

namespace {

// c_norm ∫ û(x) π(x) dx after x = L y with L Lᵀ = (4/λ) Q; the Gaussian prefactors cancel to (4π)^n.
// Integrates exp(-|y|^2) pi(exp(Ly)) dy. Matrix elements of pi(exp(Ly)) carry the coherent-state envelope
// exp(-y^T M y) times a polynomial, so the nodes are rescaled by S = (I + M)^{-1/2} to make the Hermite
// weight cover the whole Gaussian and leave a polynomial integrand.
CMatrix gaussian_quadrature(const Representation& rep, const Matrix<double>& L, std::size_t order, double c_norm) {
  const auto d = L.rows();
  const Matrix<double> Binv_L = rep.structure.darboux.partialPivLu().solve(L);
  const Matrix<double> M = (rep.lambda / 4) * Binv_L.transpose() * Binv_L;
  Eigen::SelfAdjointEigenSolver<Matrix<double>> eig(Matrix<double>::Identity(d, d) + M);
  const Matrix<double> S = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                           eig.eigenvectors().transpose();
  const Matrix<double> LS = L * S;
  const double jacobian = S.determinant();

  const auto [nodes, weights] = gauss_hermite(order);
  const auto dim = static_cast<Eigen::Index>(rep.space->dim());
  CMatrix acc = CMatrix::Zero(dim, dim);
  std::vector<std::size_t> counter(static_cast<std::size_t>(d), 0);
  Vector<double> u(d);
  for (;;) {
    double log_w = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const std::size_t c = counter[static_cast<std::size_t>(k)];
      u(k) = nodes[c];
      log_w += std::log(weights[c]) + nodes[c] * nodes[c];
    }
    log_w -= (S * u).squaredNorm();
    // pi(exp(.)) is unitary, so a node below this weight cannot move any entry measurably
    if (log_w > -46) acc += std::exp(log_w) * rep.group_element(LS * u, 0.0).matrix();
    std::size_t k = 0;
    while (k < counter.size() && ++counter[k] == order) counter[k++] = 0;
    if (k == counter.size()) break;
  }
  const double n = static_cast<double>(d) / 2;
  return acc * (jacobian * c_norm * std::pow(4 * std::numbers::pi, n));
}

} // namespace

Quantization quantize_symbol(const HomogeneousSymbol& u, double lambda, const FockSpacePtr& space,
                             const CompatibleStructure& C, const QuadratureSpec& spec) {
  if (!(lambda > 0)) throw PreconditionError("quantize_symbol: lambda must be positive");
  const std::size_t n = space->modes();
  const double c_norm = std::pow(2 * std::numbers::pi, -2.0 * static_cast<double>(n));
  if (u.is_zero()) return Quantization{FockOperator::zero(space), c_norm, 0.0, 0, 0.0};
  if (!u.closed_form()) throw PreconditionError("quantize_symbol: symbol has no Gaussian closed form");
  const Matrix<double>& Q = u.closed_form()->Q;
  if (static_cast<std::size_t>(Q.rows()) != 2 * n) throw ChartMismatch("quantize_symbol: symbol dimension differs");
  Eigen::LLT<Matrix<double>> llt(Q);
  if (llt.info() != Eigen::Success) throw PreconditionError("quantize_symbol: Gaussian form is not positive definite");
  const Matrix<double> L = std::sqrt(4 / lambda) * Matrix<double>(llt.matrixL());

  const FockSpacePtr padded = make_fock_space(n, space->cutoff() + spec.pad);
  const Representation rep = build_representation(padded, C, lambda);
  const auto keep = static_cast<Eigen::Index>(space->dim());

  CMatrix full = gaussian_quadrature(rep, L, spec.order, c_norm).topLeftCorner(keep, keep);
  double shift = 0;
  if (spec.check_convergence) {
    const CMatrix finer = gaussian_quadrature(rep, L, 2 * spec.order, c_norm).topLeftCorner(keep, keep);
    shift = (finer - full).cwiseAbs().maxCoeff();
    if (shift > spec.tolerance)
      throw NonConvergence("quantize_symbol: doubling the quadrature order moved an entry by " + std::to_string(shift));
  }
  const double trace = full.trace().real();
  return Quantization{FockOperator(space, std::move(full)), c_norm, trace, spec.order, shift};
}

PurifyResult purify_projector(const CMatrix& S0, const PurifyOptions& opts) {
  if (S0.rows() != S0.cols()) throw ChartMismatch("purify_projector: matrix must be square");
  const auto d = S0.rows();
  const CMatrix I = CMatrix::Identity(d, d);
  PurifyResult res;
  res.S = S0;
  CMatrix delta = res.S * res.S - res.S;
  double norm = spectral_norm(delta);
  if (!(norm < 0.25))
    throw PreconditionError("purify_projector: ||S0^2 - S0|| = " + std::to_string(norm) + " is not below 1/4");
  res.residuals.push_back(norm);
  while (norm > opts.tol) {
    if (res.iterations == opts.max_iter)
      throw NonConvergence("purify_projector: " + std::to_string(opts.max_iter) + " iterations without reaching tol");
    CMatrix next = res.S - (2 * res.S - I) * delta;
    if (opts.symmetrize) next = (0.5 * (next + next.adjoint())).eval();
    const CMatrix next_delta = next * next - next;
    const CMatrix delta2 = delta * delta;
    const CMatrix predicted = -3 * delta2 + 4 * delta2 * delta;
    const double scale = spectral_norm(next);
    res.identity_errors.push_back(spectral_norm(next_delta - predicted) / (scale * scale + scale));
    res.S = std::move(next);
    delta = next_delta;
    norm = spectral_norm(delta);
    res.residuals.push_back(norm);
    ++res.iterations;
  }
  res.fitted_order = fit_convergence_order(res.residuals);
  return res;
}

PurifyResult purify_projector(const FockOperator& S0, const PurifyOptions& opts) {
  return purify_projector(S0.matrix(), opts);
}

std::optional<double> fit_convergence_order(const std::vector<double>& residuals, double floor) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k)
    if (residuals[k + 1] > floor && residuals[k] > floor)
      pts.emplace_back(std::log(residuals[k]), std::log(residuals[k + 1]));
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

CMatrix random_near_projector(std::size_t dim, double delta0, std::uint64_t seed) {
  if (dim == 0) throw PreconditionError("random_near_projector: dimension must be positive");
  if (!(delta0 >= 0 && delta0 <= 0.25)) throw PreconditionError("random_near_projector: delta0 must lie in [0, 1/4]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::bernoulli_distribution coin;
  const auto d = static_cast<Eigen::Index>(dim);

  CMatrix G(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) G(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(G);
  CMatrix U = qr.householderQ();

  Eigen::VectorXcd eig(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    // eigenvalue e with e² − e = δ, |δ| ≤ delta0, the first one attaining it
    const double delta = k == 0 ? (coin(rng) ? delta0 : -delta0) : delta0 * uniform(rng);
    const double root = std::sqrt(1 + 4 * delta);
    eig(k) = coin(rng) ? (1 + root) / 2 : (1 - root) / 2;
  }
  return U * eig.asDiagonal() * U.adjoint();
}

namespace {

// x^a y^b = ((z + z̄)/2)^a ((z − z̄)/(2i))^b as Σ c_{pq} z^p z̄^q.
std::vector<std::tuple<std::size_t, std::size_t, Complex>> expand_xy(std::size_t a, std::size_t b) {
  std::vector<Complex> poly_x(a + 1), poly_y(b + 1);  // indexed by power of z
  auto binom = [](std::size_t n, std::size_t k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); };
  for (std::size_t k = 0; k <= a; ++k) poly_x[k] = binom(a, k) / std::pow(2.0, static_cast<double>(a));
  const Complex two_i(0, 2);
  for (std::size_t k = 0; k <= b; ++k) {
    const double sign = (b - k) % 2 == 0 ? 1.0 : -1.0;
    poly_y[k] = sign * binom(b, k) / std::pow(two_i, static_cast<double>(b));
  }
  std::vector<std::tuple<std::size_t, std::size_t, Complex>> out;
  for (std::size_t i = 0; i <= a; ++i)
    for (std::size_t j = 0; j <= b; ++j) {
      const std::size_t p = i + j;
      const std::size_t q = a + b - p;
      out.emplace_back(p, q, poly_x[i] * poly_y[j]);
    }
  return out;
}

} // namespace

FockOperator bargmann_toeplitz(const ComplexPoly& f, double h, const FockSpacePtr& space) {
  if (!(h > 0)) throw PreconditionError("bargmann_toeplitz: hbar must be positive");
  const std::size_t n = space->modes();
  if (f.dim() != 2 * n) throw ChartMismatch("bargmann_toeplitz: polynomial needs 2n variables (x_1..x_n, y_1..y_n)");
  const double log_h = std::log(h);
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(space->dim()), static_cast<Eigen::Index>(space->dim()));

  for (const auto& [e, c] : f.terms()) {
    // per-mode (p, q, coefficient) expansions; combine over modes by recursion
    std::vector<std::vector<std::tuple<std::size_t, std::size_t, Complex>>> per_mode(n);
    for (std::size_t j = 0; j < n; ++j) per_mode[j] = expand_xy(e[j], e[n + j]);
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
      Complex coeff = c;
      for (std::size_t j = 0; j < n; ++j) coeff *= std::get<2>(per_mode[j][pick[j]]);
      if (coeff != Complex(0, 0)) {
        for (std::size_t col = 0; col < space->dim(); ++col) {
          const auto& alpha = space->basis()[col];
          std::vector<std::size_t> beta(n);
          bool valid = true;
          double log_val = 0;
          for (std::size_t j = 0; j < n && valid; ++j) {
            const auto [p, q, unused] = per_mode[j][pick[j]];
            const std::size_t m_j = alpha[j] + p;
            if (m_j < q) {
              valid = false;
              break;
            }
            beta[j] = m_j - q;
            log_val += static_cast<double>(m_j) * log_h + std::lgamma(m_j + 1.0) -
                       0.5 * (static_cast<double>(alpha[j] + beta[j]) * log_h + std::lgamma(alpha[j] + 1.0) +
                              std::lgamma(beta[j] + 1.0));
          }
          if (!valid) continue;
          const auto row = space->index_of(beta);
          if (!row) continue;
          m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += coeff * std::exp(log_val);
        }
      }
      std::size_t j = 0;
      while (j < n && ++pick[j] == per_mode[j].size()) pick[j++] = 0;
      if (j == n) break;
    }
  }
  return {space, std::move(m)};
}

CVector coherent_state(const FockSpacePtr& space, const std::vector<Complex>& w, double h) {
  if (w.size() != space->modes()) throw ChartMismatch("coherent_state: point dimension differs from modes");
  CVector v(static_cast<Eigen::Index>(space->dim()));
  for (std::size_t k = 0; k < space->dim(); ++k) {
    Complex amp(1, 0);
    for (std::size_t j = 0; j < w.size(); ++j) {
      const auto a = space->basis()[k][j];
      for (std::size_t p = 0; p < a; ++p) amp *= std::conj(w[j]);
      amp /= std::sqrt(std::exp(static_cast<double>(a) * std::log(h) + std::lgamma(a + 1.0)));
    }
    v(static_cast<Eigen::Index>(k)) = amp;
  }
  return v;
}

} // namespace aq

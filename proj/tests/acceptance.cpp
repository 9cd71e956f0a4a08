// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "aq/fock.hpp"
#include "aq/parse.hpp"
#include "aq/spec_file.hpp"
#include "aq/star.hpp"
#include "aq/symplectic.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace aq;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) detail = what;
    passed = passed && ok;
  }
};

AlgebroidSpec example(const std::string& name) { return load_spec(std::string(AQ_DATA_DIR) + "/" + name); }

std::vector<std::filesystem::path> bundled() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(AQ_DATA_DIR)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

FlatFrameConfig flat(const AlgebroidSpec& s) {
  RatMatrix w(s.omega.rows(), s.omega.cols());
  for (std::size_t i = 0; i < s.omega.rows(); ++i)
    for (std::size_t j = 0; j < s.omega.cols(); ++j) w(i, j) = s.omega(i, j).constant_term();
  return FlatFrameConfig::make(s.algebroid, s.omega, wick_tensor(w, frame_complex_structure(s)));
}

Outcome induced_tensors() {
  Outcome o;
  auto timed_pi = [&](const char* file) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = example(file);
    auto P = induced_poisson(s.algebroid, s.omega);
    o.require(seconds_since(t0) < 1.0, std::string(file) + " took longer than 1 s");
    return std::pair{s, P};
  };
  auto expect = [&](const AlgebroidSpec& s, const PoissonBivector& P,
                    std::vector<std::tuple<std::size_t, std::size_t, const char*>> entries, const char* label) {
    PolyMatrix<Rational> want(s.chart, P.pi.rows(), P.pi.cols());
    for (const auto& [i, j, e] : entries) {
      want(i, j) = parse_poly(e, s.chart);
      want(j, i) = -want(i, j);
    }
    o.require(P.pi == want, std::string(label) + " tensor differs");
  };
  {
    const auto [s, P] = timed_pi("b_symplectic_n1.json");
    expect(s, P, {{0, 1, "f"}}, "b-symplectic n=1");
  }
  {
    const auto [s, P] = timed_pi("b_symplectic_n2.json");
    expect(s, P, {{0, 2, "f"}, {1, 3, "1"}}, "b-symplectic n=2");
  }
  {
    const auto [s, P] = timed_pi("zero_symplectic_n1.json");
    expect(s, P, {{0, 1, "f^2"}}, "0-symplectic n=1");
  }
  if (o.passed) o.detail = "b (n=1,2): f d_f^d_{x_{n+1}} + sum d_j^d_{n+j}; 0-symplectic: f^2 d_f^d_x2";
  return o;
}

Outcome schouten() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t certified = 0;
  std::string mutated_witness;
  for (const auto& file : bundled()) {
    const auto s = load_spec(file);
    const auto sch = schouten_jacobi(induced_poisson(s.algebroid, s.omega));
    if (file.filename() == "b_symplectic_n2_nonclosed.json") {
      o.require(!sch.is_zero(), "mutated bivector on R^4 produced no witness");
      if (!sch.is_zero()) mutated_witness = sch.first_nonzero();
    } else {
      o.require(sch.is_zero(), file.filename().string() + ": [pi,pi] != 0");
      ++certified;
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 5.0, "runtime " + std::to_string(t) + " s");
  if (o.passed)
    o.detail = std::to_string(certified) + " examples with [pi,pi] = 0; mutated R^4 witness " + mutated_witness;
  return o;
}

Outcome extension_equivalence() {
  Outcome o;
  std::size_t closed = 0, open = 0;
  for (const auto& file : bundled()) {
    const auto s = load_spec(file);
    const bool d_zero = ce_differential(s.algebroid, two_form(s.omega)).is_zero();
    const bool jacobi = check_axioms(central_extension(s.algebroid, s.omega).algebroid).check("jacobi").passed;
    o.require(d_zero == jacobi, file.filename().string() + ": Jacobi and d(omega) = 0 disagree");
    (d_zero ? closed : open) += 1;
  }
  const auto b = example("b_symplectic_n2.json");
  const auto m = example("b_symplectic_n2_nonclosed.json");
  o.require(check_axioms(central_extension(b.algebroid, b.omega).algebroid).passed(), "closed b-frame extension fails");
  o.require(!ce_differential(m.algebroid, two_form(m.omega)).is_zero(), "mutated b-frame omega is closed");
  o.require(!check_axioms(central_extension(m.algebroid, m.omega).algebroid).check("jacobi").passed,
            "mutated b-frame extension satisfies Jacobi");
  o.require(open >= 1 && closed >= 1, "both directions were not exercised");
  if (o.passed)
    o.detail = std::to_string(closed) + " closed / " + std::to_string(open) + " mutated; Jacobi <=> d(omega) = 0 on all";
  return o;
}

Outcome contact() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& file : bundled()) {
    const auto s = load_spec(file);
    const auto v = contact_form_check(central_extension(s.algebroid, s.omega));
    o.require(v.differential_matches, file.filename().string() + ": " + v.witness());
    ++n;
  }
  if (o.passed) o.detail = "d(theta) = pr*omega on " + std::to_string(n) + " extensions";
  return o;
}

Outcome dirac() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t total = 0;
  for (const char* file : {"tangent_r2.json", "b_symplectic_n1.json", "b_symplectic_n2.json"}) {
    const auto s = example(file);
    const auto E = central_extension(s.algebroid, s.omega);
    const auto P = induced_poisson(s.algebroid, s.omega);
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 50; ++k) {
      const PolyFn f = random_polynomial(s.chart, 3, rng);
      const PolyFn g = random_polynomial(s.chart, 3, rng);
      const bool ok = dirac_bracket_on_S(E, f, g) == EtaLaurent<Rational>(-1, poisson_bracket(P, f, g));
      o.require(ok, std::string(file) + ": f = " + to_string(f) + ", g = " + to_string(g));
      ++total;
    }
  }
  const double t = seconds_since(t0);
  o.require(t < 10.0, "runtime " + std::to_string(t) + " s");
  if (o.passed) o.detail = std::to_string(total) + " random pairs, exact";
  return o;
}

Outcome purification() {
  Outcome o;
  double worst_identity = 0, lo = 10, hi = 0;
  std::size_t worst_iter = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const CMatrix S0 = random_near_projector(20, 0.1, seed);
    const PurifyResult r = purify_projector(S0);
    for (double e : r.identity_errors) worst_identity = std::max(worst_identity, e);
    worst_iter = std::max(worst_iter, r.iterations);
    o.require(r.residuals.back() <= 1e-12, "seed " + std::to_string(seed) + " did not reach 1e-12");
    o.require(r.fitted_order.has_value(), "seed " + std::to_string(seed) + ": no order fit");
    if (r.fitted_order) {
      lo = std::min(lo, *r.fitted_order);
      hi = std::max(hi, *r.fitted_order);
    }
  }
  o.require(worst_identity <= 1e-12, "identity error " + sci(worst_identity));
  o.require(worst_iter <= 5, std::to_string(worst_iter) + " iterations");
  o.require(lo >= 1.9 && hi <= 2.1, "fitted order range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  if (o.passed) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << "50 seeds: identity error <= " << sci(worst_identity) << ", <= "
       << worst_iter << " iterations, order in [" << lo << ", " << hi << "]";
    o.detail = os.str();
  }
  return o;
}

Outcome star_axioms() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t pairs = 0;
  const GaussRational minus_i(Rational(0), Rational(-1));
  for (const char* file : {"tangent_r2.json", "b_symplectic_n1.json", "b_symplectic_n2.json"}) {
    const auto s = example(file);
    const auto cfg = flat(s);
    const auto P = induced_poisson(s.algebroid, s.omega);
    std::mt19937_64 rng(77);
    for (int k = 0; k < 100; ++k) {
      const PolyFn f = random_polynomial(s.chart, 4, rng);
      const PolyFn g = random_polynomial(s.chart, 4, rng);
      const auto fg = star(cfg, f, g, 1);
      const auto gf = star(cfg, g, f, 1);
      o.require(fg[0] == to_gauss(f * g), std::string(file) + ": order-0 coefficient is not fg");
      o.require((fg[0] - gf[0]).is_zero() && fg[1] - gf[1] == to_gauss(poisson_bracket(P, f, g)) * minus_i,
                std::string(file) + ": commutator differs from -i{f,g} at order 1");
      ++pairs;
    }
    const auto a = check_associativity(cfg, 6, 10, 3, 5);
    o.require(a.passed(), std::string(file) + ": associativity defect at order " +
                              std::to_string(a.first_nonzero_order) + ": " + a.witness);
  }
  const double t = seconds_since(t0);
  o.require(t < 60.0, "runtime " + std::to_string(t) + " s");
  if (o.passed) o.detail = std::to_string(pairs) + " pairs; associativity defect 0 through order 6";
  return o;
}

Outcome oracle() {
  Outcome o;
  const auto s = example("tangent_r2.json");
  const auto cfg = flat(s);
  const auto grid = geometric_grid(1.0 / 64, 0.25, 5);
  OracleOptions opts;
  opts.cutoff = 32;
  opts.buffer = 8;
  std::ostringstream summary;
  for (auto [f, g] : {std::pair{"x", "y"}, std::pair{"x^2", "y^2"}, std::pair{"x*y", "x + y"}})
    for (std::size_t N : {1u, 2u}) {
      const auto r = oracle_compare(cfg, to_gauss(parse_poly(f, s.chart)), to_gauss(parse_poly(g, s.chart)), N,
                                    grid, opts);
      const std::string tag = std::string("(") + f + ", " + g + ") N=" + std::to_string(N);
      o.require(r.passed(), tag + ": slope " + (r.slope ? std::to_string(*r.slope) : std::string("none")));
      summary << tag << ": " << (r.degenerate ? "floor" : "slope " + std::to_string(*r.slope).substr(0, 5)) << "; ";
    }
  const auto space = make_fock_space(1, 40);
  auto comm = [&](double hbar) {
    const double h = bargmann_h(hbar);
    const auto tx = bargmann_toeplitz(ComplexPoly::variable(s.chart, 0), h, space);
    const auto ty = bargmann_toeplitz(ComplexPoly::variable(s.chart, 1), h, space);
    return tx * ty - ty * tx;
  };
  const auto est = total_symbol_extract(comm, geometric_grid(1.0 / 64, 1.0 / 8, 4), default_base_points(1), 1, s.chart);
  const ComplexPoly diff = est.coefficients[1] - ComplexPoly::constant(s.chart, Complex(0, -1));
  double dev = 0;
  for (const auto& [e, c] : diff.terms()) dev = std::max(dev, std::abs(c));
  o.require(est.coefficients[0].is_zero() && dev <= 1e-4, "extracted f_1 deviates by " + sci(dev));
  if (o.passed) o.detail = summary.str() + "f_1 = -i within " + sci(dev);
  return o;
}

Outcome ground_state() {
  Outcome o;
  Matrix<double> w(2, 2);
  w << 0, 1, -1, 0;
  const auto C = compatible_J(w, Matrix<double>::Identity(2, 2));
  const OsculatingFiber<double> F(Vector<double>::Zero(1), w);
  const auto s0 = ground_state_symbol(F, C.J);
  const auto space = make_fock_space(1, 16);
  const auto Q = quantize_symbol(s0, 1.0, space, C);
  Eigen::JacobiSVD<CMatrix> svd(Q.op.matrix());
  const double ratio = svd.singularValues()(1) / svd.singularValues()(0);
  const double dist = spectral_norm(Q.op.matrix() / Q.op.matrix().trace() - vacuum_projector(space).matrix());
  o.require(ratio <= 1e-4, "sigma_2/sigma_1 = " + sci(ratio));
  o.require(dist <= 1e-4, "distance to vacuum projector " + sci(dist));

  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.1, 10.0), eta(0.05, 4.0);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    Vector<double> xi(2);
    xi << normal(rng), normal(rng);
    const double h = k % 10 == 0 ? -eta(rng) : eta(rng);
    const double lambda = scale(rng);
    worst = std::max(worst, std::abs(s0.evaluate(lambda * xi, lambda * lambda * h) - s0.evaluate(xi, h)));
  }
  o.require(worst <= 1e-12, "homogeneity defect " + sci(worst));
  if (o.passed)
    o.detail = "sigma_2/sigma_1 = " + sci(ratio) + ", vacuum distance " + sci(dist) + ", homogeneity " + sci(worst);
  return o;
}

Outcome osculating_group() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9), dim(2, 6);
  auto rational = [&] { return Rational(num(rng), den(rng)); };
  auto vec = [&](Eigen::Index d) {
    RatVector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v(k) = rational();
    return v;
  };
  auto form = [&](Eigen::Index d) {
    RatMatrix w = RatMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i + 1; j < d; ++j) {
        w(i, j) = rational();
        w(j, i) = -w(i, j);
      }
    return w;
  };
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index d = dim(rng);
    const OsculatingFiber<Rational> F(RatVector::Zero(d), form(d));
    const GroupElement<Rational> a{vec(d), rational()}, b{vec(d), rational()}, c{vec(d), rational()};
    o.require(bch_multiply(F, bch_multiply(F, a, b), c) == bch_multiply(F, a, bch_multiply(F, b, c)),
              "associativity fails at triple " + std::to_string(k));
    Rational lambda = rational();
    if (lambda <= 0) lambda = 1 - lambda;
    o.require(dilation(F, lambda, bch_multiply(F, a, b)) ==
                  bch_multiply(F, dilation(F, lambda, a), dilation(F, lambda, b)),
              "dilation is not a homomorphism at sample " + std::to_string(k));
  }
  std::size_t deficient = 0;
  for (int k = 0; k < 100; ++k) {
    // ω = Mᵀ W M with M of rank r < d forces a kernel
    const Eigen::Index d = dim(rng) + 1;
    const Eigen::Index r = std::max<Eigen::Index>(2, d - 2);
    RatMatrix M(r, d);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < d; ++j) M(i, j) = rational();
    const RatMatrix w = M.transpose() * form(r) * M;
    const OsculatingFiber<Rational> F(RatVector::Zero(d), w);
    const auto split = fiber_decompose(F);
    o.require(reconstruct_omega(split) == w, "reconstruction differs at sample " + std::to_string(k));
    o.require(split.V.cols() == static_cast<Eigen::Index>(exact_rank(w)), "symplectic block has the wrong rank");
    if (exact_rank(w) < static_cast<std::size_t>(d)) ++deficient;
  }
  o.require(deficient == 100, "some samples were not rank-deficient");
  if (o.passed) o.detail = "1000 triples associative, dilations multiplicative, 100 degenerate forms rebuilt exactly";
  return o;
}

} // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{induced_tensors, schouten,     extension_equivalence,
                                                       contact,         dirac,        purification,
                                                       star_axioms,     oracle,       ground_state,
                                                       osculating_group};
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << o.detail << " ("
              << std::fixed << std::setprecision(2) << seconds_since(t0) << " s)" << std::endl;
  }
  return all ? 0 : 1;
}

// Command-line driver: verification suites, Poisson structures, star products and the
// numeric demos, with a human report on stdout and an optional JSON report.

#include "aq/fock.hpp"
#include "aq/parse.hpp"
#include "aq/report.hpp"
#include "aq/spec_file.hpp"
#include "aq/star.hpp"
#include "aq/symplectic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace aq;
using nlohmann::ordered_json;

enum ExitCode { ok = 0, math_failure = 1, input_error = 2, non_convergence = 3 };

struct Globals {
  std::string report_json;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  bool timing = false;
};

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << x;
  return os.str();
}

std::string fixed(double x, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << x;
  return os.str();
}

ordered_json base_config(const Globals& g, const std::string& file) {
  ordered_json c;
  if (!file.empty()) c["file"] = file;
  c["seed"] = g.seed;
  c["threads"] = g.threads;
  return c;
}

std::string tensor_summary(const AntisymmetricTensor& t) { return t.is_zero() ? "0" : t.first_nonzero(); }

void run_check(const AlgebroidSpec& spec, RunReport& rep) {
  const AxiomReport axioms = check_axioms(spec.algebroid);
  for (const auto& c : axioms.checks) rep.check("axiom " + c.name, c.passed, c.witness);

  const SymplecticVerdict v = check_symplectic(spec.algebroid, spec.omega);
  rep.check("omega antisymmetric", v.antisymmetric);
  if (v.antisymmetric) {
    rep.check("closed", v.closed, v.closed ? "d(omega) = 0" : "d(omega)" + v.d_omega.first_nonzero());
    rep.check("nondegenerate", v.nondegenerate, "det(omega) = " + to_string(v.determinant));
    rep.value("det_omega", to_string(v.determinant));

    const CentralExtension E = central_extension(spec.algebroid, spec.omega);
    const AxiomReport ext = check_axioms(E.algebroid);
    const AxiomCheck& jac = ext.check("jacobi");
    rep.check("central extension jacobi", jac.passed, jac.witness);
    const ContactVerdict cv = contact_form_check(E);
    rep.check("contact form d(theta) = pr*omega", cv.passed(), cv.witness());
  }
}

void run_poisson(const AlgebroidSpec& spec, const Globals& g, RunReport& rep) {
  const PoissonBivector P = induced_poisson(spec.algebroid, spec.omega);
  ordered_json entries = ordered_json::object();
  bool any = false;
  for (std::size_t a = 0; a < P.pi.rows(); ++a)
    for (std::size_t b = a + 1; b < P.pi.cols(); ++b) {
      if (P.pi(a, b).is_zero()) continue;
      const std::string key = "pi[" + std::to_string(a + 1) + "][" + std::to_string(b + 1) + "]";
      rep.line(key + " = " + to_string(P.pi(a, b)));
      entries[key] = to_string(P.pi(a, b));
      any = true;
    }
  if (!any) rep.line("pi = 0");
  rep.value("pi", entries);

  const AntisymmetricTensor sch = schouten_jacobi(P);
  rep.line("schouten [pi,pi] = " + tensor_summary(sch));
  rep.check("schouten [pi,pi] = 0", sch.is_zero(), sch.is_zero() ? "" : sch.first_nonzero());

  std::size_t contained = 0;
  for (const auto& pt : spec.points) contained += leaf_contained(spec.algebroid, P, pt) ? 1 : 0;
  if (!spec.points.empty())
    rep.check("leaf containment", contained == spec.points.size(),
              std::to_string(contained) + "/" + std::to_string(spec.points.size()) + " points");

  if (!spec.omega.is_constant()) {
    rep.line("dirac lemma: skipped (omega not constant in the frame)");
    return;
  }
  const CentralExtension E = central_extension(spec.algebroid, spec.omega);
  std::mt19937_64 rng(g.seed);
  const std::size_t trials = spec.star ? spec.star->trials : 20;
  std::size_t agree = 0;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const PolyFn f = random_polynomial(spec.chart, 3, rng);
    const PolyFn h = random_polynomial(spec.chart, 3, rng);
    const auto lhs = dirac_bracket_on_S(E, f, h);
    const EtaLaurent<Rational> rhs(-1, poisson_bracket(P, f, h));
    if (lhs == rhs)
      ++agree;
    else if (witness.empty())
      witness = "f = " + to_string(f) + ", g = " + to_string(h) + ": " + to_string(lhs - rhs);
  }
  rep.check("dirac lemma {f~,g~}_S = (1/eta){f,g}~", agree == trials,
            witness.empty() ? std::to_string(agree) + "/" + std::to_string(trials) + " random pairs" : witness);
}

FlatFrameConfig flat_config(const AlgebroidSpec& spec) {
  const RatMatrix J = frame_complex_structure(spec);
  RatMatrix W(spec.omega.rows(), spec.omega.cols());
  for (std::size_t i = 0; i < spec.omega.rows(); ++i)
    for (std::size_t j = 0; j < spec.omega.cols(); ++j) {
      if (!spec.omega(i, j).is_constant())
        throw FlatFrameViolation("flat-frame violation: omega is not constant in the frame");
      W(i, j) = spec.omega(i, j).constant_term();
    }
  return FlatFrameConfig::make(spec.algebroid, spec.omega, wick_tensor(W, J));
}

void run_star(const AlgebroidSpec& spec, std::size_t order, const std::string& fsrc, const std::string& gsrc,
              RunReport& rep) {
  const PolyFn f = parse_poly(fsrc, spec.chart);
  const PolyFn g = parse_poly(gsrc, spec.chart);
  const FlatFrameConfig cfg = flat_config(spec);
  const FormalFunction fg = star(cfg, f, g, order);
  const FormalFunction gf = star(cfg, g, f, order);
  ordered_json orders = ordered_json::array();
  for (std::size_t k = 0; k <= order; ++k) {
    rep.line("order " + std::to_string(k) + ": " + to_string(fg[k]));
    orders.push_back({{"order", k}, {"poly", to_string(fg[k])}});
  }
  rep.value("star", orders);
  const FormalFunction comm = fg - gf;
  for (std::size_t k = 0; k <= order; ++k) rep.line("commutator order " + std::to_string(k) + ": " + to_string(comm[k]));

  rep.check("order 0 = f*g", fg[0] == to_gauss(f * g));
  if (order >= 1) {
    const PoissonBivector P = induced_poisson(spec.algebroid, spec.omega);
    const GaussPoly target = to_gauss(poisson_bracket(P, f, g)) * GaussRational(Rational(0), Rational(-1));
    rep.check("commutator = -i*hbar*{f,g} + O(hbar^2)", comm[0].is_zero() && comm[1] == target,
              "order-1 coefficient " + to_string(comm[1]) + ", expected " + to_string(target));
  }
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw PreconditionError("hbar grid: expected lo:hi:count");
    return geometric_grid(std::stod(parts[0]), std::stod(parts[1]), std::stoul(parts[2]));
  }
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(std::stod(p));
  if (out.size() < 2) throw PreconditionError("hbar grid: need at least two values");
  return out;
}

void oracle_lines(const OracleReport& r, RunReport& rep, const std::string& label) {
  for (std::size_t k = 0; k < r.hbar.size(); ++k)
    rep.line(label + " hbar = " + sci(r.hbar[k]) + "  R = " + sci(r.residual[k]) + "  |T_f T_g| = " + sci(r.scale[k]));
  if (r.slope) rep.line(label + " fitted slope = " + fixed(*r.slope));
  if (r.degenerate) rep.line(label + " remainder at floating-point floor (series reproduces the product)");
}

void run_oracle(const AlgebroidSpec& spec, std::size_t order, const std::string& fsrc, const std::string& gsrc,
                const std::vector<double>& grid, const OracleOptions& opts, RunReport& rep) {
  const FlatFrameConfig cfg = flat_config(spec);
  const GaussPoly f = to_gauss(parse_poly(fsrc, spec.chart));
  const GaussPoly g = to_gauss(parse_poly(gsrc, spec.chart));
  const OracleReport r = oracle_compare(cfg, f, g, order, grid, opts);
  oracle_lines(r, rep, "N=" + std::to_string(order));
  ordered_json res;
  res["order"] = order;
  res["hbar"] = r.hbar;
  res["residual"] = r.residual;
  res["degenerate"] = r.degenerate;
  if (r.slope) res["slope"] = *r.slope;
  if (order >= 1) {
    const OracleReport lower = oracle_compare(cfg, f, g, order - 1, grid, opts);
    oracle_lines(lower, rep, "N=" + std::to_string(order - 1));
    if (lower.slope) res["slope_order_minus_one"] = *lower.slope;
  }
  rep.value("oracle", res);
  rep.check("remainder slope >= N + 0.8", r.passed(),
            r.degenerate ? "degenerate fit: remainder at the floating-point floor"
                         : (r.slope ? "slope " + fixed(*r.slope) : "no fit"));
}

void run_purify(std::size_t dim, double delta0, double tol, std::size_t max_iter, const Globals& g, RunReport& rep) {
  if (!(delta0 < 0.25)) throw PreconditionError("purify: ||S0^2 - S0|| = " + std::to_string(delta0) + " is not below 1/4");
  const CMatrix S0 = random_near_projector(dim, delta0, g.seed);
  PurifyOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  const PurifyResult res = purify_projector(S0, opts);
  for (std::size_t k = 0; k < res.residuals.size(); ++k) {
    std::string l = "step " + std::to_string(k) + ": ||S^2 - S|| = " + sci(res.residuals[k]);
    if (k > 0) l += "  identity error = " + sci(res.identity_errors[k - 1]);
    rep.line(l);
  }
  double worst = 0;
  for (double e : res.identity_errors) worst = std::max(worst, e);
  rep.value("residuals", res.residuals);
  rep.value("identity_errors", res.identity_errors);
  rep.value("iterations", res.iterations);
  rep.check("reached tolerance", res.residuals.back() <= tol, std::to_string(res.iterations) + " iterations");
  rep.check("residual identity S'^2 - S' = -3D^2 + 4D^3", worst <= 1e-12, "max relative error " + sci(worst));
  if (res.fitted_order) {
    rep.value("fitted_order", *res.fitted_order);
    rep.check("convergence order in [1.9, 2.1]", *res.fitted_order >= 1.9 && *res.fitted_order <= 2.1,
              "fitted " + fixed(*res.fitted_order));
  } else {
    rep.line("convergence order: too few steps above the floating-point floor to fit");
  }
}

void run_ground_state(std::size_t cutoff, double lambda, const QuadratureSpec& q, const std::string& dump,
                      const std::string& format, RunReport& rep) {
  Matrix<double> omega(2, 2);
  omega << 0, 1, -1, 0;
  const CompatibleStructure C = compatible_J(omega, Matrix<double>::Identity(2, 2));
  const OsculatingFiber<double> F(Vector<double>::Zero(1), omega);
  const HomogeneousSymbol s0 = ground_state_symbol(F, C.J);
  const FockSpacePtr space = make_fock_space(1, cutoff);
  const Quantization Q = quantize_symbol(s0, lambda, space, C, q);

  Eigen::JacobiSVD<CMatrix> svd(Q.op.matrix());
  const auto& sv = svd.singularValues();
  const double ratio = sv(1) / sv(0);
  const CMatrix normalized = Q.op.matrix() / Q.op.matrix().trace();
  const double dist = spectral_norm(normalized - vacuum_projector(space).matrix());
  rep.line("c_norm = " + sci(Q.c_norm) + "  trace = " + sci(Q.trace) + "  quadrature order = " + std::to_string(Q.order));
  rep.line("quadrature shift on doubling = " + sci(Q.convergence_shift));
  rep.value("c_norm", Q.c_norm);
  rep.value("trace", Q.trace);
  rep.value("singular_ratio", ratio);
  rep.value("vacuum_distance", dist);
  rep.check("rank one (sigma_2/sigma_1 <= 1e-4)", ratio <= 1e-4, sci(ratio));
  rep.check("trace-normalized = vacuum projector (<= 1e-4)", dist <= 1e-4, sci(dist));
  if (!dump.empty()) {
    if (format == "binary") {
      std::ofstream out(dump, std::ios::binary);
      Q.op.write_binary(out);
    } else {
      std::ofstream out(dump);
      Q.op.write_text(out);
    }
    rep.line("operator written to " + dump);
  }
}

int finish(const RunReport& rep, const Globals& g) {
  for (const auto& l : rep.lines()) std::cout << l << '\n';
  if (!g.report_json.empty()) rep.write_json(g.report_json);
  return rep.all_passed() ? ok : math_failure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"aq: symplectic algebroids, Poisson structures and star products"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--report-json", g.report_json, "Write the machine-readable report to PATH");
  app.add_option("--threads", g.threads, "Thread count (recorded in the report)");
  app.add_option("--seed", g.seed, "Random seed (AQ_SEED overrides)");
  app.add_flag("--timing", g.timing, "Include wall-clock timing in the JSON report");

  std::string file;
  auto* check = app.add_subcommand("check", "Verify algebroid axioms and the symplectic form");
  check->add_option("file", file, "Algebroid file")->required();
  auto* poisson = app.add_subcommand("poisson", "Print the induced Poisson tensor and its certificates");
  poisson->add_option("file", file, "Algebroid file")->required();

  std::size_t order = 2;
  std::string fsrc, gsrc;
  auto* star_cmd = app.add_subcommand("star", "Star product of two functions in a flat frame");
  star_cmd->add_option("file", file, "Algebroid file")->required();
  star_cmd->add_option("--order", order, "Truncation order N");
  star_cmd->add_option("--f", fsrc, "First function")->required();
  star_cmd->add_option("--g", gsrc, "Second function")->required();

  std::size_t dim = 20, max_iter = 50;
  double delta0 = 0.1, tol = 1e-12;
  auto* purify = app.add_subcommand("purify", "Projector purification on a random near-projector");
  purify->add_option("--dim", dim, "Matrix dimension");
  purify->add_option("--delta0", delta0, "Initial ||S0^2 - S0||");
  purify->add_option("--tol", tol, "Target ||S^2 - S||");
  purify->add_option("--max-iter", max_iter, "Iteration limit");

  OracleOptions oopts;
  std::string grid = "0.015625:0.25:5";
  std::size_t oracle_order = 1;
  std::string of = "x", og = "y";
  auto* oracle = app.add_subcommand("oracle", "Compare the star product with Bargmann-Toeplitz operators");
  oracle->add_option("file", file, "Algebroid file (standard frame of R^2n)")->required();
  oracle->add_option("--cutoff", oopts.cutoff, "Fock cutoff");
  oracle->add_option("--buffer", oopts.buffer, "Excluded top occupation levels");
  oracle->add_option("--hbar-grid", grid, "lo:hi:count (geometric) or a comma list");
  oracle->add_option("--order", oracle_order, "Truncation order N");
  oracle->add_option("--f", of, "First function");
  oracle->add_option("--g", og, "Second function");

  std::size_t gs_cutoff = 16;
  double gs_lambda = 1;
  QuadratureSpec qspec;
  std::string dump, dump_format = "text";
  auto* ground = app.add_subcommand("ground-state", "Quantize the ground-state symbol on R^2");
  ground->add_option("--cutoff", gs_cutoff, "Fock cutoff");
  ground->add_option("--lambda", gs_lambda, "Representation parameter");
  ground->add_option("--quadrature-order", qspec.order, "Gauss-Hermite order per axis");
  ground->add_option("--pad", qspec.pad, "Extra occupation levels during quadrature");
  ground->add_option("--dump", dump, "Write the operator matrix to PATH");
  ground->add_option("--dump-format", dump_format, "text or binary")->check(CLI::IsMember({"text", "binary"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }
  if (const char* env = std::getenv("AQ_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: AQ_SEED is not an unsigned integer\n";
      return input_error;
    }
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    CLI::App* sub = app.get_subcommands().front();
    RunReport rep(sub->get_name());
    ordered_json cfg = base_config(g, file);
    auto timed = [&](RunReport& r) {
      if (g.timing)
        r.set_timing(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      return finish(r, g);
    };
    if (sub == check) {
      rep.set_config(cfg);
      run_check(load_spec(file), rep);
    } else if (sub == poisson) {
      rep.set_config(cfg);
      run_poisson(load_spec(file), g, rep);
    } else if (sub == star_cmd) {
      cfg["order"] = order;
      cfg["f"] = fsrc;
      cfg["g"] = gsrc;
      rep.set_config(cfg);
      run_star(load_spec(file), order, fsrc, gsrc, rep);
    } else if (sub == purify) {
      cfg["dim"] = dim;
      cfg["delta0"] = delta0;
      cfg["tol"] = tol;
      rep.set_config(cfg);
      run_purify(dim, delta0, tol, max_iter, g, rep);
    } else if (sub == oracle) {
      cfg["order"] = oracle_order;
      cfg["f"] = of;
      cfg["g"] = og;
      cfg["cutoff"] = oopts.cutoff;
      cfg["buffer"] = oopts.buffer;
      cfg["hbar_grid"] = grid;
      rep.set_config(cfg);
      run_oracle(load_spec(file), oracle_order, of, og, parse_grid(grid), oopts, rep);
    } else {
      cfg["cutoff"] = gs_cutoff;
      cfg["lambda"] = gs_lambda;
      cfg["quadrature_order"] = qspec.order;
      cfg["pad"] = qspec.pad;
      rep.set_config(cfg);
      run_ground_state(gs_cutoff, gs_lambda, qspec, dump, dump_format, rep);
    }
    return timed(rep);
  } catch (const FlatFrameViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return math_failure;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return non_convergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return input_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: malformed number: " << e.what() << '\n';
    return input_error;
  }
}

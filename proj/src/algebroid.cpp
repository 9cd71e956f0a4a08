#include "aq/algebroid.hpp"

#include <algorithm>

namespace aq {

int AntisymmetricTensor::canonicalize(Indices& idx) const {
  if (idx.size() != degree_) throw ChartMismatch("tensor: wrong number of indices");
  int sign = 1;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] >= range_) throw PreconditionError("tensor: index out of range");
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      if (idx[a] == idx[b]) return 0;
    }
  }
  // insertion sort, counting transpositions
  for (std::size_t a = 1; a < idx.size(); ++a)
    for (std::size_t b = a; b > 0 && idx[b - 1] > idx[b]; --b) {
      std::swap(idx[b - 1], idx[b]);
      sign = -sign;
    }
  return sign;
}

PolyFn AntisymmetricTensor::operator()(const Indices& idx) const {
  Indices key = idx;
  const int sign = canonicalize(key);
  if (sign == 0) return PolyFn(chart_);
  auto it = comps_.find(key);
  if (it == comps_.end()) return PolyFn(chart_);
  return sign > 0 ? it->second : -it->second;
}

void AntisymmetricTensor::set(const Indices& idx, const PolyFn& value) {
  require_same_chart(chart_, value.chart(), "tensor set");
  Indices key = idx;
  const int sign = canonicalize(key);
  if (sign == 0) {
    if (!value.is_zero()) throw PreconditionError("tensor: nonzero value on a repeated index");
    return;
  }
  if (value.is_zero())
    comps_.erase(key);
  else
    comps_.insert_or_assign(key, sign > 0 ? value : -value);
}

AntisymmetricTensor operator-(const AntisymmetricTensor& a, const AntisymmetricTensor& b) {
  if (a.range_ != b.range_ || a.degree_ != b.degree_) throw ChartMismatch("tensor -: shapes differ");
  AntisymmetricTensor r = a;
  for (const auto& [idx, p] : b.comps_) r.set(idx, r(idx) - p);
  return r;
}

std::string AntisymmetricTensor::first_nonzero() const {
  if (comps_.empty()) return "";
  const auto& [idx, p] = *comps_.begin();
  std::string s = "[";
  for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::to_string(idx[k] + 1);
  return s + "] = " + to_string(p);
}

AlgebroidPresentation::AlgebroidPresentation(ChartPtr chart, std::size_t rank, PolyMatrix<Rational> anchor,
                                             std::vector<PolyFn> structure)
    : chart_(std::move(chart)), rank_(rank), anchor_(std::move(anchor)), structure_(std::move(structure)) {
  if (rank_ == 0) throw PreconditionError("algebroid: rank must be positive");
  if (anchor_.rows() != rank_ || anchor_.cols() != chart_->dim())
    throw ChartMismatch("algebroid: anchor must be rank x base_dim");
  require_same_chart(chart_, anchor_.chart(), "algebroid anchor");
  if (structure_.size() != rank_ * rank_ * rank_)
    throw ChartMismatch("algebroid: structure array must have rank^3 entries");
  for (const auto& c : structure_) require_same_chart(chart_, c.chart(), "algebroid structure");
}

AlgebroidPresentation AlgebroidPresentation::abelian(PolyMatrix<Rational> anchor) {
  const std::size_t r = anchor.rows();
  ChartPtr chart = anchor.chart();
  return AlgebroidPresentation(chart, r, std::move(anchor), std::vector<PolyFn>(r * r * r, PolyFn(chart)));
}

void AlgebroidPresentation::set_structure(std::size_t i, std::size_t j, std::size_t k, PolyFn value) {
  require_same_chart(chart_, value.chart(), "set_structure");
  structure_.at((i * rank_ + j) * rank_ + k) = std::move(value);
}

PolyFn AlgebroidPresentation::apply_anchor(std::size_t i, const PolyFn& p) const {
  require_same_chart(chart_, p.chart(), "anchor application");
  PolyFn r(chart_);
  for (std::size_t a = 0; a < base_dim(); ++a) {
    const PolyFn& rho = anchor_(i, a);
    if (!rho.is_zero()) r += rho * derive(p, a);
  }
  return r;
}

Section frame_section(const AlgebroidPresentation& A, std::size_t i) {
  Section s = zero_section(A);
  s.at(i) = PolyFn::constant(A.chart(), Rational(1));
  return s;
}

Section zero_section(const AlgebroidPresentation& A) { return Section(A.rank(), PolyFn(A.chart())); }

PolyFn apply_section(const AlgebroidPresentation& A, const Section& X, const PolyFn& p) {
  if (X.size() != A.rank()) throw ChartMismatch("section length differs from rank");
  PolyFn r(A.chart());
  for (std::size_t i = 0; i < A.rank(); ++i)
    if (!X[i].is_zero()) r += X[i] * A.apply_anchor(i, p);
  return r;
}

Section bracket_sections(const AlgebroidPresentation& A, const Section& X, const Section& Y) {
  const std::size_t r = A.rank();
  if (X.size() != r || Y.size() != r) throw ChartMismatch("bracket: section length differs from rank");
  Section out = zero_section(A);
  for (std::size_t i = 0; i < r; ++i) {
    if (X[i].is_zero()) continue;
    for (std::size_t j = 0; j < r; ++j) {
      if (Y[j].is_zero()) continue;
      const PolyFn xy = X[i] * Y[j];
      for (std::size_t k = 0; k < r; ++k)
        if (!A.structure(i, j, k).is_zero()) out[k] += xy * A.structure(i, j, k);
    }
  }
  for (std::size_t k = 0; k < r; ++k) out[k] += apply_section(A, X, Y[k]) - apply_section(A, Y, X[k]);
  return out;
}

bool AxiomReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw PreconditionError("axiom report has no check named " + name);
}

namespace {

std::string idx1(std::size_t i) { return std::to_string(i + 1); }

AxiomCheck check_antisymmetry(const AlgebroidPresentation& A) {
  AxiomCheck c{"antisymmetry", true, ""};
  const std::size_t r = A.rank();
  for (std::size_t i = 0; i < r && c.passed; ++i)
    for (std::size_t j = i; j < r && c.passed; ++j)
      for (std::size_t k = 0; k < r && c.passed; ++k) {
        const PolyFn defect = A.structure(i, j, k) + A.structure(j, i, k);
        if (!defect.is_zero()) {
          c.passed = false;
          c.witness = "c_" + idx1(i) + idx1(j) + "^" + idx1(k) + " + c_" + idx1(j) + idx1(i) + "^" + idx1(k) +
                      " = " + to_string(defect);
        }
      }
  return c;
}

AxiomCheck check_anchor_morphism(const AlgebroidPresentation& A) {
  AxiomCheck c{"anchor_morphism", true, ""};
  const std::size_t r = A.rank();
  const std::size_t m = A.base_dim();
  for (std::size_t i = 0; i < r && c.passed; ++i)
    for (std::size_t j = i + 1; j < r && c.passed; ++j)
      for (std::size_t a = 0; a < m && c.passed; ++a) {
        // component a of [ρ(e_i), ρ(e_j)] minus ρ([e_i, e_j])
        PolyFn defect = A.apply_anchor(i, A.anchor()(j, a)) - A.apply_anchor(j, A.anchor()(i, a));
        for (std::size_t k = 0; k < r; ++k) defect -= A.structure(i, j, k) * A.anchor()(k, a);
        if (!defect.is_zero()) {
          c.passed = false;
          c.witness = "[rho(e_" + idx1(i) + "),rho(e_" + idx1(j) + ")] - rho([e_" + idx1(i) + ",e_" + idx1(j) +
                      "]) has d/d" + A.chart()->name(a) + " component " + to_string(defect);
        }
      }
  return c;
}

AxiomCheck check_jacobi(const AlgebroidPresentation& A) {
  AxiomCheck c{"jacobi", true, ""};
  const std::size_t r = A.rank();
  for (std::size_t i = 0; i < r && c.passed; ++i)
    for (std::size_t j = i + 1; j < r && c.passed; ++j)
      for (std::size_t k = j + 1; k < r && c.passed; ++k) {
        const Section ei = frame_section(A, i), ej = frame_section(A, j), ek = frame_section(A, k);
        const Section t1 = bracket_sections(A, ei, bracket_sections(A, ej, ek));
        const Section t2 = bracket_sections(A, ej, bracket_sections(A, ek, ei));
        const Section t3 = bracket_sections(A, ek, bracket_sections(A, ei, ej));
        for (std::size_t l = 0; l < r && c.passed; ++l) {
          const PolyFn sum = t1[l] + t2[l] + t3[l];
          if (!sum.is_zero()) {
            c.passed = false;
            c.witness = "Jacobi(e_" + idx1(i) + ",e_" + idx1(j) + ",e_" + idx1(k) + ") has e_" + idx1(l) +
                        " component " + to_string(sum);
          }
        }
      }
  return c;
}

} // namespace

AxiomReport check_axioms(const AlgebroidPresentation& A) {
  return AxiomReport{{check_antisymmetry(A), check_anchor_morphism(A), check_jacobi(A)}};
}

FrameKForm ce_differential(const AlgebroidPresentation& A, const FrameKForm& alpha) {
  const std::size_t r = A.rank();
  const std::size_t k = alpha.degree();
  if (alpha.range() != r) throw ChartMismatch("ce_differential: form rank differs from presentation");
  require_same_chart(A.chart(), alpha.chart(), "ce_differential");
  if (k > r) throw PreconditionError("ce_differential: degree " + std::to_string(k) + " exceeds rank");
  FrameKForm out(A.chart(), r, k + 1);
  if (k + 1 > r) return out;

  std::vector<std::size_t> tuple(k + 1);
  // enumerate strictly increasing (k+1)-tuples
  std::vector<bool> select(r, false);
  std::fill(select.begin(), select.begin() + static_cast<long>(k + 1), true);
  do {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < r; ++i)
      if (select[i]) tuple[pos++] = i;

    PolyFn sum(A.chart());
    for (std::size_t a = 0; a <= k; ++a) {
      std::vector<std::size_t> rest;
      for (std::size_t b = 0; b <= k; ++b)
        if (b != a) rest.push_back(tuple[b]);
      const PolyFn term = A.apply_anchor(tuple[a], alpha(rest));
      if (a % 2 == 0)
        sum += term;
      else
        sum -= term;
    }
    for (std::size_t a = 0; a <= k; ++a)
      for (std::size_t b = a + 1; b <= k; ++b) {
        std::vector<std::size_t> args{0};
        for (std::size_t c = 0; c <= k; ++c)
          if (c != a && c != b) args.push_back(tuple[c]);
        PolyFn term(A.chart());
        for (std::size_t m = 0; m < r; ++m) {
          const PolyFn& cm = A.structure(tuple[a], tuple[b], m);
          if (cm.is_zero()) continue;
          args[0] = m;
          term += cm * alpha(args);
        }
        if ((a + b) % 2 == 0)
          sum += term;
        else
          sum -= term;
      }
    out.set(tuple, sum);
  } while (std::prev_permutation(select.begin(), select.end()));
  return out;
}

FrameKForm two_form(const PolyMatrix<Rational>& omega) {
  if (!omega.is_antisymmetric()) throw PreconditionError("two_form: matrix is not antisymmetric");
  FrameKForm w(omega.chart(), omega.rows(), 2);
  for (std::size_t i = 0; i < omega.rows(); ++i)
    for (std::size_t j = i + 1; j < omega.cols(); ++j) w.set({i, j}, omega(i, j));
  return w;
}

} // namespace aq

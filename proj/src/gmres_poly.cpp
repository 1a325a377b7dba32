#include "ppa/gmres_poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace ppa {

namespace {

constexpr double kImagTol = 1e-13;  // relative: treat root as real below this
constexpr double kLogFloor = -690.0;  // ln(1e-300), distance floor for ties

bool root_is_complex(const std::complex<double>& z) {
  return std::abs(z.imag()) > kImagTol * std::abs(z);
}

std::vector<std::complex<double>> distinct_roots(const PolyPrecond& p) {
  std::vector<std::complex<double>> out;
  for (const auto& r : p.roots) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

void refresh_multiplicity(PolyPrecond& p) {
  p.multiplicity.assign(p.roots.size(), 0);
  for (size_t i = 0; i < p.roots.size(); ++i) {
    p.multiplicity[i] = static_cast<int>(
        std::count(p.roots.begin(), p.roots.end(), p.roots[i]));
  }
}

}  // namespace

std::vector<std::complex<double>> leja_order(
    const std::vector<std::complex<double>>& roots) {
  const int d = static_cast<int>(roots.size());
  if (d == 0) throw std::invalid_argument("leja_order: empty root list");
  for (const auto& r : roots) {
    if (r == std::complex<double>(0.0, 0.0)) {
      throw std::invalid_argument("leja_order: zero root");
    }
  }

  std::vector<std::complex<double>> out;
  out.reserve(d);
  std::vector<bool> used(d, false);

  auto take_conjugate_of = [&](int i) {
    for (int k = 0; k < d; ++k) {
      if (!used[k] && k != i &&
          std::abs(roots[k] - std::conj(roots[i])) <=
              1e-10 * std::abs(roots[i])) {
        used[k] = true;
        out.push_back(roots[k]);
        return;
      }
    }
    // conjugate-closed input expected; tolerate an unmatched root
  };

  int first = 0;
  for (int i = 1; i < d; ++i) {
    if (std::abs(roots[i]) > std::abs(roots[first])) first = i;
  }
  used[first] = true;
  out.push_back(roots[first]);
  if (root_is_complex(roots[first])) take_conjugate_of(first);

  while (static_cast<int>(out.size()) < d) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      if (used[i]) continue;
      double score = 0.0;
      for (const auto& c : out) {
        const double dist = std::abs(roots[i] - c);
        score += dist > 0.0 ? std::log(dist) : kLogFloor;
      }
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    used[best] = true;
    out.push_back(roots[best]);
    if (root_is_complex(roots[best])) take_conjugate_of(best);
  }
  return out;
}

PolyPrecond build_gmres_poly(const LinearOperator& a, const Eigen::VectorXd& b,
                             int degree, CostRecord& rec) {
  if (degree < 1) throw std::invalid_argument("build_gmres_poly: degree < 1");
  if (b.size() != a.dim()) {
    throw std::invalid_argument("build_gmres_poly: dimension mismatch");
  }
  if (b.norm() == 0.0) {
    throw std::invalid_argument("build_gmres_poly: zero starting vector");
  }

  const int d = std::min<int>(degree, a.dim());
  ArnoldiState st = arnoldi_init(b, d, rec);
  arnoldi_extend(st, a, d, rec);

  PolyPrecond p;
  p.roots = leja_order(harmonic_ritz_values(st));
  p.base_degree = static_cast<int>(p.roots.size());
  p.truncated = p.base_degree < degree;
  refresh_multiplicity(p);
  return p;
}

void apply_poly(const PolyPrecond& p, const LinearOperator& a,
                const Eigen::Ref<const Eigen::VectorXd>& v,
                Eigen::VectorXd& out, CostRecord& rec) {
  if (v.size() != a.dim()) {
    throw std::invalid_argument("apply_poly: dimension mismatch");
  }
  out = v;
  Eigen::VectorXd t1(v.size()), t2(v.size());
  size_t i = 0;
  while (i < p.roots.size()) {
    const std::complex<double>& th = p.roots[i];
    if (!root_is_complex(th)) {
      a.apply(out, t1, rec);
      axpy(-1.0 / th.real(), t1, out, rec);
      i += 1;
    } else {
      if (i + 1 >= p.roots.size() ||
          std::abs(p.roots[i + 1] - std::conj(th)) > 1e-10 * std::abs(th)) {
        throw std::logic_error("apply_poly: complex root without adjacent conjugate");
      }
      // (I - A/theta)(I - A/conj(theta)) as one real quadratic
      const double inv_mod2 = 1.0 / std::norm(th);
      const double two_re_inv = 2.0 * th.real() * inv_mod2;
      a.apply(out, t1, rec);
      a.apply(t1, t2, rec);
      axpy(-two_re_inv, t1, out, rec);
      axpy(inv_mod2, t2, out, rec);
      i += 2;
    }
  }
}

std::complex<double> eval_poly(const PolyPrecond& p, std::complex<double> z) {
  std::complex<double> val(1.0, 0.0);
  for (const auto& th : p.roots) val *= (1.0 - z / th);
  return val;
}

PofReport compute_pof(const PolyPrecond& p) {
  const auto base = distinct_roots(p);
  const int d = static_cast<int>(base.size());
  if (d < 2) {
    throw std::invalid_argument("compute_pof: needs at least two roots");
  }
  PofReport rep;
  rep.log10_pof.resize(d);
  rep.copies_needed.resize(d);
  rep.max_log10_pof = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < d; ++j) {
    double lg = 0.0;
    for (int i = 0; i < d; ++i) {
      if (i == j) continue;
      const double f = std::abs(1.0 - base[j] / base[i]);
      lg += f > 0.0 ? std::log10(f) : kLogFloor;
    }
    rep.log10_pof[j] = lg;
    rep.copies_needed[j] =
        lg > 4.0 ? static_cast<int>(std::ceil((lg - 4.0) / 14.0)) : 0;
    rep.total_copies += rep.copies_needed[j];
    rep.max_log10_pof = std::max(rep.max_log10_pof, lg);
  }
  return rep;
}

PolyPrecond add_stability_roots(const PolyPrecond& p,
                                int max_copies_per_root) {
  const auto rep = compute_pof(p);
  const auto base = distinct_roots(p);

  PolyPrecond out = p;
  std::vector<bool> handled(base.size(), false);
  for (size_t j = 0; j < base.size(); ++j) {
    if (handled[j]) continue;
    handled[j] = true;
    const int c = std::min(rep.copies_needed[j], max_copies_per_root);
    if (c <= 0) continue;
    const std::complex<double>& th = base[j];

    std::vector<std::complex<double>> copy_group{th};
    if (root_is_complex(th)) {
      for (size_t k = 0; k < base.size(); ++k) {
        if (!handled[k] &&
            std::abs(base[k] - std::conj(th)) <= 1e-10 * std::abs(th)) {
          handled[k] = true;
          copy_group.push_back(base[k]);
          break;
        }
      }
    }

    // First copy at the end of the list; remaining copies spaced evenly
    // between the original occurrence and the end, conjugates adjacent.
    const long long L = static_cast<long long>(out.roots.size());
    const long long jpos =
        std::find(out.roots.begin(), out.roots.end(), th) - out.roots.begin();
    std::vector<long long> positions;
    for (int r = 1; r < c; ++r) {
      positions.push_back(
          jpos + static_cast<long long>(std::llround(double(r) * double(L - jpos) / double(c))));
    }
    std::sort(positions.rbegin(), positions.rend());
    out.roots.insert(out.roots.end(), copy_group.begin(), copy_group.end());
    for (long long pos : positions) {
      out.roots.insert(out.roots.begin() + pos, copy_group.begin(),
                       copy_group.end());
    }
  }
  refresh_multiplicity(out);
  return out;
}

PolyPrecond build_two_vector_poly(const LinearOperator& a,
                                  const Eigen::VectorXd& b1,
                                  const Eigen::VectorXd& b2, int degree,
                                  CostRecord& rec) {
  if (b1.size() != a.dim() || b2.size() != a.dim()) {
    throw std::invalid_argument("build_two_vector_poly: dimension mismatch");
  }
  const double n1 = norm(b1, rec), n2 = norm(b2, rec);
  if (n1 == 0.0 || n2 == 0.0) {
    throw std::invalid_argument("build_two_vector_poly: zero starting vector");
  }
  const int n = a.dim();
  Eigen::VectorXd bhat(2 * n);
  bhat.head(n) = b1 / (n1 * std::sqrt(2.0));
  bhat.tail(n) = b2 / (n2 * std::sqrt(2.0));
  rec.vops += 2;  // the two rescalings

  // The block operator shares A, so constructing it here is cheap; the
  // caller's record picks up 2 base mvps per block apply.
  struct Borrowed final : LinearOperator {
    const LinearOperator* inner;
    explicit Borrowed(const LinearOperator* op) : inner(op) {}
    int dim() const override { return inner->dim(); }
    OperatorKind kind() const override { return inner->kind(); }
    int mvps_per_apply() const override { return inner->mvps_per_apply(); }
    double nnzr() const override { return inner->nnzr(); }
    void apply(const Eigen::Ref<const Eigen::VectorXd>& x,
               Eigen::Ref<Eigen::VectorXd> y, CostRecord& r) const override {
      inner->apply(x, y, r);
    }
  };
  const OperatorPtr block = make_block2(std::make_shared<Borrowed>(&a));

  PolyPrecond p = build_gmres_poly(*block, bhat, degree, rec);
  p.provenance = PolyProvenance::two_vector;
  return p;
}

Eigen::VectorXd damped_start(const LinearOperator& a, const Eigen::VectorXd& b,
                             double alpha, int power, CostRecord& rec) {
  if (power != 1 && power != 2) {
    throw std::invalid_argument("damped_start: power must be 1 or 2");
  }
  if (alpha < 0.0) throw std::invalid_argument("damped_start: alpha < 0");

  Eigen::VectorXd w = a.apply(b, rec);
  if (power == 2) {
    w = a.apply(w, rec);
  } else if (alpha != 0.0) {
    axpy(alpha, b, w, rec);
  }
  const double nw = norm(w, rec);
  if (nw == 0.0) throw std::runtime_error("damped_start: damped vector vanished");
  scale(w, 1.0 / nw, rec);
  return w;
}

namespace {

class PolyOperator final : public LinearOperator {
 public:
  PolyOperator(OperatorPtr a, PolyPrecond p, bool complement)
      : a_(std::move(a)), p_(std::move(p)), complement_(complement) {}

  int dim() const override { return a_->dim(); }
  OperatorKind kind() const override {
    return complement_ ? OperatorKind::composite : OperatorKind::poly;
  }
  int mvps_per_apply() const override {
    return p_.effective_degree() * a_->mvps_per_apply();
  }
  double nnzr() const override { return a_->nnzr(); }
  const PolyPrecond& poly() const { return p_; }

  void apply(const Eigen::Ref<const Eigen::VectorXd>& x,
             Eigen::Ref<Eigen::VectorXd> y, CostRecord& rec) const override {
    Eigen::VectorXd w(dim());
    apply_poly(p_, *a_, x, w, rec);
    if (complement_) {
      y = x;
      axpy(-1.0, w, y, rec);
    } else {
      y = w;
    }
  }

 private:
  OperatorPtr a_;
  PolyPrecond p_;
  bool complement_;
};

}  // namespace

OperatorPtr make_poly_operator(OperatorPtr a, PolyPrecond p) {
  return std::make_shared<PolyOperator>(std::move(a), std::move(p), false);
}

OperatorPtr make_poly_complement_operator(OperatorPtr a, PolyPrecond p) {
  return std::make_shared<PolyOperator>(std::move(a), std::move(p), true);
}

std::string poly_dump_csv(const PolyPrecond& p) {
  std::string out = "index,re,im,multiplicity,pof\n";
  const auto base = distinct_roots(p);
  std::vector<double> lg(base.size(), 0.0);
  if (base.size() >= 2) {
    const auto rep = compute_pof(p);
    lg = rep.log10_pof;
  }
  char buf[160];
  for (size_t i = 0; i < base.size(); ++i) {
    const int mult = static_cast<int>(
        std::count(p.roots.begin(), p.roots.end(), base[i]));
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%d,%.17g\n", i,
                  base[i].real(), base[i].imag(), mult,
                  std::pow(10.0, lg[i]));
    out += buf;
  }
  return out;
}

}  // namespace ppa

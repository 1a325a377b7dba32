#include "ppa/arnoldi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace ppa {

namespace {

constexpr double kBreakdownTol = 1e-14;
constexpr double kPairTol = 1e-10;  // relative conjugate matching

bool is_complex(const std::complex<double>& z) {
  return std::abs(z.imag()) > kPairTol * std::max(1.0, std::abs(z));
}

bool is_conjugate_pair(const std::complex<double>& a,
                       const std::complex<double>& b) {
  return std::abs(a - std::conj(b)) <= kPairTol * std::max(1.0, std::abs(a));
}

double ordering_key(const std::complex<double>& z, RitzOrdering ord) {
  switch (ord) {
    case RitzOrdering::smallest_magnitude:
      return std::abs(z);
    case RitzOrdering::largest_magnitude:
      return -std::abs(z);
    case RitzOrdering::target_one:
      return std::abs(1.0 - z);
  }
  return std::abs(z);
}

/// Sorts eigenpairs by ordering key, forcing conjugates adjacent.
void sort_pairs(std::vector<std::complex<double>>& values,
                Eigen::MatrixXcd& vectors, std::vector<double>& residuals,
                RitzOrdering ord) {
  const int d = static_cast<int>(values.size());
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return ordering_key(values[a], ord) < ordering_key(values[b], ord);
  });

  // Keep conjugate pairs adjacent with the +imag member first.
  std::vector<int> arranged;
  std::vector<bool> used(d, false);
  arranged.reserve(d);
  for (int r = 0; r < d; ++r) {
    const int i = idx[r];
    if (used[i]) continue;
    used[i] = true;
    if (!is_complex(values[i])) {
      arranged.push_back(i);
      continue;
    }
    int mate = -1;
    for (int s = 0; s < d; ++s) {
      const int j = idx[s];
      if (!used[j] && is_conjugate_pair(values[i], values[j])) {
        mate = j;
        break;
      }
    }
    if (mate < 0) {  // unmatched complex value; keep as-is
      arranged.push_back(i);
      continue;
    }
    used[mate] = true;
    if (values[i].imag() >= 0.0) {
      arranged.push_back(i);
      arranged.push_back(mate);
    } else {
      arranged.push_back(mate);
      arranged.push_back(i);
    }
  }

  std::vector<std::complex<double>> v2(d);
  std::vector<double> r2(d);
  Eigen::MatrixXcd g2(vectors.rows(), d);
  for (int r = 0; r < d; ++r) {
    v2[r] = values[arranged[r]];
    r2[r] = residuals[arranged[r]];
    g2.col(r) = vectors.col(arranged[r]);
  }
  values = std::move(v2);
  residuals = std::move(r2);
  vectors = std::move(g2);
}

}  // namespace

ArnoldiState arnoldi_init(const Eigen::VectorXd& v0, int m, CostRecord& rec) {
  if (m < 1) throw std::invalid_argument("arnoldi_init: m < 1");
  if (v0.size() < m + 1) {
    throw std::invalid_argument("arnoldi_init: m+1 exceeds dimension");
  }
  ArnoldiState st;
  st.max_dim = m;
  st.V = Eigen::MatrixXd::Zero(v0.size(), m + 1);
  st.H = Eigen::MatrixXd::Zero(m + 1, m);
  const double nb = norm(v0, rec);
  if (nb == 0.0) throw std::invalid_argument("arnoldi_init: zero start");
  st.V.col(0) = v0;
  scale(st.V.col(0), 1.0 / nb, rec);
  return st;
}

void arnoldi_extend(ArnoldiState& state, const LinearOperator& op, int to_dim,
                    CostRecord& rec) {
  if (to_dim > state.max_dim) {
    throw std::invalid_argument("arnoldi_extend: to_dim > max_dim");
  }
  if (to_dim <= state.cur_dim) {
    throw std::invalid_argument("arnoldi_extend: to_dim <= cur_dim");
  }
  if (op.dim() != state.V.rows()) {
    throw std::invalid_argument("arnoldi_extend: dimension mismatch");
  }
  Eigen::VectorXd w(op.dim());
  for (int j = state.cur_dim; j < to_dim; ++j) {
    op.apply(state.V.col(j), w, rec);
    // Modified Gram-Schmidt plus one reorthogonalization pass.
    for (int i = 0; i <= j; ++i) {
      const double h = dot(state.V.col(i), w, rec);
      state.H(i, j) = h;
      axpy(-h, state.V.col(i), w, rec);
    }
    for (int i = 0; i <= j; ++i) {
      const double c = dot(state.V.col(i), w, rec);
      state.H(i, j) += c;
      axpy(-c, state.V.col(i), w, rec);
    }
    const double hsub = norm(w, rec);
    state.H(j + 1, j) = hsub;
    state.cur_dim = j + 1;
    const double colnorm = state.H.col(j).head(j + 2).norm();
    if (hsub <= kBreakdownTol * colnorm) {
      state.H(j + 1, j) = 0.0;
      state.breakdown = true;
      return;
    }
    state.V.col(j + 1) = w / hsub;
    ++rec.vops;  // the scaling
  }
}

RitzSet ritz_pairs(const ArnoldiState& state, RitzOrdering ordering) {
  const int d = state.cur_dim;
  if (d < 1) throw std::invalid_argument("ritz_pairs: empty state");

  Eigen::EigenSolver<Eigen::MatrixXd> es(state.H.topLeftCorner(d, d));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("ritz_pairs: Hessenberg eigensolver failed");
  }

  RitzSet set;
  set.ordering = ordering;
  set.values.resize(d);
  set.residuals.resize(d);
  set.vectors_h = es.eigenvectors();
  const double hsub = state.H(d, d - 1);
  for (int i = 0; i < d; ++i) {
    set.values[i] = es.eigenvalues()[i];
    set.vectors_h.col(i) /= set.vectors_h.col(i).norm();
    set.residuals[i] = std::abs(hsub) * std::abs(set.vectors_h(d - 1, i));
  }
  sort_pairs(set.values, set.vectors_h, set.residuals, ordering);
  return set;
}

std::vector<std::complex<double>> harmonic_ritz_values(
    const ArnoldiState& state) {
  const int d = state.cur_dim;
  if (d < 1) throw std::invalid_argument("harmonic_ritz_values: empty state");

  const Eigen::MatrixXd Hd = state.H.topLeftCorner(d, d);
  const double hsub = state.H(d, d - 1);

  Eigen::MatrixXd M = Hd;
  if (hsub != 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Hd.transpose());
    if (!lu.isInvertible()) {
      throw std::runtime_error(
          "harmonic_ritz_values: singular projection (GMRES stagnation); "
          "try a different starting vector");
    }
    Eigen::VectorXd ed = Eigen::VectorXd::Zero(d);
    ed[d - 1] = 1.0;
    const Eigen::VectorXd f = lu.solve(ed);
    M.col(d - 1) += (hsub * hsub) * f;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("harmonic_ritz_values: eigensolver failed");
  }
  std::vector<std::complex<double>> out(d);
  for (int i = 0; i < d; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

RitzSet harmonic_restart_selection(const ArnoldiState& state,
                                   RitzOrdering ordering) {
  const int d = state.cur_dim;
  if (d < 1) throw std::invalid_argument("harmonic_restart_selection: empty");

  const Eigen::MatrixXd Hd = state.H.topLeftCorner(d, d);
  const double hsub = state.H(d, d - 1);
  Eigen::MatrixXd M = Hd;
  if (hsub != 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Hd.transpose());
    if (!lu.isInvertible()) {
      throw std::runtime_error(
          "harmonic_restart_selection: singular projection; "
          "try a different starting vector");
    }
    Eigen::VectorXd ed = Eigen::VectorXd::Zero(d);
    ed[d - 1] = 1.0;
    const Eigen::VectorXd f = lu.solve(ed);
    M.col(d - 1) += (hsub * hsub) * f;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("harmonic_restart_selection: eigensolver failed");
  }

  RitzSet set;
  set.ordering = ordering;
  set.harmonic = true;
  set.values.resize(d);
  set.residuals.resize(d);
  set.vectors_h = es.eigenvectors();
  for (int i = 0; i < d; ++i) {
    set.values[i] = es.eigenvalues()[i];
    set.vectors_h.col(i) /= set.vectors_h.col(i).norm();
    // Exact subspace residual: Op Vg - theta Vg = V_{d+1} (Hbar g - theta g~).
    Eigen::VectorXcd top = Hd * set.vectors_h.col(i) -
                           set.values[i] * set.vectors_h.col(i);
    const std::complex<double> last = hsub * set.vectors_h(d - 1, i);
    set.residuals[i] = std::sqrt(top.squaredNorm() + std::norm(last));
  }
  sort_pairs(set.values, set.vectors_h, set.residuals, ordering);
  return set;
}

Eigen::VectorXcd ritz_vector(const ArnoldiState& state, const RitzSet& set,
                             int j, CostRecord& rec) {
  const int d = static_cast<int>(set.vectors_h.rows());
  if (j < 0 || j >= set.count()) {
    throw std::invalid_argument("ritz_vector: index out of range");
  }
  Eigen::VectorXcd y = state.V.leftCols(d) * set.vectors_h.col(j);
  const bool cplx = set.vectors_h.col(j).imag().norm() > 0.0;
  rec.vops += (cplx ? 2 : 1) * d;  // basis combination
  y /= y.norm();
  rec.dots += cplx ? 2 : 1;
  rec.vops += cplx ? 4 : 2;  // norm + scaling, per part
  return y;
}

int thick_restart(ArnoldiState& state, const RitzSet& keep, int k,
                  CostRecord& rec) {
  const int m = state.cur_dim;
  if (m != state.max_dim) {
    throw std::invalid_argument("thick_restart: cycle not at full dimension");
  }
  if (k <= 0 || k >= m) throw std::invalid_argument("thick_restart: bad k");
  if (keep.count() < k) {
    throw std::invalid_argument("thick_restart: selection smaller than k");
  }
  if (state.H(m, m - 1) == 0.0) {
    throw std::runtime_error("thick_restart: no residual vector (breakdown)");
  }

  // Real basis of the selected span: real eigenvectors contribute one
  // column, conjugate pairs contribute (Re g, Im g) and are consumed as
  // a unit.  A pair that would straddle the retention boundary is
  // dropped, temporarily reducing k (to k-1 in the generic case).
  Eigen::MatrixXd G(m, k);
  int col = 0, j = 0;
  while (col < k && j < keep.count()) {
    if (!is_complex(keep.values[j])) {
      G.col(col++) = keep.vectors_h.col(j).real();
      j += 1;
    } else {
      if (col + 2 > k) break;
      G.col(col++) = keep.vectors_h.col(j).real();
      G.col(col++) = keep.vectors_h.col(j).imag();
      j += 2;
    }
  }
  const int kk = col;
  if (kk == 0) throw std::invalid_argument("thick_restart: k too small");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G.leftCols(kk));
  const Eigen::MatrixXd Q =
      qr.householderQ() * Eigen::MatrixXd::Identity(m, kk);

  const Eigen::MatrixXd Hm = state.H.topLeftCorner(m, m);
  Eigen::MatrixXd Hk = Q.transpose() * Hm * Q;
  const Eigen::RowVectorXd hrow = state.H(m, m - 1) * Q.row(m - 1);

  state.V.leftCols(kk) = (state.V.leftCols(m) * Q).eval();
  rec.vops += static_cast<long long>(m) * kk;  // basis compression
  state.V.col(kk) = state.V.col(m);

  // Reorthogonalize the carried residual vector against the new basis
  // and fold the (roundoff-sized) corrections back into H so the
  // factorization stays exact: v = rn*v_new + V_k c implies
  // H_k += c*hrow and the subdiagonal row picks up rn.
  Eigen::VectorXd corr = Eigen::VectorXd::Zero(kk);
  for (int i = 0; i < kk; ++i) {
    const double c = dot(state.V.col(i), state.V.col(kk), rec);
    corr[i] = c;
    axpy(-c, state.V.col(i), state.V.col(kk), rec);
  }
  const double rn = norm(state.V.col(kk), rec);
  scale(state.V.col(kk), 1.0 / rn, rec);
  Hk += corr * hrow;

  state.H.setZero();
  state.H.topLeftCorner(kk, kk) = Hk;
  state.H.row(kk).head(kk) = rn * hrow;
  state.cur_dim = kk;
  state.restart_k = kk;
  ++state.cycle_count;
  return kk;
}

}  // namespace ppa

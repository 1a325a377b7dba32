#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace ppa {

/// Operation counters for one solver run.
///
/// Counting conventions (used consistently by every module):
///  - mvps: applications of the base matrix A.  A degree-d polynomial
///    apply adds d (plus any added roots); the 2n block operator adds 2.
///  - dots: inner products of length n, including norm evaluations.
///  - vops: all length-n vector operations (dots, axpys, scalings).
///    Every dot is also a vop, so vops >= dots.  Plain copies and
///    operations on small (subspace-sized) objects are not counted.
struct CostRecord {
  long long mvps = 0;
  long long dots = 0;
  long long vops = 0;
  double nnzr = 0.0;  // average nonzeros per row; 0 means unset
  double wall_seconds = 0.0;
};

/// cost = nnzr * mvps + vops.  Throws if nnzr was never set.
inline double cost_estimate(const CostRecord& rec) {
  if (rec.nnzr <= 0.0) {
    throw std::invalid_argument("cost_estimate: nnzr is unset");
  }
  return rec.nnzr * static_cast<double>(rec.mvps) +
         static_cast<double>(rec.vops);
}

/// Componentwise sum of two records sharing the same nnzr context.
inline CostRecord merge(const CostRecord& a, const CostRecord& b) {
  if (a.nnzr > 0.0 && b.nnzr > 0.0 && a.nnzr != b.nnzr) {
    throw std::invalid_argument("merge: mismatched nnzr");
  }
  CostRecord out;
  out.mvps = a.mvps + b.mvps;
  out.dots = a.dots + b.dots;
  out.vops = a.vops + b.vops;
  out.nnzr = a.nnzr > 0.0 ? a.nnzr : b.nnzr;
  out.wall_seconds = a.wall_seconds + b.wall_seconds;
  return out;
}

// Counted length-n kernels.  All long-vector arithmetic in the library
// goes through these so that the counters reflect real work.

inline double dot(const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y,
                  CostRecord& rec) {
  ++rec.dots;
  ++rec.vops;
  return x.dot(y);
}

inline double norm(const Eigen::Ref<const Eigen::VectorXd>& x,
                   CostRecord& rec) {
  ++rec.dots;
  ++rec.vops;
  return x.norm();
}

/// y += a*x
inline void axpy(double a, const Eigen::Ref<const Eigen::VectorXd>& x,
                 Eigen::Ref<Eigen::VectorXd> y, CostRecord& rec) {
  ++rec.vops;
  y += a * x;
}

inline void scale(Eigen::Ref<Eigen::VectorXd> x, double a, CostRecord& rec) {
  ++rec.vops;
  x *= a;
}

}  // namespace ppa

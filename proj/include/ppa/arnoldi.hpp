#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "ppa/cost.hpp"
#include "ppa/operators.hpp"

namespace ppa {

/// Basis and projection of a (possibly thick-restarted) Arnoldi
/// factorization Op V_j = V_{j+1} H_{j+1,j}.
///
/// After a restart the leading restart_k x restart_k block of H is full
/// rather than Hessenberg; the relation above still holds columnwise.
struct ArnoldiState {
  Eigen::MatrixXd V;  // n x (max_dim+1) basis columns
  Eigen::MatrixXd H;  // (max_dim+1) x max_dim projection
  int max_dim = 0;    // m
  int cur_dim = 0;    // columns of H currently valid
  int restart_k = 0;  // retained vectors at the last restart
  int cycle_count = 0;
  bool breakdown = false;  // invariant subspace found while extending
};

/// Fresh state of maximum subspace dimension m started from v0
/// (normalized internally; the normalization is counted).
ArnoldiState arnoldi_init(const Eigen::VectorXd& v0, int m, CostRecord& rec);

/// Extends the factorization to subspace dimension to_dim using modified
/// Gram-Schmidt with one reorthogonalization pass per new vector.
/// A breakdown (new vector norm below 1e-14 of the pre-orthogonalization
/// norm) stops the extension and sets state.breakdown; the factorization
/// built so far remains valid.
void arnoldi_extend(ArnoldiState& state, const LinearOperator& op, int to_dim,
                    CostRecord& rec);

enum class RitzOrdering { smallest_magnitude, largest_magnitude, target_one };

/// Eigenpair estimates extracted from the projected matrix.  Vectors are
/// kept in subspace coordinates (columns of vectors_h); materialize the
/// length-n Ritz vector with ritz_vector().  Residual estimates come from
/// the Arnoldi relation and cost no operator applications.
struct RitzSet {
  std::vector<std::complex<double>> values;
  Eigen::MatrixXcd vectors_h;  // cur_dim x count, unit columns
  std::vector<double> residuals;
  RitzOrdering ordering = RitzOrdering::smallest_magnitude;
  bool harmonic = false;

  int count() const { return static_cast<int>(values.size()); }
};

/// Rayleigh-Ritz pairs of the leading square block of H, sorted by the
/// requested ordering (conjugate pairs stay adjacent).
RitzSet ritz_pairs(const ArnoldiState& state, RitzOrdering ordering);

/// Roots of the GMRES residual polynomial: eigenvalues of
/// H_d + h_{d+1,d}^2 f e_d^T with f = H_d^{-*} e_d.  Throws if the
/// leading block is singular (GMRES stagnation).
std::vector<std::complex<double>> harmonic_ritz_values(
    const ArnoldiState& state);

/// Harmonic Ritz pairs of the iterated operator, in the same form as
/// ritz_pairs, for use as a thick-restart keep set.
RitzSet harmonic_restart_selection(const ArnoldiState& state,
                                   RitzOrdering ordering);

/// Unit-norm Ritz vector j in R^n coordinates (counted basis combination).
Eigen::VectorXcd ritz_vector(const ArnoldiState& state, const RitzSet& set,
                             int j, CostRecord& rec);

/// Compresses the factorization onto the span of the first k selected
/// pairs plus the residual vector.  If position k would split a
/// conjugate pair, k is reduced by one for this restart.  Returns the
/// number of vectors actually retained.
int thick_restart(ArnoldiState& state, const RitzSet& keep, int k,
                  CostRecord& rec);

}  // namespace ppa

#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ppa/cost.hpp"

namespace ppa {

/// Sparse matrix in compressed sparse row form.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;   // length n+1
  std::vector<int> col_idx;   // length nnz, strictly increasing per row
  std::vector<double> values;

  long long nnz() const { return static_cast<long long>(values.size()); }
  double nnzr() const { return n > 0 ? double(nnz()) / double(n) : 0.0; }

  /// Checks the structural invariants; throws std::invalid_argument.
  void validate() const;

  /// y = A x (uncounted; use CsrOperator for counted applies).
  void multiply(const Eigen::Ref<const Eigen::VectorXd>& x,
                Eigen::Ref<Eigen::VectorXd> y) const;

  static CsrMatrix from_triplets(int n,
                                 std::vector<std::tuple<int, int, double>> t);
};

/// Known eigenvalue list of a test matrix (conjugate-closed).
struct SpectrumSpec {
  std::vector<std::complex<double>> eigenvalues;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  bool real_only(double tol = 0.0) const;
};

enum class OperatorKind { csr, diagonal, shifted, block2, poly, composite };

/// A counted action v -> Av on real n-vectors.
///
/// Operators are immutable after construction; the CostRecord passed to
/// apply is the single piece of mutable state, owned by the caller.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual int dim() const = 0;
  virtual OperatorKind kind() const = 0;

  /// y = Op x.  Increments rec.mvps by the number of base-matrix
  /// applications this action performs (see mvps_per_apply).
  virtual void apply(const Eigen::Ref<const Eigen::VectorXd>& x,
                     Eigen::Ref<Eigen::VectorXd> y, CostRecord& rec) const = 0;

  /// Base-matrix applications triggered by a single apply.
  virtual int mvps_per_apply() const = 0;

  /// Diagonal entries when the operator is a plain diagonal, else null.
  virtual const std::vector<double>* diagonal() const { return nullptr; }

  /// Average nonzeros per row of the underlying base matrix.
  virtual double nnzr() const = 0;

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x,
                        CostRecord& rec) const {
    Eigen::VectorXd y(dim());
    apply(x, y, rec);
    return y;
  }
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

/// Diagonal operator; spectrum recoverable exactly.
OperatorPtr make_diagonal(std::vector<double> diag_values);

OperatorPtr make_csr_operator(CsrMatrix matrix);

/// 2n-dimensional block-diagonal operator diag(A, A); one apply costs
/// two applications of A.
OperatorPtr make_block2(OperatorPtr a);

/// v -> Av - mu*v.
OperatorPtr make_shifted(OperatorPtr a, double mu);

/// Five-point finite-difference matrix on the unit square (interior
/// grid_n x grid_n points, h = 1/(grid_n+1), homogeneous Dirichlet):
/// -u_xx - u_yy + 20 u_x where y <= 1/2 and
/// -100 u_xx - 100 u_yy + 2000 u_x above, with the convection term
/// discretized by centered differences.  Rows at the coefficient jump
/// take the lower coefficients when y <= 1/2.
CsrMatrix make_convection_diffusion(int grid_n);

/// Matrix Market coordinate reader (real, general or symmetric).
/// Symmetric storage is expanded; indices converted to 0-based.
/// Rejects pattern/integer/complex fields and malformed input.
CsrMatrix read_matrix_market(const std::string& path);

}  // namespace ppa

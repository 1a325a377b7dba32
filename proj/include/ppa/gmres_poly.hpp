#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "ppa/arnoldi.hpp"
#include "ppa/cost.hpp"
#include "ppa/operators.hpp"

namespace ppa {

enum class PolyProvenance { single, damped, two_vector, composite_stage };

/// GMRES residual polynomial pi(z) = prod_i (1 - z/theta_i) in factored
/// form.  Roots are Leja-ordered with conjugate pairs adjacent; added
/// stability copies are tracked via multiplicity.
struct PolyPrecond {
  std::vector<std::complex<double>> roots;  // application order
  std::vector<int> multiplicity;            // copies per stored root
  int base_degree = 0;
  PolyProvenance provenance = PolyProvenance::single;
  double damping_alpha = 0.0;
  int damping_power = 0;
  bool truncated = false;  // breakdown produced a shorter exact polynomial

  int effective_degree() const { return static_cast<int>(roots.size()); }
  int added_roots() const { return effective_degree() - base_degree; }
};

/// Per-root instability diagnostic pof(j) = prod_{i != j} |1 - theta_j/theta_i|
/// over the base (distinct) roots, evaluated in log10 space.
struct PofReport {
  std::vector<double> log10_pof;   // per base root
  std::vector<int> copies_needed;  // extra copies the threshold rule asks for
  double max_log10_pof = 0.0;
  int total_copies = 0;

  double max_pof() const { return std::pow(10.0, max_log10_pof); }
};

/// Runs d Arnoldi steps on A from b (d matrix-vector products), takes the
/// harmonic Ritz values as roots and Leja-orders them.  If the Krylov
/// space closes early the shorter exact polynomial is returned with the
/// truncated flag set.
PolyPrecond build_gmres_poly(const LinearOperator& a, const Eigen::VectorXd& b,
                             int degree, CostRecord& rec);

/// Modified Leja ordering: first root of maximal modulus, then greedy
/// maximization of the sum of log-distances to the chosen roots;
/// a chosen complex root is immediately followed by its conjugate.
std::vector<std::complex<double>> leja_order(
    const std::vector<std::complex<double>>& roots);

/// out = pi(A) v, applied factor by factor in stored order.  Real roots
/// apply v - (Av)/theta; a conjugate pair applies the fused real
/// quadratic v - 2 Re(1/theta) Av + |theta|^{-2} A^2 v.
void apply_poly(const PolyPrecond& p, const LinearOperator& a,
                const Eigen::Ref<const Eigen::VectorXd>& v,
                Eigen::VectorXd& out, CostRecord& rec);

/// Scalar evaluation over the stored roots.
std::complex<double> eval_poly(const PolyPrecond& p, std::complex<double> z);

PofReport compute_pof(const PolyPrecond& p);

/// Appends extra copies of every root whose pof exceeds 1e4, one copy per
/// factor of 1e14 beyond that: the first copy goes to the end of the
/// list, further copies are spaced evenly between the original occurrence
/// and the end.  Conjugate pairs are duplicated together.
/// max_copies_per_root caps the copies added at each root.
PolyPrecond add_stability_roots(const PolyPrecond& p,
                                int max_copies_per_root = 1 << 20);

/// Builds one polynomial from two starting vectors by running GMRES on
/// the 2n block system diag(A, A) with stacked right-hand side; the
/// halves are rescaled to norm 1/sqrt(2) internally.
PolyPrecond build_two_vector_poly(const LinearOperator& a,
                                  const Eigen::VectorXd& b1,
                                  const Eigen::VectorXd& b2, int degree,
                                  CostRecord& rec);

/// Damped GMRES start A^power b + alpha b (alpha used with power 1),
/// normalized; costs `power` matrix-vector products.
Eigen::VectorXd damped_start(const LinearOperator& a, const Eigen::VectorXd& b,
                             double alpha, int power, CostRecord& rec);

/// The preconditioned operator pi(A); one apply costs
/// pi.effective_degree() applications of A's base matrix.
OperatorPtr make_poly_operator(OperatorPtr a, PolyPrecond p);

/// tau(A) = I - pi(A), whose smallest-magnitude eigenvalues correspond to
/// the eigenvalues of A that pi maps nearest 1.
OperatorPtr make_poly_complement_operator(OperatorPtr a, PolyPrecond p);

/// CSV dump (index, Re, Im, multiplicity, pof) of the base roots.
std::string poly_dump_csv(const PolyPrecond& p);

}  // namespace ppa

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ppa/arnoldi.hpp"
#include "ppa/cost.hpp"
#include "ppa/gmres_poly.hpp"
#include "ppa/operators.hpp"
#include "ppa/solver_detail.hpp"

namespace ppa {

enum class RestartVariant { ritz, harmonic };
enum class DampingMode { off, auto_heuristic, forced };
enum class StabilityMode { off, pof_auto };

struct SolveConfig {
  int m = 50;       // largest subspace dimension
  int k = 20;       // vectors retained at restart
  int nev = 15;     // wanted eigenvalues
  int degree = 0;   // preconditioning degree; 0 = none

  // rtol = rtol_multiplier * (norm estimate of A), or rtol_absolute if set.
  double rtol_multiplier = 1e-8;
  std::optional<double> rtol_absolute;

  RestartVariant variant = RestartVariant::ritz;

  DampingMode damping = DampingMode::off;
  double damping_alpha = 0.0;  // forced mode: start A^power b + alpha b
  int damping_power = 1;

  StabilityMode stability = StabilityMode::off;

  int double_d1 = 0;  // solve_double stages
  int double_d2 = 0;

  int max_cycles = 100;
  unsigned long long seed = 1;

  bool check_mid_cycle = false;  // optional early exit inside a cycle
  int mid_cycle_stride = 5;

  // Run until the best max-residual stops improving by stagnation_rtol
  // over stagnation_window cycles instead of until rtol is met.
  bool stagnation_stop = false;
  int stagnation_window = 5;
  double stagnation_rtol = 0.01;

  // Optional reference eigenvalues; fills EigResult::correct_count.
  std::vector<std::complex<double>> reference;

  void validate() const;
};

struct CycleStats {
  int cycle = 0;
  bool discarded_probe = false;  // heuristic probe whose basis was dropped
  int start_dim = 0;
  int end_dim = 0;
  int restart_k = 0;  // vectors kept when this cycle was compressed (0: none)
  int real_checks = 0;
  int pair_checks = 0;
  double max_residual = 0.0;
};

struct EigResult {
  std::vector<std::complex<double>> eigenvalues;  // Rayleigh quotients for A
  std::vector<Eigen::VectorXcd> eigenvectors;     // unit norm
  std::vector<double> residuals;                  // true residuals w.r.t. A
  std::vector<bool> converged_flags;
  bool converged = false;
  int cycles = 0;
  CostRecord cost;
  std::optional<PolyPrecond> poly;        // preconditioner in effect
  std::optional<PolyPrecond> inner_poly;  // first stage of a double run
  int composite_degree = 0;
  double rtol = 0.0;
  double max_err = 0.0;  // best attained max residual over the nev pairs
  std::vector<CycleStats> history;
  int correct_count = -1;  // vs reference list, -1 when no reference

  int count_correct(const std::vector<std::complex<double>>& reference,
                    double rel_tol = 1e-6) const;
};

/// Builds the preconditioner (per cfg), runs thick-restarted Arnoldi on
/// pi(A) (or A when degree = 0), tests convergence each cycle through
/// Rayleigh quotients and true residuals against A.
EigResult solve(const OperatorPtr& a, const SolveConfig& cfg);

/// Ideal order condition: |mu_1| <= ... <= |mu_nev| and strictly below
/// the smallest remaining magnitude.  With nev = mu.size() the buffer is
/// empty and only monotonicity is required.
bool check_ideal_order(const std::vector<std::complex<double>>& mu, int nev);

/// The damping loop: probe one Arnoldi(m,k) cycle on pi(A); on an ideal
/// order failure rebuild pi from the start vector Ab, then keep halving
/// the degree until the probe passes (or degree 1).  Probe costs are
/// recorded in rec.
PolyPrecond damping_heuristic(const OperatorPtr& a, const SolveConfig& cfg,
                              CostRecord& rec);

/// Two-stage preconditioning: pi1 of degree d1 for A, tau = I - pi1(A),
/// pi2 of degree d2 for tau(A); Arnoldi runs on pi2(tau(A)) and
/// convergence is still tested against A.
EigResult solve_double(const OperatorPtr& a, const SolveConfig& cfg);

/// Norm estimate used for the relative convergence tolerance: max |d_i|
/// for diagonal operators, otherwise a short counted power iteration.
double operator_norm_estimate(const LinearOperator& a, unsigned long long seed,
                              CostRecord& rec);

}  // namespace ppa

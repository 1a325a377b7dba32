#pragma once

// Internal solver bookkeeping shared with the test suites: the audit
// fields let a test recompute every counter from the structural log.

#include <vector>

namespace ppa {

struct SolveAudit {
  // mvps charged outside Arnoldi cycles, in order of occurrence
  // (norm estimate, polynomial constructions, damped starts).
  std::vector<int> setup_mvp_events;
  // Arnoldi steps actually taken by each polynomial construction.
  std::vector<int> built_degrees;
  // base-matrix applications per iterated-operator apply
  int iterated_mvps_per_apply = 1;
  // arnoldi_init invocations (each normalizes its start vector)
  int states_initialized = 0;
  // power-iteration steps spent on the norm estimate (0 for diagonal)
  int norm_estimate_steps = 0;
};

}  // namespace ppa

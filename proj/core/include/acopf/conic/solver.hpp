#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acopf/conic/program.hpp"

namespace acopf::conic {

struct SolveSettings {
  int max_iters = 100;
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  bool verbose = false;       // iteration log to stderr
  bool record_trace = false;  // keep per-iteration stats in the outcome
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, IterLimit, NumericalFailure };

std::string to_string(SolveStatus status);

struct IterateInfo {
  double pcost = 0, dcost = 0;
  double pres = 0, dres = 0;
  double gap = 0, mu = 0;
  double tau = 0, kappa = 0;
  double step = 0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  Eigen::VectorXd x;  // primal solution (already de-homogenized)
  Eigen::VectorXd y;  // equality duals
  Eigen::VectorXd z;  // cone duals
  Eigen::VectorXd s;  // cone slacks, D x + e
  double obj = 0.0;   // objective' x + objective_constant

  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rel_gap = 0.0;
  int iterations = 0;
  double wall_time = 0.0;  // seconds around the solve

  // Farkas certificates. PrimalInfeasible: (ray_y, ray_z) with
  // A' ray_y + D' ray_z = 0, ray_z in K*, b' ray_y + (-e)' ray_z = -1... see README.
  // DualInfeasible: ray_x with A ray_x = 0, D ray_x in K, objective' ray_x = -1.
  Eigen::VectorXd ray_x, ray_y, ray_z;

  std::vector<IterateInfo> trace;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

// Bundled homogeneous self-dual interior-point solver (Nesterov-Todd scaling,
// Mehrotra predictor-corrector, sparse quasi-definite KKT with static
// regularization 1e-8 and one iterative refinement step). Deterministic:
// identical program and settings give an identical iterate sequence.
SolveOutcome solve(const Program& prog, const SolveSettings& settings = {});

// --- pluggable backends ------------------------------------------------------

using Backend = std::function<SolveOutcome(const Program&, const SolveSettings&)>;

// Registers an external solve routine; throws std::invalid_argument on a
// duplicate name. "bundled" is pre-registered.
void register_backend(const std::string& name, Backend backend);
bool has_backend(const std::string& name);
std::vector<std::string> backend_names();

// Dispatches to a registered backend; throws std::invalid_argument for an
// unknown name, listing the registered ones.
SolveOutcome solve_with(const std::string& name, const Program& prog,
                        const SolveSettings& settings = {});

// Number of solves dispatched through solve_with since process start.
std::uint64_t solve_dispatch_count();

// Backend that shells out to `command <program-dump> <solution-file>`, e.g. a
// Python process wrapping another solver. The solution file carries status,
// objective and the primal vector (format documented in the README).
Backend make_command_backend(const std::string& command);

}  // namespace acopf::conic

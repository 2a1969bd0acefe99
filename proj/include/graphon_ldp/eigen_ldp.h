#ifndef GRAPHON_LDP_EIGEN_LDP_H_
#define GRAPHON_LDP_EIGEN_LDP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphon_ldp/graphon.h"
#include "graphon_ldp/spectral.h"
#include "graphon_ldp/square_matrix.h"

namespace graphon_ldp {

struct ReferenceConstants {
  double c_r = 0.0;  // ||T_r||
  double b_r = 0.0;  // integral of r^3 (1 - r)
  double k_r = 0.0;  // c_r^2 / (2 b_r)
};

// Throws kInvalidReference / kDegenerateReference.
ReferenceConstants ComputeConstants(const Graphon& r);

// Delta = (C_r / B_r) r^2 (1 - r), the minimiser of integral Delta^2/(2r(1-r))
// subject to integral r Delta = C_r.
SquareMatrix OptimalPerturbation(const Graphon& r);
SquareMatrix OptimalPerturbation(const Graphon& r, const ReferenceConstants& constants);

struct SecondOrderCost {
  double exact = 0.0;
  double quadratic_approx = 0.0;
};

// exact = I_r(r + eps^alpha Delta); quadratic_approx =
// (1/2) eps^(2 alpha) integral Delta^2 / (r (1 - r)). Throws kDomain if the
// perturbed field leaves [0, 1].
SecondOrderCost ComputeSecondOrderCost(const Graphon& r, const SquareMatrix& delta,
                                       double eps, double alpha);

// Upper-triangle parameterisation used by the solver: x holds h(i, j) for
// i <= j in row-major order. Off-diagonal entries stand for two cells.
std::size_t UpperTriangleSize(std::size_t m);
std::vector<double> PackUpperTriangle(const SquareMatrix& a);
SquareMatrix UnpackUpperTriangle(std::span<const double> x, std::size_t m);

// Gradient of I_r with respect to the packed variables:
// (2 - [i=j]) / m^2 * (logit h_ij - logit r_ij).
std::vector<double> RateGradient(const Graphon& h, const Graphon& r);

// Gradient of ||T_h|| with respect to the packed variables:
// (2 - [i=j]) v_i v_j / m for the unit Perron vector v.
std::vector<double> OperatorNormGradient(const Graphon& h);
std::vector<double> OperatorNormGradient(const KernelNorm& top, std::size_t m);

enum class SolveStatus {
  kConverged,
  kInfinite,  // beta outside [0, 1]: psi = +inf
  kNotConverged,
};

std::string SolveStatusName(SolveStatus status);

struct SolverTraceEntry {
  int start = 0;       // which initialisation
  int outer = 0;       // augmented-Lagrangian outer iteration
  int iteration = 0;   // inner iteration within this outer iteration
  double objective = 0.0;
  double residual = 0.0;
  double merit = 0.0;  // augmented Lagrangian at fixed (multiplier, penalty)
};

struct PsiSolveOptions {
  std::uint64_t seed = 0;
  bool use_rescaled_start = true;
  bool use_delta_start = true;
  bool use_random_start = true;
  double clamp = 1e-9;
  int max_outer_iterations = 60;
  int max_inner_iterations = 400;
  int lbfgs_memory = 12;
  double initial_penalty = 10.0;
  double max_penalty = 1e6;
  // Outer loop stops once the constraint residual is below this.
  double target_residual = 1e-11;
  // Inner loop stops once m^2 * ||projected gradient||_inf is below this.
  double inner_tolerance = 1e-10;
  // A start is accepted if its final residual is at most this.
  double accept_residual = 1e-5;
  double degeneracy_gap = 1e-8;
};

struct SolverResult {
  Graphon h_opt = Graphon::Constant(1, 0.0);
  double psi = 0.0;
  double beta = 0.0;
  double constraint_residual = 0.0;
  double multiplier = 0.0;
  SolveStatus status = SolveStatus::kNotConverged;
  int start = -1;
  std::string start_name;
  std::vector<SolverTraceEntry> trace;
};

// psi_r(beta) = inf { I_r(h) : ||T_h|| = beta } over symmetric grid graphons
// with cells in [clamp, 1 - clamp], by an augmented Lagrangian method with a
// projected L-BFGS inner solver. Runs up to three initialisations (r rescaled
// to norm beta, r + (beta - C_r) Delta, and a seeded random feasible point)
// and returns the converged one with the smallest psi. beta outside [0, 1]
// yields status kInfinite and psi = +inf.
SolverResult PsiSolve(const Graphon& r, double beta, const PsiSolveOptions& options = {});

struct ScalingRow {
  double eps = 0.0;
  double psi = 0.0;
  double ratio = 0.0;          // psi / (K_r eps^2)
  double minimizer_dir = 0.0;  // ||h_beta - r - eps Delta||_2 / eps
  double residual = 0.0;
  SolveStatus status = SolveStatus::kNotConverged;
  std::string error;           // non-empty if the solve threw
};

struct ScalingReport {
  ReferenceConstants constants;
  std::vector<ScalingRow> rows;
};

// True iff r's values are a rank-one outer product up to relative tolerance.
bool IsRankOne(const Graphon& r, double tolerance = 1e-9);

// Solves psi at beta = C_r + eps for every eps. Rows are independent and run
// in parallel; a failing row is flagged and the rest continue. Throws
// kInvalidArgument unless r is rank one.
ScalingReport ScalingExperiment(const Graphon& r, const std::vector<double>& eps_list,
                                const PsiSolveOptions& options = {});

// |I_{rbar_k}(fbar_k) - I_r(f)| for each k (each k must divide m).
std::vector<double> RateApproxConvergence(const Graphon& r, const Graphon& f,
                                          const std::vector<std::size_t>& k_list);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_EIGEN_LDP_H_

#pragma once

#include <span>
#include <vector>

namespace interleave {

/// Correctness-preserving reward shaping.
///
/// Finds the rewards R closest (in squared L2) to the structure scores S
/// such that every correct sample sits at least `margin` above the group
/// mean of R and every incorrect one at least `margin` below it:
///
///   min  sum_i (R_i - S_i)^2
///   s.t. R_i - mean(R) >= margin   (label 1)
///        R_i - mean(R) <= -margin  (label 0)
///
/// The constraints only see R - mean(R), so the optimum keeps mean(R) =
/// mean(S) and the deviations D = R - mean(S) solve a projection onto
/// {sum D = 0} intersected with one-sided bounds. That projection is
/// D_i = clamp(T_i - nu) with T = S - mean(S) and a scalar nu; the solver
/// walks the sorted breakpoints of nu, where each interval fixes the active
/// set, and solves the resulting linear equation exactly.
///
/// Throws Infeasible when labels are homogeneous (summing the constraints
/// contradicts sum(R - mean R) = 0), NumericalFailure when the KKT residual
/// of the result exceeds `kkt_tol`. A score vector that already satisfies
/// the constraints is returned unchanged.
std::vector<double> shape_rewards_qp(std::span<const double> scores, std::span<const int> labels,
                                     double margin, double kkt_tol = 1e-6);

/// Largest violation among primal feasibility, stationarity, dual
/// feasibility and complementary slackness. Constraints within `active_tol`
/// of their bound are treated as active.
double kkt_residual(std::span<const double> rewards, std::span<const double> scores,
                    std::span<const int> labels, double margin, double active_tol);

/// kkt_residual(...) <= tol.
bool verify_kkt(std::span<const double> rewards, std::span<const double> scores,
                std::span<const int> labels, double margin, double tol);

}  // namespace interleave

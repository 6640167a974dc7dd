#pragma once

// Fractional-programming solver: a Dinkelbach outer loop drives the ratio
// parameter alpha, and each parameterized difference problem
//   min (1+||Eve||^2) - alpha (1+||Bob||^2)  s.t. constant moduli
// is minimized by block successive upper-bound minimization with
// closed-form per-block updates.

#include <cstdint>
#include <utility>
#include <vector>

#include "secbeam/objective.hpp"
#include "secbeam/report.hpp"

namespace secbeam {

struct DinkelbachOptions {
    double inner_tol = 1e-6;  // absolute |delta f| stop of the BSUM loop
    double outer_tol = 1e-6;  // absolute |delta alpha| stop
    int inner_cap = 500;
    int outer_cap = 50;
};

/// Ratio update of the outer loop; equals fractional_objective.
double update_alpha(const ChannelSet& ch, const BeamformerState& s, double noise_power);

/// Closed-form minimizer of the majorized w block:
///   w = P exp(j arg((lambda_max(A) I - A) w_k)).
/// Entries whose argument falls below the zero-argument threshold keep the
/// phase of w_k. Never increases w^H A w.
CVec bsum_w_step(const CMat& A, const CVec& w_k, double P);

/// Closed-form minimizer of the majorized theta block:
///   theta = exp(j arg((lambda_max(P) I - P) theta_k - (d* - alpha f*))).
/// Same zero-argument rule; never increases the quadratic surrogate.
CVec bsum_theta_step(const ThetaQuadratics& tq, const CVec& theta_k, double alpha);

/// BSUM loop for a fixed alpha: w block then theta block, one pass per
/// iteration, stop on |delta f| < tol or the cap. Returns the final state
/// and the non-increasing history of the difference objective (initial
/// value first).
std::pair<BeamformerState, std::vector<double>> bsum_solve(const ChannelSet& ch, double alpha,
                                                           const BeamformerState& init,
                                                           double tol, int max_iter,
                                                           double noise_power);

/// Full Dinkelbach loop from a feasible initial point. The report carries
/// the non-increasing alpha history, the per-outer-iteration inner
/// histories and the final clamped secrecy rate.
SolveReport dinkelbach_solve(const ChannelSet& ch, const BeamformerState& init,
                             const DinkelbachOptions& opts, double noise_power);

/// Variant that never touches theta (used by the fixed-surface baselines):
/// only the w block runs, with A rebuilt from the effective channels at the
/// initial theta.
SolveReport dinkelbach_solve_w_only(const ChannelSet& ch, const BeamformerState& init,
                                    const DinkelbachOptions& opts, double noise_power);

}  // namespace secbeam

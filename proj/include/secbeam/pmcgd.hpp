#pragma once

// Conjugate gradient descent on the product of constant-modulus circle
// manifolds: tangent projection, vector transport by re-projection,
// Polak-Ribiere (nonnegative) conjugacy, Armijo backtracking and entrywise
// renormalizing retraction.

#include "secbeam/objective.hpp"
#include "secbeam/report.hpp"

namespace secbeam {

/// A tangent direction at some product-manifold point: Re(xi_w,i w_i*) = 0
/// and Re(xi_theta,j theta_j*) = 0 per entry.
struct TangentVector {
    CVec w;
    CVec theta;
};

struct CgdParams {
    double armijo_sufficient_decrease = 1e-4;
    double armijo_contraction = 0.5;
    double armijo_initial_step = 1.0;  // scaled by 1/||d|| before the first trial
    int max_backtracks = 50;
    double tol = 1e-6;  // absolute |delta f| stop
    int max_iter = 2000;
};

/// Product-manifold metric: Re(a_w^H b_w) + Re(a_theta^H b_theta).
double inner(const TangentVector& a, const TangentVector& b);
double norm(const TangentVector& v);

/// Removes the per-entry radial components. The w component divides the
/// radial coefficient by P^2 so the projection is idempotent for any
/// amplitude, not just P = 1.
TangentVector project_tangent(const BeamformerState& s, const CVec& ambient_w,
                              const CVec& ambient_theta);

/// Tangent projection of the Euclidean gradients at s.
TangentVector riemannian_grad(const ChannelSet& ch, const BeamformerState& s,
                              double noise_power);

/// Re-projects a tangent vector at `from` into the tangent space at `to`
/// (same subtraction form as project_tangent).
TangentVector transport(const BeamformerState& from, const BeamformerState& to,
                        const TangentVector& tv);

/// Nonnegative Polak-Ribiere coefficient
///   max(0, <g_new, g_new - g_old_transported> / ||g_old_transported||^2),
/// 0 when the old gradient vanishes (restart).
double polak_ribiere(const TangentVector& g_new, const TangentVector& g_old_transported);

/// Entrywise renormalization back onto the manifold:
///   w_i' = P (w_i + beta d_i)/|w_i + beta d_i|, theta analogous.
/// beta = 0 returns s unchanged; an entry whose argument vanishes keeps the
/// previous entry.
BeamformerState retract(const BeamformerState& s, const TangentVector& d, double beta);

/// Backtracking Armijo search along d from s: returns the first
/// beta = beta0 * contraction^k with
///   f(retract(s, d, beta)) <= f(s) + c_dec * beta * 2 Re<grad f, d>,
/// or 0 when d is not a descent direction or the backtrack cap is hit
/// (the caller restarts).
double armijo_step(const ChannelSet& ch, const BeamformerState& s, const TangentVector& d,
                   const CgdParams& params, double noise_power);

/// Full conjugate-gradient run from a feasible initial point. The
/// objective history is non-increasing; gradient norms are recorded per
/// iteration and the final one is reported.
SolveReport pmcgd_solve(const ChannelSet& ch, const BeamformerState& init,
                        const CgdParams& params, double noise_power);

}  // namespace secbeam

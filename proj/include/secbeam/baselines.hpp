#pragma once

// Comparison baselines (fixed random surface phases, no surface at all)
// and exhaustive phase-grid oracles for certifying the solvers on tiny
// instances.

#include <cstdint>
#include <utility>

#include "secbeam/dinkelbach_bsum.hpp"

namespace secbeam {

/// Raised when an oracle's size guard refuses the instance.
struct GuardError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Surface phases drawn uniformly (seeded) and held fixed; the beamformer
/// alone is optimized by the w-only Dinkelbach-BSUM. The seed also drives
/// the beamformer start.
SolveReport random_irs_solve(const ChannelSet& ch, uint64_t seed, double P,
                             const DinkelbachOptions& opts, double noise_power);

/// Same, keeping init.theta as the (already random) surface draw so all
/// benchmark methods share one initial point.
SolveReport random_irs_solve(const ChannelSet& ch, const BeamformerState& init,
                             const DinkelbachOptions& opts, double noise_power);

/// Surface links zeroed; w optimized on the direct channels only. The
/// parameter-only overload starts from the all-(P+0j) beamformer.
SolveReport no_irs_solve(const ChannelSet& ch, double P, const DinkelbachOptions& opts,
                         double noise_power);
SolveReport no_irs_solve(const ChannelSet& ch, const BeamformerState& init,
                         const DinkelbachOptions& opts, double noise_power);

/// Exhaustive minimization of the fractional objective over `levels`
/// phases per entry. The objective is invariant to a common phase on w, so
/// w_0 is pinned to phase 0. Guard: M + N_i <= 5 and levels^(M+N_i) <= 1e8.
std::pair<BeamformerState, double> grid_oracle(const ChannelSet& ch, double P, int levels,
                                               double noise_power);

/// Grid minimum of Re(w^H c) over per-entry phase grids of modulus P
/// (separable, so exact per entry). Certifies the closed-form block steps:
/// the continuous minimum is -P sum|c_i| and the grid trails it by at most
/// (1 - cos(pi/levels)) P sum|c_i|.
double linear_subproblem_oracle(const CVec& c, double P, int levels);

}  // namespace secbeam

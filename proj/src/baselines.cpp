#include "secbeam/baselines.hpp"

#include <cmath>
#include <limits>

#include "secbeam/rng.hpp"

namespace secbeam {

namespace {

enum : uint64_t { kThetaStream = 0x7261693d, kWStream = 0x77696e69 };

}  // namespace

SolveReport random_irs_solve(const ChannelSet& ch, uint64_t seed, double P,
                             const DinkelbachOptions& opts, double noise_power) {
    const int M = ch.H_ab.cols;
    const int n_i = ch.H_ai.rows;
    BeamformerState init;
    init.w.resize(M);
    init.theta.resize(n_i);
    Rng rw(derive_stream(seed, kWStream));
    Rng rt(derive_stream(seed, kThetaStream));
    for (cplx& wi : init.w) wi = std::polar(P, rw.uniform_angle());
    for (cplx& tj : init.theta) tj = rt.unit_phase();
    SolveReport rep = random_irs_solve(ch, init, opts, noise_power);
    rep.seed = seed;
    return rep;
}

SolveReport random_irs_solve(const ChannelSet& ch, const BeamformerState& init,
                             const DinkelbachOptions& opts, double noise_power) {
    SolveReport rep = dinkelbach_solve_w_only(ch, init, opts, noise_power);
    rep.method = Method::random_irs;
    return rep;
}

SolveReport no_irs_solve(const ChannelSet& ch, double P, const DinkelbachOptions& opts,
                         double noise_power) {
    BeamformerState init;
    init.w.assign(ch.H_ab.cols, cplx(P, 0.0));
    init.theta.assign(ch.H_ai.rows, cplx(1.0, 0.0));
    return no_irs_solve(ch, init, opts, noise_power);
}

SolveReport no_irs_solve(const ChannelSet& ch, const BeamformerState& init,
                         const DinkelbachOptions& opts, double noise_power) {
    ChannelSet cut = ch;
    cut.H_ib = CMat(ch.H_ib.rows, ch.H_ib.cols);
    cut.H_ie = CMat(ch.H_ie.rows, ch.H_ie.cols);
    SolveReport rep = dinkelbach_solve_w_only(cut, init, opts, noise_power);
    rep.method = Method::no_irs;
    return rep;
}

std::pair<BeamformerState, double> grid_oracle(const ChannelSet& ch, double P, int levels,
                                               double noise_power) {
    const int M = ch.H_ab.cols;
    const int n_i = ch.H_ai.rows;
    if (levels < 1) throw InvalidInputError("grid_oracle: levels must be >= 1");
    if (M + n_i > 5) throw GuardError("grid_oracle: M + N_i exceeds 5");
    if (std::pow(static_cast<double>(levels), M + n_i) > 1e8)
        throw GuardError("grid_oracle: levels^(M+N_i) exceeds 1e8");

    const ObjectiveWorkspace ws(ch, noise_power);
    std::vector<cplx> phase(levels);
    for (int k = 0; k < levels; ++k) phase[k] = std::polar(1.0, 2.0 * M_PI * k / levels);

    // w_0 pinned to phase 0 (global-phase invariance of the objective).
    const int dims = (M - 1) + n_i;
    std::vector<int> idx(dims, 0);
    CVec w(M), theta(n_i);
    w[0] = P;

    BeamformerState best;
    double best_f = std::numeric_limits<double>::infinity();
    bool done = false;
    while (!done) {
        for (int i = 0; i < M - 1; ++i) w[i + 1] = P * phase[idx[i]];
        for (int j = 0; j < n_i; ++j) theta[j] = phase[idx[M - 1 + j]];
        const double f = ws.value(w, theta);
        if (f < best_f) {
            best_f = f;
            best.w = w;
            best.theta = theta;
        }
        // odometer
        done = true;
        for (int dstep = 0; dstep < dims; ++dstep) {
            if (++idx[dstep] < levels) {
                done = false;
                break;
            }
            idx[dstep] = 0;
        }
        if (dims == 0) break;
    }
    return {std::move(best), best_f};
}

double linear_subproblem_oracle(const CVec& c, double P, int levels) {
    if (c.size() > 8) throw InvalidInputError("linear_subproblem_oracle: length exceeds 8");
    if (levels < 1) throw InvalidInputError("linear_subproblem_oracle: levels must be >= 1");
    double total = 0.0;
    for (const cplx& ci : c) {
        double entry_min = std::numeric_limits<double>::infinity();
        for (int k = 0; k < levels; ++k) {
            const double phi = 2.0 * M_PI * k / levels;
            // Re(conj(P e^{j phi}) c_i)
            const double val = P * (std::cos(phi) * ci.real() + std::sin(phi) * ci.imag());
            entry_min = std::min(entry_min, val);
        }
        total += entry_min;
    }
    return total;
}

}  // namespace secbeam

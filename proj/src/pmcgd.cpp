#include "secbeam/pmcgd.hpp"

#include <cmath>
#include <utility>

namespace secbeam {

double inner(const TangentVector& a, const TangentVector& b) {
    if (a.w.size() != b.w.size() || a.theta.size() != b.theta.size())
        throw InvalidInputError("inner: tangent dimensions differ");
    double acc = 0.0;
    for (size_t i = 0; i < a.w.size(); ++i)
        acc += a.w[i].real() * b.w[i].real() + a.w[i].imag() * b.w[i].imag();
    for (size_t j = 0; j < a.theta.size(); ++j)
        acc += a.theta[j].real() * b.theta[j].real() + a.theta[j].imag() * b.theta[j].imag();
    return acc;
}

double norm(const TangentVector& v) { return std::sqrt(inner(v, v)); }

TangentVector project_tangent(const BeamformerState& s, const CVec& ambient_w,
                              const CVec& ambient_theta) {
    if (ambient_w.size() != s.w.size() || ambient_theta.size() != s.theta.size())
        throw InvalidInputError("project_tangent: dimension mismatch");
    const double P = amplitude_of(s);
    const double inv_p2 = 1.0 / (P * P);
    TangentVector xi;
    xi.w.resize(s.w.size());
    xi.theta.resize(s.theta.size());
    for (size_t i = 0; i < s.w.size(); ++i) {
        const double radial = (ambient_w[i] * std::conj(s.w[i])).real() * inv_p2;
        xi.w[i] = ambient_w[i] - radial * s.w[i];
    }
    for (size_t j = 0; j < s.theta.size(); ++j) {
        const double radial = (ambient_theta[j] * std::conj(s.theta[j])).real();
        xi.theta[j] = ambient_theta[j] - radial * s.theta[j];
    }
    return xi;
}

TangentVector riemannian_grad(const ChannelSet& ch, const BeamformerState& s,
                              double noise_power) {
    validate_feasible(s);
    const ObjectiveWorkspace ws(ch, noise_power);
    CVec gw, gt;
    ws.euclid_grad(s, gw, gt);
    return project_tangent(s, gw, gt);
}

TangentVector transport(const BeamformerState& from, const BeamformerState& to,
                        const TangentVector& tv) {
    if (tv.w.size() != from.w.size() || tv.theta.size() != from.theta.size())
        throw InvalidInputError("transport: tangent dimension mismatch");
    return project_tangent(to, tv.w, tv.theta);
}

double polak_ribiere(const TangentVector& g_new, const TangentVector& g_old_transported) {
    const double denom = inner(g_old_transported, g_old_transported);
    if (denom == 0.0) return 0.0;
    const double num = inner(g_new, g_new) - inner(g_new, g_old_transported);
    return std::max(0.0, num / denom);
}

BeamformerState retract(const BeamformerState& s, const TangentVector& d, double beta) {
    if (d.w.size() != s.w.size() || d.theta.size() != s.theta.size())
        throw InvalidInputError("retract: tangent dimension mismatch");
    if (beta == 0.0) return s;
    const double P = amplitude_of(s);
    CVec xw(s.w.size()), xt(s.theta.size());
    for (size_t i = 0; i < s.w.size(); ++i) xw[i] = s.w[i] + beta * d.w[i];
    for (size_t j = 0; j < s.theta.size(); ++j) xt[j] = s.theta[j] + beta * d.theta[j];
    BeamformerState out;
    out.w = phase_project(xw, P, s.w);
    out.theta = s.theta.empty() ? CVec{} : phase_project(xt, 1.0, s.theta);
    return out;
}

namespace {

struct LineSearchResult {
    double beta = 0.0;
    BeamformerState state;  // retract(s, d, beta) for the accepted beta
    double f = 0.0;
    int evals = 0;
};

// Backtracking Armijo search. The first trial step moves by
// min(armijo_initial_step, 2 * warm_step) in ambient norm; warm_step <= 0
// disables the warm start. After the first accepted step, contraction
// continues while it still lowers f: a barely-sufficient overshoot makes
// the next gradient anti-parallel to this one, which defeats the
// Polak-Ribiere update, so the accepted point is pushed toward the 1-D
// minimizer instead. Every returned beta still satisfies the Armijo bound
// (shrinking beta only loosens it).
LineSearchResult armijo_impl(const ObjectiveWorkspace& ws, const BeamformerState& s,
                             const TangentVector& d, double slope, double f0,
                             const CgdParams& params, double warm_step = 0.0) {
    LineSearchResult res;
    if (!(slope < 0.0)) return res;  // not a descent direction
    const double dn = norm(d);
    if (!(dn > 0.0)) return res;
    double step = params.armijo_initial_step;
    if (warm_step > 0.0) step = std::min(step, 2.0 * warm_step);
    double beta = step / dn;
    for (int k = 0; k <= params.max_backtracks; ++k) {
        BeamformerState cand = retract(s, d, beta);
        const double f = ws.value(cand);
        ++res.evals;
        if (f <= f0 + params.armijo_sufficient_decrease * beta * slope) {
            res.beta = beta;
            res.state = std::move(cand);
            res.f = f;
            while (res.evals <= params.max_backtracks + 1) {
                const double beta_next = res.beta * params.armijo_contraction;
                BeamformerState refine = retract(s, d, beta_next);
                const double f_next = ws.value(refine);
                ++res.evals;
                if (!(f_next < res.f)) break;
                res.beta = beta_next;
                res.state = std::move(refine);
                res.f = f_next;
            }
            return res;
        }
        beta *= params.armijo_contraction;
    }
    return res;  // cap hit: beta stays 0, caller restarts
}

TangentVector negate(const TangentVector& v) {
    TangentVector r = v;
    for (cplx& z : r.w) z = -z;
    for (cplx& z : r.theta) z = -z;
    return r;
}

}  // namespace

double armijo_step(const ChannelSet& ch, const BeamformerState& s, const TangentVector& d,
                   const CgdParams& params, double noise_power) {
    validate_feasible(s);
    const ObjectiveWorkspace ws(ch, noise_power);
    const TangentVector g = riemannian_grad(ch, s, noise_power);
    const double slope = 2.0 * inner(g, d);
    const double f0 = ws.value(s);
    return armijo_impl(ws, s, d, slope, f0, params).beta;
}

SolveReport pmcgd_solve(const ChannelSet& ch, const BeamformerState& init,
                        const CgdParams& params, double noise_power) {
    validate_feasible(init);
    const ObjectiveWorkspace ws(ch, noise_power);
    auto rgrad = [&](const BeamformerState& st) {
        CVec gw, gt;
        ws.euclid_grad(st, gw, gt);
        return project_tangent(st, gw, gt);
    };

    SolveReport rep;
    rep.method = Method::pmcgd;

    BeamformerState s = init;
    TangentVector g = rgrad(s);
    double f = ws.value(s);
    double gnorm = norm(g);
    rep.objective_history = {f};
    rep.grad_norm_history = {gnorm};

    BeamformerState s_prev;
    TangentVector g_prev, d_prev;
    bool have_prev = false;
    double warm_step = 0.0;  // accepted ambient step length of the previous iteration
    rep.termination = Termination::max_iter;

    for (int k = 0; k < params.max_iter; ++k) {
        if (gnorm * gnorm <= 1e-28) {  // numerically stationary
            rep.termination = Termination::converged;
            break;
        }

        TangentVector d;
        bool steepest = true;
        if (have_prev) {
            const TangentVector g_old_t = transport(s_prev, s, g_prev);
            const double sigma = polak_ribiere(g, g_old_t);
            const TangentVector d_old_t = transport(s_prev, s, d_prev);
            d.w.resize(g.w.size());
            d.theta.resize(g.theta.size());
            for (size_t i = 0; i < g.w.size(); ++i) d.w[i] = -g.w[i] + sigma * d_old_t.w[i];
            for (size_t j = 0; j < g.theta.size(); ++j)
                d.theta[j] = -g.theta[j] + sigma * d_old_t.theta[j];
            steepest = false;
            if (2.0 * inner(g, d) >= -1e-14) {  // lost the descent property: restart
                d = negate(g);
                steepest = true;
            }
        } else {
            d = negate(g);
        }

        double slope = 2.0 * inner(g, d);
        LineSearchResult ls = armijo_impl(ws, s, d, slope, f, params, warm_step);
        rep.inner_iters += ls.evals;
        if (ls.beta == 0.0 && !steepest) {
            d = negate(g);
            slope = 2.0 * inner(g, d);
            ls = armijo_impl(ws, s, d, slope, f, params, warm_step);
            rep.inner_iters += ls.evals;
        }
        if (ls.beta == 0.0) {  // even steepest descent makes no progress
            rep.termination = Termination::stalled;
            break;
        }
        warm_step = ls.beta * norm(d);

        s_prev = std::move(s);
        g_prev = std::move(g);
        d_prev = std::move(d);
        have_prev = true;
        s = std::move(ls.state);
        g = rgrad(s);
        gnorm = norm(g);
        const double f_next = ls.f;
        rep.objective_history.push_back(f_next);
        rep.grad_norm_history.push_back(gnorm);
        rep.outer_iters = k + 1;
        const double delta = f - f_next;
        f = f_next;
        if (std::abs(delta) < params.tol) {
            rep.termination = Termination::converged;
            break;
        }
    }

    rep.final_grad_norm = gnorm;
    rep.final_objective = f;
    rep.secrecy_rate_bits = secrecy_rate(ch, s, noise_power);
    rep.final_state = std::move(s);
    return rep;
}

}  // namespace secbeam

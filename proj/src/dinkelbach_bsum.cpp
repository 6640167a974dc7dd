#include "secbeam/dinkelbach_bsum.hpp"

#include <cmath>
#include <utility>

namespace secbeam {

double update_alpha(const ChannelSet& ch, const BeamformerState& s, double noise_power) {
    validate_feasible(s);
    return fractional_objective(ch, s, noise_power);
}

namespace {

// y += c * X^H (X x); tmp holds X x between the passes.
void accumulate_gram_apply(const CMat& X, const CVec& x, double c, CVec& y, CVec& tmp) {
    tmp.assign(X.rows, cplx(0.0, 0.0));
    for (int r = 0; r < X.rows; ++r) {
        const cplx* row = &X.a[static_cast<size_t>(r) * X.cols];
        cplx acc = 0.0;
        for (int j = 0; j < X.cols; ++j) acc += row[j] * x[j];
        tmp[r] = acc;
    }
    for (int r = 0; r < X.rows; ++r) {
        const cplx* row = &X.a[static_cast<size_t>(r) * X.cols];
        const cplx t = c * tmp[r];
        for (int j = 0; j < X.cols; ++j) y[j] += std::conj(row[j]) * t;
    }
}

// Closed-form block minimizers given an already-computed lambda_max. The
// public entry points below recover lambda from the dense matrix; the
// solver loop feeds a value obtained by applying the same matrix through
// its channel factors.
CVec w_step_given_lambda(const CMat& A, const CVec& w_k, double P, double lam) {
    CVec target = matvec(A, w_k);
    for (size_t i = 0; i < target.size(); ++i) target[i] = lam * w_k[i] - target[i];
    return phase_project(target, P, w_k);
}

CVec theta_step_given_lambda(const ThetaQuadratics& tq, const CVec& theta_k, double alpha,
                             double lam) {
    const int n_i = static_cast<int>(theta_k.size());
    CVec target = matvec(tq.P_mat, theta_k);
    for (int i = 0; i < n_i; ++i) {
        const cplx q = std::conj(tq.d[i]) - alpha * std::conj(tq.f[i]);
        target[i] = lam * theta_k[i] - target[i] - q;
    }
    return phase_project(target, 1.0, theta_k);
}

}  // namespace

CVec bsum_w_step(const CMat& A, const CVec& w_k, double P) {
    if (!A.square() || A.cols != static_cast<int>(w_k.size()))
        throw InvalidInputError("bsum_w_step: dimension mismatch");
    // A capped eigen-solve is fine here: the estimate's error is far below
    // the descent tolerances.
    const double lam = hermitian_max_eigenvalue_estimate(A).value;
    return w_step_given_lambda(A, w_k, P, lam);
}

CVec bsum_theta_step(const ThetaQuadratics& tq, const CVec& theta_k, double alpha) {
    const int n_i = static_cast<int>(theta_k.size());
    if (tq.P_mat.rows != n_i)
        throw InvalidInputError("bsum_theta_step: dimension mismatch");
    if (n_i == 0) return {};
    const double lam = hermitian_max_eigenvalue_estimate(tq.P_mat).value;
    return theta_step_given_lambda(tq, theta_k, alpha, lam);
}

namespace {

struct BsumRun {
    BeamformerState state;
    std::vector<double> falpha_history;  // difference objective, init first
    std::vector<double> ratio_history;   // fractional objective, aligned
    int iterations = 0;
    bool converged = false;
};

BsumRun bsum_run(const ObjectiveWorkspace& ws, double alpha, BeamformerState s, double tol,
                 int max_iter, bool update_theta) {
    const ChannelSet& ch = ws.channels();
    const double noise = ws.noise_power();
    const double inv_noise = 1.0 / noise;
    const double P = std::abs(s.w[0]);
    const int n_i = static_cast<int>(s.theta.size());
    const bool theta_block = update_theta && n_i > 0;

    BsumRun run;
    auto record = [&](double& falpha_out) {
        const auto [num, den] = ws.numden(s.w, s.theta);
        falpha_out = num - alpha * den;
        run.falpha_history.push_back(falpha_out);
        run.ratio_history.push_back(num / den);
    };
    double f_prev;
    record(f_prev);

    // With theta held fixed the w-block matrix A depends only on alpha, so
    // its eigenvalue is hoisted out of the loop.
    CMat A_fixed;
    double lam_A_fixed = 0.0;
    if (!theta_block) {
        A_fixed = build_A(ch, s.theta, alpha, noise);
        lam_A_fixed = hermitian_max_eigenvalue_estimate(A_fixed).value;
    }

    CVec tmp, u;
    for (int k = 0; k < max_iter; ++k) {
        if (theta_block) {
            // w block. lambda_max(A) comes from applying A through the
            // effective channels (rank N_e + N_b), much cheaper per power
            // step than the dense M x M product.
            const CMat G_e = effective_channel(ch.H_ae, ch.H_ie, s.theta, ch.H_ai);
            const CMat G_b = effective_channel(ch.H_ab, ch.H_ib, s.theta, ch.H_ai);
            const CMat A = build_A_from_effective(G_e, G_b, alpha, noise);
            auto apply_A = [&](const CVec& x, CVec& y) {
                accumulate_gram_apply(G_e, x, inv_noise, y, tmp);
                accumulate_gram_apply(G_b, x, -alpha * inv_noise, y, tmp);
            };
            const double lam_A =
                power_iteration_shifted(A.rows, gershgorin_psd_shift(A), apply_A).value;
            s.w = w_step_given_lambda(A, s.w, P, lam_A);

            // theta block, same factored treatment for P = (B - alpha E) o C^T.
            const ThetaQuadratics tq = ws.theta_quadratics(s.w, alpha);
            const CVec v = matvec(ch.H_ai, s.w);
            auto apply_P = [&](const CVec& x, CVec& y) {
                u.resize(n_i);
                for (int i = 0; i < n_i; ++i) u[i] = v[i] * x[i];
                CVec acc(n_i, cplx(0.0, 0.0));
                accumulate_gram_apply(ch.H_ie, u, inv_noise, acc, tmp);
                accumulate_gram_apply(ch.H_ib, u, -alpha * inv_noise, acc, tmp);
                for (int i = 0; i < n_i; ++i) y[i] += std::conj(v[i]) * acc[i];
            };
            const double lam_P =
                power_iteration_shifted(n_i, gershgorin_psd_shift(tq.P_mat), apply_P).value;
            s.theta = theta_step_given_lambda(tq, s.theta, alpha, lam_P);
        } else {
            s.w = w_step_given_lambda(A_fixed, s.w, P, lam_A_fixed);
        }
        double f_cur;
        record(f_cur);
        run.iterations = k + 1;
        if (std::abs(f_cur - f_prev) < tol) {
            run.converged = true;
            break;
        }
        f_prev = f_cur;
    }
    run.state = std::move(s);
    return run;
}

SolveReport dinkelbach_core(const ChannelSet& ch, const BeamformerState& init,
                            const DinkelbachOptions& opts, double noise_power,
                            bool update_theta) {
    validate_feasible(init);
    const ObjectiveWorkspace ws(ch, noise_power);

    BeamformerState s = init;
    double alpha = ws.value(s.w, s.theta);

    SolveReport rep;
    rep.method = Method::dinkelbach_bsum;
    rep.objective_history = {alpha};
    rep.alpha_history = {alpha};
    DinkelbachTrace trace;
    trace.alpha_history = {alpha};

    bool outer_converged = false;
    for (int outer = 0; outer < opts.outer_cap; ++outer) {
        BsumRun run = bsum_run(ws, alpha, std::move(s), opts.inner_tol, opts.inner_cap,
                               update_theta);
        s = std::move(run.state);
        trace.inner_objective_histories.push_back(std::move(run.falpha_history));
        rep.inner_iters += run.iterations;
        rep.objective_history.insert(rep.objective_history.end(),
                                     run.ratio_history.begin() + 1, run.ratio_history.end());

        const double alpha_next = ws.value(s.w, s.theta);
        trace.alpha_history.push_back(alpha_next);
        rep.alpha_history.push_back(alpha_next);
        trace.outer_iterations = outer + 1;
        if (std::abs(alpha_next - alpha) < opts.outer_tol) {
            alpha = alpha_next;
            outer_converged = true;
            break;
        }
        alpha = alpha_next;
    }
    trace.termination = outer_converged ? DinkelbachTrace::Outcome::converged
                                        : DinkelbachTrace::Outcome::max_iter;
    rep.outer_iters = trace.outer_iterations;
    rep.termination = outer_converged ? Termination::converged : Termination::max_iter;
    rep.final_objective = alpha;
    rep.secrecy_rate_bits = secrecy_rate(ch, s, noise_power);
    rep.final_state = std::move(s);
    rep.dinkelbach = std::move(trace);
    return rep;
}

}  // namespace

std::pair<BeamformerState, std::vector<double>> bsum_solve(const ChannelSet& ch, double alpha,
                                                           const BeamformerState& init,
                                                           double tol, int max_iter,
                                                           double noise_power) {
    validate_feasible(init);
    if (!(alpha > 0.0)) throw InvalidInputError("bsum_solve: alpha must be positive");
    const ObjectiveWorkspace ws(ch, noise_power);
    BsumRun run = bsum_run(ws, alpha, init, tol, max_iter, true);
    return {std::move(run.state), std::move(run.falpha_history)};
}

SolveReport dinkelbach_solve(const ChannelSet& ch, const BeamformerState& init,
                             const DinkelbachOptions& opts, double noise_power) {
    return dinkelbach_core(ch, init, opts, noise_power, true);
}

SolveReport dinkelbach_solve_w_only(const ChannelSet& ch, const BeamformerState& init,
                                    const DinkelbachOptions& opts, double noise_power) {
    return dinkelbach_core(ch, init, opts, noise_power, false);
}

}  // namespace secbeam

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "secbeam/dinkelbach_bsum.hpp"
#include "secbeam/pmcgd.hpp"
#include "test_util.hpp"

using namespace secbeam;
using testutil::random_channels;
using testutil::random_state;
using testutil::random_vector;

namespace {

double tangency_residual(const BeamformerState& s, const TangentVector& xi) {
    const double P = amplitude_of(s);
    double worst = 0.0;
    for (size_t i = 0; i < s.w.size(); ++i)
        worst = std::max(worst, std::abs((xi.w[i] * std::conj(s.w[i])).real()) / (P * P));
    for (size_t j = 0; j < s.theta.size(); ++j)
        worst = std::max(worst, std::abs((xi.theta[j] * std::conj(s.theta[j])).real()));
    return worst;
}

TangentVector random_tangent(const BeamformerState& s, Rng& rng) {
    return project_tangent(s, random_vector(static_cast<int>(s.w.size()), rng),
                           random_vector(static_cast<int>(s.theta.size()), rng));
}

}  // namespace

TEST_CASE("project_tangent: radial annihilation, idempotence, orthogonality") {
    Rng rng(61);
    const BeamformerState s = random_state(5, 4, 1.0, rng);

    // The point itself is purely radial (P = 1 case from the contract).
    const TangentVector zero = project_tangent(s, s.w, s.theta);
    CHECK(norm(zero) < 1e-14);

    // Larger amplitude: the P^2 scaling keeps the projection exact.
    const BeamformerState s2 = random_state(5, 4, 2.5, rng);
    const TangentVector zero2 = project_tangent(s2, s2.w, s2.theta);
    CHECK(norm(zero2) < 1e-13);

    for (int t = 0; t < 50; ++t) {
        const CVec aw = random_vector(5, rng);
        const CVec at = random_vector(4, rng);
        const TangentVector xi = project_tangent(s2, aw, at);
        CHECK(tangency_residual(s2, xi) < 1e-12);

        // Idempotence.
        const TangentVector xi2 = project_tangent(s2, xi.w, xi.theta);
        TangentVector diff = xi;
        for (size_t i = 0; i < diff.w.size(); ++i) diff.w[i] -= xi2.w[i];
        for (size_t j = 0; j < diff.theta.size(); ++j) diff.theta[j] -= xi2.theta[j];
        CHECK(norm(diff) < 1e-12 * std::max(1.0, norm(xi)));

        // Orthogonal decomposition: <ambient - xi, xi> = 0.
        TangentVector removed;
        removed.w.resize(5);
        removed.theta.resize(4);
        for (size_t i = 0; i < aw.size(); ++i) removed.w[i] = aw[i] - xi.w[i];
        for (size_t j = 0; j < at.size(); ++j) removed.theta[j] = at[j] - xi.theta[j];
        CHECK(std::abs(inner(removed, xi)) < 1e-10);
    }
}

TEST_CASE("riemannian_grad: disconnected surface and finite differences") {
    Rng rng(62);
    {
        ChannelSet cut = random_channels(5, 2, 2, 4, rng);
        cut.H_ib = CMat(2, 4);
        cut.H_ie = CMat(2, 4);
        const BeamformerState s = random_state(5, 4, 1.0, rng);
        const TangentVector g = riemannian_grad(cut, s, 1.0);
        for (const cplx& z : g.theta) CHECK(std::abs(z) == 0.0);
    }

    // Directional derivatives along tangent directions match central
    // differences of the fractional objective.
    for (int inst = 0; inst < 5; ++inst) {
        const int M = 3 + static_cast<int>(rng.uniform() * 6);
        const int n_i = 2 + static_cast<int>(rng.uniform() * 7);
        const ChannelSet ch = random_channels(M, 2, 2, n_i, rng);
        const BeamformerState s = random_state(M, n_i, 1.0, rng);
        const TangentVector g = riemannian_grad(ch, s, 1.0);
        for (int dir = 0; dir < 20; ++dir) {
            const TangentVector d = random_tangent(s, rng);
            const double h = 1e-6;
            auto at = [&](double t) {
                BeamformerState x = s;
                for (size_t i = 0; i < x.w.size(); ++i) x.w[i] += t * d.w[i];
                for (size_t j = 0; j < x.theta.size(); ++j) x.theta[j] += t * d.theta[j];
                return fractional_objective(ch, x, 1.0);
            };
            const double fd = (at(h) - at(-h)) / (2.0 * h);
            const double got = 2.0 * inner(g, d);
            CHECK(std::abs(got - fd) / std::max(std::abs(fd), 1e-10) < 1e-5);
        }
    }
}

TEST_CASE("transport: identity cases and definitional equivalence") {
    Rng rng(63);
    const BeamformerState from = random_state(5, 4, 1.4, rng);
    const BeamformerState to = random_state(5, 4, 1.4, rng);
    const TangentVector tv = random_tangent(from, rng);

    // to == from: already tangent, re-projection changes nothing.
    const TangentVector same = transport(from, from, tv);
    TangentVector diff = tv;
    for (size_t i = 0; i < diff.w.size(); ++i) diff.w[i] -= same.w[i];
    for (size_t j = 0; j < diff.theta.size(); ++j) diff.theta[j] -= same.theta[j];
    CHECK(norm(diff) < 1e-13 * std::max(1.0, norm(tv)));

    // zero maps to zero.
    TangentVector z;
    z.w.assign(5, cplx(0, 0));
    z.theta.assign(4, cplx(0, 0));
    CHECK(norm(transport(from, to, z)) == 0.0);

    // transport is exactly projection at the destination.
    const TangentVector a = transport(from, to, tv);
    const TangentVector b = project_tangent(to, tv.w, tv.theta);
    for (size_t i = 0; i < a.w.size(); ++i) CHECK(a.w[i] == b.w[i]);
    for (size_t j = 0; j < a.theta.size(); ++j) CHECK(a.theta[j] == b.theta[j]);
    CHECK(tangency_residual(to, a) < 1e-12);
}

TEST_CASE("polak_ribiere: formula cases") {
    Rng rng(64);
    const BeamformerState s = random_state(6, 3, 1.0, rng);
    const TangentVector g = random_tangent(s, rng);
    CHECK(polak_ribiere(g, g) == 0.0);

    // Orthogonal old gradient with equal norm: coefficient one.
    TangentVector g_old = random_tangent(s, rng);
    const double c = inner(g, g_old) / inner(g, g);
    for (size_t i = 0; i < g_old.w.size(); ++i) g_old.w[i] -= c * g.w[i];
    for (size_t j = 0; j < g_old.theta.size(); ++j) g_old.theta[j] -= c * g.theta[j];
    const double scale_to_match = norm(g) / norm(g_old);
    for (cplx& zz : g_old.w) zz *= scale_to_match;
    for (cplx& zz : g_old.theta) zz *= scale_to_match;
    CHECK(polak_ribiere(g, g_old) == doctest::Approx(1.0).epsilon(1e-10));

    // Random pair against the scalar formula (with the clamp at zero).
    for (int t = 0; t < 50; ++t) {
        const TangentVector gn = random_tangent(s, rng);
        const TangentVector go = random_tangent(s, rng);
        const double want =
            std::max(0.0, (inner(gn, gn) - inner(gn, go)) / inner(go, go));
        CHECK(polak_ribiere(gn, go) == doctest::Approx(want).epsilon(1e-12));
    }

    TangentVector zero;
    zero.w.assign(6, cplx(0, 0));
    zero.theta.assign(3, cplx(0, 0));
    CHECK(polak_ribiere(g, zero) == 0.0);
}

TEST_CASE("retract: identity, rotation, renormalization, zero entries") {
    Rng rng(65);
    const double P = 1.7;
    const BeamformerState s = random_state(6, 4, P, rng);
    const TangentVector d = random_tangent(s, rng);

    // beta = 0 returns the state bitwise.
    const BeamformerState same = retract(s, d, 0.0);
    CHECK(same.w == s.w);
    CHECK(same.theta == s.theta);

    // Pure rotation direction: phase advances by atan(beta) ~ beta.
    TangentVector rot;
    rot.w.resize(6);
    rot.theta.resize(4);
    for (int i = 0; i < 6; ++i) rot.w[i] = cplx(0, 1) * s.w[i];
    for (int j = 0; j < 4; ++j) rot.theta[j] = cplx(0, 1) * s.theta[j];
    const double beta = 1e-3;
    const BeamformerState r = retract(s, rot, beta);
    for (int i = 0; i < 6; ++i) {
        const double adv = std::arg(r.w[i] / s.w[i]);
        CHECK(adv == doctest::Approx(beta).epsilon(1e-6));
        CHECK(std::abs(std::abs(r.w[i]) - P) < 1e-13);
    }
    for (int j = 0; j < 4; ++j) CHECK(std::abs(std::abs(r.theta[j]) - 1.0) < 1e-14);

    // Random steps stay exactly feasible.
    for (int t = 0; t < 20; ++t) {
        const BeamformerState rr = retract(s, random_tangent(s, rng), rng.uniform());
        CHECK(is_feasible(rr, 1e-12));
    }

    // Vanishing argument entries keep the previous entry.
    TangentVector back;
    back.w.resize(6);
    back.theta.resize(4);
    for (int i = 0; i < 6; ++i) back.w[i] = -s.w[i];
    for (int j = 0; j < 4; ++j) back.theta[j] = -s.theta[j];
    const BeamformerState kept = retract(s, back, 1.0);  // w + d = 0 everywhere
    CHECK(kept.w == s.w);
    CHECK(kept.theta == s.theta);
}

TEST_CASE("retraction is a first-order model: slope-2 error decay") {
    Rng rng(66);
    const ChannelSet ch = random_channels(6, 2, 2, 5, rng);
    const BeamformerState s = random_state(6, 5, 1.0, rng);
    const TangentVector g = riemannian_grad(ch, s, 1.0);
    const TangentVector d = random_tangent(s, rng);
    const double f0 = fractional_objective(ch, s, 1.0);
    const double slope = 2.0 * inner(g, d);

    std::vector<double> lx, ly;
    for (double beta : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const double f = fractional_objective(ch, retract(s, d, beta), 1.0);
        const double err = std::abs(f - f0 - beta * slope);
        REQUIRE(err > 0.0);
        lx.push_back(std::log(beta));
        ly.push_back(std::log(err));
    }
    // least-squares slope of log err vs log beta
    double mx = 0, my = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    const double fit = num / den;
    CHECK(fit == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("armijo_step: acceptance and rejection") {
    Rng rng(67);
    const ChannelSet ch = random_channels(6, 2, 2, 5, rng);
    const BeamformerState s = random_state(6, 5, 1.0, rng);
    const TangentVector g = riemannian_grad(ch, s, 1.0);
    CgdParams params;

    TangentVector d = g;
    for (cplx& z : d.w) z = -z;
    for (cplx& z : d.theta) z = -z;

    // Steepest descent with the default budget is accepted with beta > 0.
    const double beta = armijo_step(ch, s, d, params, 1.0);
    CHECK(beta > 0.0);
    const double f0 = fractional_objective(ch, s, 1.0);
    const double f1 = fractional_objective(ch, retract(s, d, beta), 1.0);
    CHECK(f1 <= f0 + params.armijo_sufficient_decrease * beta * 2.0 * inner(g, d));

    // A tiny initial step is accepted immediately.
    CgdParams tiny = params;
    tiny.armijo_initial_step = 1e-8;
    const double beta_tiny = armijo_step(ch, s, d, tiny, 1.0);
    CHECK(beta_tiny == doctest::Approx(1e-8 / norm(d)).epsilon(1e-15));

    // Ascent directions are rejected outright.
    CHECK(armijo_step(ch, s, g, params, 1.0) == 0.0);
}

TEST_CASE("pmcgd_solve: zero-gradient start terminates immediately") {
    Rng rng(68);
    ChannelSet sym = random_channels(5, 2, 2, 4, rng);
    sym.H_ae = sym.H_ab;
    sym.H_ie = sym.H_ib;  // f identically 1: gradient exactly zero
    const BeamformerState init = random_state(5, 4, 1.0, rng);
    const SolveReport rep = pmcgd_solve(sym, init, CgdParams{}, 1.0);
    CHECK(rep.outer_iters == 0);
    CHECK(rep.termination == Termination::converged);
    CHECK(rep.objective_history.size() == 1);
    CHECK(*rep.final_grad_norm == 0.0);
}

TEST_CASE("pmcgd_solve: monotone descent and exit stationarity") {
    Rng rng(69);
    int stationary = 0;
    const int instances = 10;
    for (int t = 0; t < instances; ++t) {
        const ChannelSet ch = random_channels(8, 2, 2, 8, rng);
        const BeamformerState init = random_state(8, 8, 1.0, rng);
        CgdParams params;
        params.tol = 1e-10;
        const SolveReport rep = pmcgd_solve(ch, init, params, 1.0);
        REQUIRE(rep.objective_history.size() >= 2);
        for (size_t k = 1; k < rep.objective_history.size(); ++k)
            CHECK(rep.objective_history[k] <= rep.objective_history[k - 1] + 1e-12);
        CHECK(is_feasible(rep.final_state));
        CHECK(rep.termination != Termination::max_iter);
        if (*rep.final_grad_norm < 1e-4) ++stationary;
        // Tangency of the recorded gradient norms: re-derive the final one.
        const TangentVector g = riemannian_grad(ch, rep.final_state, 1.0);
        CHECK(norm(g) == doctest::Approx(*rep.final_grad_norm).epsilon(1e-9));
        CHECK(rep.secrecy_rate_bits ==
              doctest::Approx(secrecy_rate(ch, rep.final_state, 1.0)).epsilon(1e-12));
    }
    CHECK(stationary >= 9);
}

TEST_CASE("pmcgd_solve: loop state stays tangent and feasible") {
    // Replicates the solver's update chain through the public operations
    // and checks the tangency invariant at every step.
    Rng rng(70);
    const ChannelSet ch = random_channels(6, 2, 2, 6, rng);
    BeamformerState s = random_state(6, 6, 1.0, rng);
    CgdParams params;
    TangentVector g = riemannian_grad(ch, s, 1.0);
    TangentVector d;
    BeamformerState s_prev = s;
    TangentVector g_prev, d_prev;
    for (int k = 0; k < 10; ++k) {
        if (k == 0) {
            d = g;
            for (cplx& z : d.w) z = -z;
            for (cplx& z : d.theta) z = -z;
        } else {
            const TangentVector gt = transport(s_prev, s, g_prev);
            const double sigma = polak_ribiere(g, gt);
            const TangentVector dt = transport(s_prev, s, d_prev);
            d.w.resize(g.w.size());
            d.theta.resize(g.theta.size());
            for (size_t i = 0; i < g.w.size(); ++i) d.w[i] = -g.w[i] + sigma * dt.w[i];
            for (size_t j = 0; j < g.theta.size(); ++j)
                d.theta[j] = -g.theta[j] + sigma * dt.theta[j];
            if (2.0 * inner(g, d) >= -1e-14) {
                d = g;
                for (cplx& z : d.w) z = -z;
                for (cplx& z : d.theta) z = -z;
            }
        }
        CHECK(tangency_residual(s, g) < 1e-12);
        CHECK(tangency_residual(s, d) < 1e-10);
        const double beta = armijo_step(ch, s, d, params, 1.0);
        REQUIRE(beta > 0.0);
        s_prev = s;
        g_prev = g;
        d_prev = d;
        s = retract(s, d, beta);
        CHECK(is_feasible(s, 1e-12));
        g = riemannian_grad(ch, s, 1.0);
    }
}

TEST_CASE("pmcgd_solve: head-to-head with the Dinkelbach solver") {
    // Distance-faded channels in the surface-dominant regime; both solvers
    // run the benchmark budgets from a shared start and are compared at
    // their converged objectives.
    SystemConfig cfg;
    cfg.M = 16;
    cfg.N_b = 2;
    cfg.N_e = 2;
    cfg.N_i = 16;
    cfg.dist_alice_bob = 200.0;
    cfg.dist_alice_eve = 200.0;
    cfg.dist_alice_irs = 5.0;
    cfg.dist_irs_bob = 5.0;
    cfg.dist_irs_eve = 5.0;
    cfg.noise_power = 3e-7;

    CgdParams cp;
    cp.tol = 1e-12;
    cp.max_iter = 6000;
    DinkelbachOptions dp;
    dp.inner_tol = 1e-3;
    dp.outer_tol = 1e-8;

    int at_least_as_good = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const ChannelSet ch = sample_channels(cfg, 4242, t);
        const BeamformerState init =
            random_feasible_state(cfg.M, cfg.N_i, cfg.P, derive_stream(4242, 1, t));
        const SolveReport cg = pmcgd_solve(ch, init, cp, cfg.noise_power);
        const SolveReport dk = dinkelbach_solve(ch, init, dp, cfg.noise_power);
        if (cg.final_objective <= dk.final_objective + 1e-6) ++at_least_as_good;
    }
    CHECK(at_least_as_good >= 70);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "secbeam/baselines.hpp"
#include "secbeam/pmcgd.hpp"
#include "test_util.hpp"

using namespace secbeam;
using testutil::random_channels;
using testutil::random_state;
using testutil::random_vector;

TEST_CASE("random_irs_solve: determinism and report shape") {
    Rng rng(81);
    const ChannelSet ch = random_channels(6, 2, 2, 5, rng);
    DinkelbachOptions opts;
    const SolveReport a = random_irs_solve(ch, 12345, 1.0, opts, 1.0);
    const SolveReport b = random_irs_solve(ch, 12345, 1.0, opts, 1.0);
    CHECK(a.final_state.w == b.final_state.w);
    CHECK(a.final_state.theta == b.final_state.theta);
    CHECK(a.secrecy_rate_bits == b.secrecy_rate_bits);
    CHECK(a.method == Method::random_irs);

    const SolveReport c = random_irs_solve(ch, 54321, 1.0, opts, 1.0);
    CHECK(a.final_state.theta != c.final_state.theta);

    // theta held fixed at its draw.
    const SolveReport d = random_irs_solve(ch, 12345, 1.0, opts, 1.0);
    CHECK(d.final_state.theta == a.final_state.theta);
    for (const cplx& t : d.final_state.theta)
        CHECK(std::abs(std::abs(t) - 1.0) < 1e-12);
}

TEST_CASE("random_irs_solve: no surface elements degenerates to no_irs_solve") {
    Rng rng(82);
    const ChannelSet ch = random_channels(5, 2, 2, 0, rng);
    DinkelbachOptions opts;
    const BeamformerState init = random_state(5, 0, 1.0, rng);
    const SolveReport a = random_irs_solve(ch, init, opts, 1.0);
    const SolveReport b = no_irs_solve(ch, init, opts, 1.0);
    CHECK(a.final_state.w == b.final_state.w);
    CHECK(a.secrecy_rate_bits == b.secrecy_rate_bits);
}

TEST_CASE("no_irs_solve: blind/symmetric eavesdropper and descent") {
    Rng rng(83);
    DinkelbachOptions opts;
    {
        ChannelSet ch = random_channels(6, 2, 2, 4, rng);
        ch.H_ae = CMat(2, 6);  // Eve direct link gone; surface zeroed anyway
        const SolveReport rep = no_irs_solve(ch, 1.0, opts, 1.0);
        CHECK(rep.secrecy_rate_bits > 0.0);
        CHECK(rep.method == Method::no_irs);
    }
    {
        ChannelSet ch = random_channels(6, 2, 2, 4, rng);
        ch.H_ae = ch.H_ab;
        const SolveReport rep = no_irs_solve(ch, 1.0, opts, 1.0);
        CHECK(rep.secrecy_rate_bits == 0.0);
    }
    {
        const ChannelSet ch = random_channels(6, 2, 2, 4, rng);
        const SolveReport rep = no_irs_solve(ch, 1.0, opts, 1.0);
        REQUIRE(rep.dinkelbach.has_value());
        const auto& ah = rep.dinkelbach->alpha_history;
        for (size_t k = 1; k < ah.size(); ++k) CHECK(ah[k] <= ah[k - 1] + 1e-9);
        // The surface is absent from the reported rates.
        ChannelSet cut = ch;
        cut.H_ib = CMat(2, 4);
        cut.H_ie = CMat(2, 4);
        CHECK(rep.secrecy_rate_bits ==
              doctest::Approx(secrecy_rate(cut, rep.final_state, 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("baseline dominance: joint optimization beats a frozen surface") {
    Rng rng(84);
    DinkelbachOptions opts;
    CgdParams cg;
    cg.tol = 1e-8;
    int dominated = 0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const ChannelSet ch = random_channels(8, 2, 2, 8, rng, 0.15, 0.15);
        const BeamformerState init = random_state(8, 8, 1.0, rng);
        const SolveReport joint = pmcgd_solve(ch, init, cg, 1.0);
        const SolveReport frozen = random_irs_solve(ch, init, opts, 1.0);
        if (frozen.secrecy_rate_bits <= joint.secrecy_rate_bits + 1e-6) ++dominated;
    }
    CHECK(dominated >= (trials * 95) / 100);
}

TEST_CASE("grid_oracle: guards and invariance") {
    Rng rng(85);
    {
        const ChannelSet big = random_channels(4, 2, 2, 2, rng);
        CHECK_THROWS_AS(static_cast<void>(grid_oracle(big, 1.0, 8, 1.0)), GuardError);
        const ChannelSet ok = random_channels(3, 2, 2, 2, rng);
        CHECK_THROWS_AS(static_cast<void>(grid_oracle(ok, 1.0, 2000, 1.0)), GuardError);
    }

    // Global-phase invariance: with one transmit weight and no surface the
    // objective is constant, so every grid point ties.
    {
        const ChannelSet one = random_channels(1, 2, 2, 0, rng);
        const auto [best, val] = grid_oracle(one, 1.0, 64, 1.0);
        BeamformerState probe;
        for (double phase : {0.3, 1.7, -2.2}) {
            probe.w = {std::polar(1.0, phase)};
            CHECK(fractional_objective(one, probe, 1.0) == doctest::Approx(val).epsilon(1e-12));
        }
        CHECK(is_feasible(best, 1e-12));
    }

    // Identical Bob/Eve channels: the optimum is exactly 1.
    {
        ChannelSet sym = random_channels(2, 2, 2, 1, rng);
        sym.H_ae = sym.H_ab;
        sym.H_ie = sym.H_ib;
        const auto [best, val] = grid_oracle(sym, 1.0, 16, 1.0);
        CHECK(val == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("grid_oracle: certifies the joint solvers on a tiny instance") {
    Rng rng(86);
    const int levels = 64;
    for (int t = 0; t < 5; ++t) {
        const ChannelSet ch = random_channels(2, 2, 2, 1, rng, 0.5, 0.5);
        const auto [best, grid_val] = grid_oracle(ch, 1.0, levels, 1.0);

        // Multi-start conjugate gradient: the best run refines the grid
        // optimum from its cell, so it may undercut the grid only by the
        // within-cell variation, estimated from the gradient at the best
        // grid point.
        CgdParams params;
        params.tol = 1e-12;
        double pm = std::numeric_limits<double>::infinity();
        for (int s0 = 0; s0 < 10; ++s0) {
            const BeamformerState init =
                random_feasible_state(2, 1, 1.0, derive_stream(86, t, s0));
            pm = std::min(pm, pmcgd_solve(ch, init, params, 1.0).final_objective);
        }
        const double delta = M_PI / levels;  // max per-entry phase error
        const TangentVector g = riemannian_grad(ch, best, 1.0);
        const double cell = 2.0 * norm(g) * delta * std::sqrt(3.0) + 100.0 * delta * delta;
        CHECK(pm <= grid_val + 1e-9);        // grid point is feasible for the solver
        CHECK(grid_val <= pm + cell);        // grid tracks the continuous optimum
    }
}

TEST_CASE("linear_subproblem_oracle: closed-form certification") {
    Rng rng(87);
    {
        const CVec c = {cplx(1.0, 0.0), cplx(2.5, 0.0)};
        CHECK(linear_subproblem_oracle(c, 2.0, 4) == doctest::Approx(-2.0 * 3.5).epsilon(1e-14));
        CHECK(linear_subproblem_oracle(CVec(3, cplx(0, 0)), 1.0, 8) == 0.0);
    }
    const int levels = 720;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng.uniform() * 8);
        const CVec c = random_vector(n, rng);
        const double P = 0.5 + rng.uniform();
        double sum_abs = 0.0;
        for (const cplx& ci : c) sum_abs += std::abs(ci);
        const double continuous = -P * sum_abs;
        const double grid = linear_subproblem_oracle(c, P, levels);
        CHECK(grid >= continuous - 1e-12);
        CHECK(grid - continuous <= (1.0 - std::cos(M_PI / levels)) * P * sum_abs + 1e-12);
    }
    CHECK_THROWS_AS(static_cast<void>(linear_subproblem_oracle(random_vector(9, rng), 1.0, 8)),
                    InvalidInputError);
}

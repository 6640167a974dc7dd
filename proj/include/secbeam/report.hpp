#pragma once

// Shared solver-run record: what every optimizer reports back to the
// benchmark runner and the trace exporter.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "secbeam/objective.hpp"

namespace secbeam {

enum class Method { dinkelbach_bsum, pmcgd, random_irs, no_irs };

std::string to_string(Method m);
Method method_from_string(const std::string& name);  // throws InvalidInputError

enum class Termination { converged, max_iter, stalled };

std::string to_string(Termination t);

/// Per-outer-iteration record of a Dinkelbach run. alpha_history is
/// non-increasing; every inner history is a non-increasing sequence of the
/// surrogate f(w,theta) = (1+||Eve||^2) - alpha (1+||Bob||^2).
struct DinkelbachTrace {
    enum class Outcome { converged, max_iter };
    std::vector<double> alpha_history;
    std::vector<std::vector<double>> inner_objective_histories;
    int outer_iterations = 0;
    Outcome termination = Outcome::converged;
};

struct SolveReport {
    Method method = Method::dinkelbach_bsum;
    double secrecy_rate_bits = 0.0;
    double final_objective = 1.0;  // fractional objective at the final state
    int outer_iters = 0;
    int inner_iters = 0;
    /// Fractional objective after each iteration (inner iteration for the
    /// Dinkelbach family, CG iteration for PMCGD), preceded by the value
    /// at the initial point.
    std::vector<double> objective_history;
    std::vector<double> alpha_history;      // Dinkelbach family only
    std::vector<double> grad_norm_history;  // PMCGD only
    std::optional<double> final_grad_norm;  // PMCGD only
    Termination termination = Termination::converged;
    double wall_time_s = 0.0;
    uint64_t seed = 0;
    int trial = -1;
    BeamformerState final_state;
    std::optional<DinkelbachTrace> dinkelbach;
};

}  // namespace secbeam

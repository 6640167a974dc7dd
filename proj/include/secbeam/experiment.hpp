#pragma once

// Benchmark runner: seeded Monte Carlo sweeps over one system variable,
// with every method started from the same per-trial random feasible point.
// Result files are byte-identical for identical (spec, seed) regardless of
// worker count; wall-clock timings go to a separate file excluded from
// that guarantee.

#include <cstdint>
#include <string>
#include <vector>

#include "secbeam/baselines.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/pmcgd.hpp"
#include "secbeam/report.hpp"

namespace secbeam {

enum class SweepVar { P_db, M, N_b, N_e, N_i };

std::string to_string(SweepVar v);
SweepVar sweep_var_from_string(const std::string& name);  // throws InvalidInputError

struct ExperimentSpec {
    SystemConfig base;
    SweepVar sweep = SweepVar::M;
    std::vector<double> sweep_values;
    int trials = 1;
    uint64_t seed = 0;
    std::vector<Method> methods = {Method::dinkelbach_bsum, Method::pmcgd, Method::random_irs,
                                   Method::no_irs};
    std::string out_dir = "results";

    void validate() const;  // throws InvalidInputError
};

/// Reads the flat key=value format (system keys plus sweep, sweep_values,
/// trials, seed, methods, out_dir). Unknown keys raise ParseError with the
/// offending line.
ExperimentSpec load_experiment_spec(const std::string& path);
ExperimentSpec parse_experiment_spec(std::istream& in);

/// base with the sweep variable replaced (P_db converted to amplitude).
SystemConfig apply_sweep_value(const SystemConfig& base, SweepVar var, double value);

struct TrialRow {
    double sweep_value = 0.0;
    int value_index = 0;
    int trial = 0;
    SolveReport report;
    std::string error;  // non-empty when the solve failed; the sweep goes on
};

struct SummaryRow {
    double sweep_value = 0.0;
    Method method = Method::dinkelbach_bsum;
    int trials = 0;
    double mean_rate = 0.0;
    double stderr_rate = 0.0;
    double mean_iters = 0.0;
    double mean_wall_s = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<TrialRow> rows;        // (value, trial, method) order
    std::vector<SummaryRow> summary;   // (value, method) order
};

/// Channels/init of one (value, trial) cell; shared by run and trace.
ChannelSet trial_channels(const ExperimentSpec& spec, int value_index, int trial,
                          SystemConfig* cfg_out = nullptr);
BeamformerState trial_init(const ExperimentSpec& spec, const SystemConfig& cfg,
                           int value_index, int trial);

/// One solver run with budgets taken from cfg.
SolveReport run_method(Method m, const ChannelSet& ch, const BeamformerState& init,
                       const SystemConfig& cfg);

/// Full sweep with a bounded worker pool (workers <= 0 selects the
/// hardware concurrency); writes sweep.csv, trials.csv and timing.csv
/// under spec.out_dir and returns the in-memory result.
ExperimentResult run_experiment(const ExperimentSpec& spec, int workers = 0);

void write_result_files(const ExperimentResult& res, const std::string& out_dir);

/// Per-iteration convergence table: iteration index, fractional objective,
/// alpha (empty unless Dinkelbach-family) and gradient norm (empty unless
/// PMCGD).
void export_convergence(const SolveReport& rep, const std::string& path);

}  // namespace secbeam

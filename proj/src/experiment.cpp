#include "secbeam/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "secbeam/rng.hpp"

namespace secbeam {

namespace {

enum : uint64_t { kChannelStream = 0x6368616e, kInitStream = 0x696e6974 };

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::dinkelbach_bsum: return "dinkelbach_bsum";
        case Method::pmcgd: return "pmcgd";
        case Method::random_irs: return "random_irs";
        case Method::no_irs: return "no_irs";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    if (name == "dinkelbach_bsum") return Method::dinkelbach_bsum;
    if (name == "pmcgd") return Method::pmcgd;
    if (name == "random_irs") return Method::random_irs;
    if (name == "no_irs") return Method::no_irs;
    throw InvalidInputError("unknown method `" + name + "`");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iter: return "max_iter";
        case Termination::stalled: return "stalled";
    }
    return "?";
}

std::string to_string(SweepVar v) {
    switch (v) {
        case SweepVar::P_db: return "P_db";
        case SweepVar::M: return "M";
        case SweepVar::N_b: return "N_b";
        case SweepVar::N_e: return "N_e";
        case SweepVar::N_i: return "N_i";
    }
    return "?";
}

SweepVar sweep_var_from_string(const std::string& name) {
    if (name == "P_db") return SweepVar::P_db;
    if (name == "M") return SweepVar::M;
    if (name == "N_b") return SweepVar::N_b;
    if (name == "N_e") return SweepVar::N_e;
    if (name == "N_i") return SweepVar::N_i;
    throw InvalidInputError("unknown sweep variable `" + name + "`");
}

void ExperimentSpec::validate() const {
    base.validate();
    if (trials < 1) throw InvalidInputError("ExperimentSpec: trials must be >= 1");
    if (sweep_values.empty()) throw InvalidInputError("ExperimentSpec: no sweep values");
    for (size_t i = 1; i < sweep_values.size(); ++i)
        if (!(sweep_values[i - 1] < sweep_values[i]))
            throw InvalidInputError("ExperimentSpec: sweep values must be strictly increasing");
    if (sweep != SweepVar::P_db) {
        for (double v : sweep_values) {
            if (v != std::floor(v)) throw InvalidInputError("ExperimentSpec: count sweep values must be integers");
            const double lo = (sweep == SweepVar::N_i) ? 0.0 : 1.0;
            if (v < lo) throw InvalidInputError("ExperimentSpec: sweep value out of range");
        }
    }
    if (methods.empty()) throw InvalidInputError("ExperimentSpec: no methods selected");
    for (size_t i = 0; i < methods.size(); ++i)
        for (size_t j = i + 1; j < methods.size(); ++j)
            if (methods[i] == methods[j]) throw InvalidInputError("ExperimentSpec: duplicate method");
}

SystemConfig apply_sweep_value(const SystemConfig& base, SweepVar var, double value) {
    SystemConfig cfg = base;
    switch (var) {
        case SweepVar::P_db: cfg.P = std::pow(10.0, value / 20.0); break;
        case SweepVar::M: cfg.M = static_cast<int>(value); break;
        case SweepVar::N_b: cfg.N_b = static_cast<int>(value); break;
        case SweepVar::N_e: cfg.N_e = static_cast<int>(value); break;
        case SweepVar::N_i: cfg.N_i = static_cast<int>(value); break;
    }
    cfg.validate();
    return cfg;
}

ExperimentSpec parse_experiment_spec(std::istream& in) {
    std::vector<KeyValueEntry> entries = parse_key_value_file(in);
    ExperimentSpec spec;
    spec.base = system_config_from_entries(entries);

    auto take = [&entries](const char* key, auto&& apply) {
        for (auto it = entries.begin(); it != entries.end(); ++it) {
            if (it->key == key) {
                apply(*it);
                entries.erase(it);
                return true;
            }
        }
        return false;
    };
    auto split_ws = [](const std::string& s) {
        std::vector<std::string> parts;
        std::istringstream iss(s);
        std::string tok;
        while (iss >> tok) {
            // allow comma-separated lists too
            for (char& c : tok)
                if (c == ',') c = ' ';
            std::istringstream inner(tok);
            std::string t2;
            while (inner >> t2) parts.push_back(t2);
        }
        return parts;
    };

    take("sweep", [&](const KeyValueEntry& e) {
        try {
            spec.sweep = sweep_var_from_string(e.value);
        } catch (const InvalidInputError& err) {
            throw ParseError(err.what(), e.line);
        }
    });
    take("sweep_values", [&](const KeyValueEntry& e) {
        spec.sweep_values.clear();
        for (const std::string& tok : split_ws(e.value)) {
            try {
                size_t pos = 0;
                spec.sweep_values.push_back(std::stod(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError("sweep_values: not a number: `" + tok + "`", e.line);
            }
        }
    });
    take("trials", [&](const KeyValueEntry& e) {
        try {
            spec.trials = std::stoi(e.value);
        } catch (const std::exception&) {
            throw ParseError("trials: not an integer", e.line);
        }
    });
    take("seed", [&](const KeyValueEntry& e) {
        try {
            spec.seed = std::stoull(e.value);
        } catch (const std::exception&) {
            throw ParseError("seed: not an unsigned integer", e.line);
        }
    });
    take("methods", [&](const KeyValueEntry& e) {
        spec.methods.clear();
        for (const std::string& tok : split_ws(e.value)) {
            try {
                spec.methods.push_back(method_from_string(tok));
            } catch (const InvalidInputError& err) {
                throw ParseError(err.what(), e.line);
            }
        }
    });
    take("out_dir", [&](const KeyValueEntry& e) { spec.out_dir = e.value; });

    if (!entries.empty())
        throw ParseError("unknown key `" + entries.front().key + "`", entries.front().line);
    if (spec.sweep_values.empty())
        spec.sweep_values = {static_cast<double>(spec.base.M)};  // degenerate single point
    try {
        spec.validate();
    } catch (const InvalidInputError& err) {
        throw ParseError(err.what(), 0);
    }
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open spec file `" + path + "`");
    return parse_experiment_spec(in);
}

ChannelSet trial_channels(const ExperimentSpec& spec, int value_index, int trial,
                          SystemConfig* cfg_out) {
    const SystemConfig cfg =
        apply_sweep_value(spec.base, spec.sweep, spec.sweep_values.at(value_index));
    if (cfg_out) *cfg_out = cfg;
    return sample_channels(cfg, derive_stream(spec.seed, kChannelStream, value_index), trial);
}

BeamformerState trial_init(const ExperimentSpec& spec, const SystemConfig& cfg,
                           int value_index, int trial) {
    return random_feasible_state(cfg.M, cfg.N_i, cfg.P,
                                 derive_stream(spec.seed, kInitStream, value_index, trial));
}

SolveReport run_method(Method m, const ChannelSet& ch, const BeamformerState& init,
                       const SystemConfig& cfg) {
    DinkelbachOptions dk;
    dk.inner_tol = cfg.bsum_inner_tol;
    dk.outer_tol = cfg.bsum_outer_tol;
    dk.inner_cap = cfg.bsum_inner_cap;
    dk.outer_cap = cfg.bsum_outer_cap;
    CgdParams cg;
    cg.tol = cfg.cgd_tol;
    cg.max_iter = cfg.cgd_cap;
    cg.armijo_initial_step = cfg.armijo_initial_step;
    cg.armijo_contraction = cfg.armijo_contraction;
    cg.armijo_sufficient_decrease = cfg.armijo_sufficient_decrease;
    cg.max_backtracks = cfg.armijo_max_backtracks;

    switch (m) {
        case Method::dinkelbach_bsum: return dinkelbach_solve(ch, init, dk, cfg.noise_power);
        case Method::pmcgd: return pmcgd_solve(ch, init, cg, cfg.noise_power);
        case Method::random_irs: return random_irs_solve(ch, init, dk, cfg.noise_power);
        case Method::no_irs: return no_irs_solve(ch, init, dk, cfg.noise_power);
    }
    throw InvalidInputError("run_method: bad method");
}

namespace {

double iterations_of(const SolveReport& rep) {
    return rep.method == Method::pmcgd ? rep.outer_iters : rep.inner_iters;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, int workers) {
    spec.validate();
    const int V = static_cast<int>(spec.sweep_values.size());
    const int T = spec.trials;
    const int n_methods = static_cast<int>(spec.methods.size());
    const int items = V * T;

    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, items));

    // One slot per (value, trial, method); workers fill disjoint slots, the
    // collector below reads them in deterministic order.
    std::vector<TrialRow> slots(static_cast<size_t>(items) * n_methods);

    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int item = next.fetch_add(1);
            if (item >= items) return;
            const int value_index = item / T;
            const int trial = item % T;
            SystemConfig cfg;
            const ChannelSet ch = trial_channels(spec, value_index, trial, &cfg);
            const BeamformerState init = trial_init(spec, cfg, value_index, trial);
            for (int mi = 0; mi < n_methods; ++mi) {
                TrialRow& row = slots[static_cast<size_t>(item) * n_methods + mi];
                row.sweep_value = spec.sweep_values[value_index];
                row.value_index = value_index;
                row.trial = trial;
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    row.report = run_method(spec.methods[mi], ch, init, cfg);
                } catch (const std::exception& err) {
                    row.report.method = spec.methods[mi];
                    row.error = err.what();
                }
                const auto t1 = std::chrono::steady_clock::now();
                row.report.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
                row.report.seed = spec.seed;
                row.report.trial = trial;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();

    ExperimentResult res;
    res.spec = spec;
    res.rows = std::move(slots);

    // Summaries accumulate in trial order so means are reproducible exactly.
    for (int v = 0; v < V; ++v) {
        for (int mi = 0; mi < n_methods; ++mi) {
            SummaryRow srow;
            srow.sweep_value = spec.sweep_values[v];
            srow.method = spec.methods[mi];
            srow.trials = T;
            double sum = 0.0, sum_iters = 0.0, sum_wall = 0.0;
            for (int t = 0; t < T; ++t) {
                const TrialRow& row = res.rows[(static_cast<size_t>(v) * T + t) * n_methods + mi];
                sum += row.report.secrecy_rate_bits;
                sum_iters += iterations_of(row.report);
                sum_wall += row.report.wall_time_s;
            }
            srow.mean_rate = sum / T;
            srow.mean_iters = sum_iters / T;
            srow.mean_wall_s = sum_wall / T;
            double ss = 0.0;
            for (int t = 0; t < T; ++t) {
                const TrialRow& row = res.rows[(static_cast<size_t>(v) * T + t) * n_methods + mi];
                const double dev = row.report.secrecy_rate_bits - srow.mean_rate;
                ss += dev * dev;
            }
            srow.stderr_rate = T > 1 ? std::sqrt(ss / (T - 1)) / std::sqrt(double(T)) : 0.0;
            res.summary.push_back(srow);
        }
    }

    write_result_files(res, spec.out_dir);
    return res;
}

void write_result_files(const ExperimentResult& res, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream trials(out_dir + "/trials.csv");
        trials << "sweep_value,trial,method,secrecy_rate_bits,fractional_objective,"
                  "outer_iters,inner_iters,final_grad_norm,termination\n";
        for (const TrialRow& row : res.rows) {
            trials << fmt(row.sweep_value) << ',' << row.trial << ','
                   << to_string(row.report.method) << ',';
            if (!row.error.empty()) {
                trials << ",,,,,error\n";
                continue;
            }
            trials << fmt(row.report.secrecy_rate_bits) << ','
                   << fmt(row.report.final_objective) << ',' << row.report.outer_iters << ','
                   << row.report.inner_iters << ',';
            if (row.report.final_grad_norm) trials << fmt(*row.report.final_grad_norm);
            trials << ',' << to_string(row.report.termination) << '\n';
        }
    }
    {
        std::ofstream sweep(out_dir + "/sweep.csv");
        sweep << "value,method,mean_rate_bits,stderr,mean_iters,trials\n";
        for (const SummaryRow& s : res.summary)
            sweep << fmt(s.sweep_value) << ',' << to_string(s.method) << ','
                  << fmt(s.mean_rate) << ',' << fmt(s.stderr_rate) << ','
                  << fmt(s.mean_iters) << ',' << s.trials << '\n';
    }
    {
        // Wall-clock means live apart from the deterministic result files.
        std::ofstream timing(out_dir + "/timing.csv");
        timing << "value,method,mean_walltime_s\n";
        for (const SummaryRow& s : res.summary)
            timing << fmt(s.sweep_value) << ',' << to_string(s.method) << ','
                   << fmt(s.mean_wall_s) << '\n';
    }
}

void export_convergence(const SolveReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_convergence: cannot open `" + path + "`");
    out << "iteration,objective,alpha,grad_norm\n";
    if (rep.dinkelbach) {
        // One row per inner iteration; the alpha column repeats the value
        // the block ran under.
        const DinkelbachTrace& tr = *rep.dinkelbach;
        size_t cum = 1;  // objective_history[0] is the initial point
        for (size_t block = 0; block < tr.inner_objective_histories.size(); ++block) {
            const size_t iters = tr.inner_objective_histories[block].size() - 1;
            for (size_t i = 0; i < iters; ++i, ++cum)
                out << cum << ',' << fmt(rep.objective_history.at(cum)) << ','
                    << fmt(tr.alpha_history.at(block)) << ",\n";
        }
    } else {
        for (size_t i = 1; i < rep.objective_history.size(); ++i) {
            out << i << ',' << fmt(rep.objective_history[i]) << ",,";
            if (i < rep.grad_norm_history.size()) out << fmt(rep.grad_norm_history[i]);
            out << '\n';
        }
    }
    if (!out) throw std::runtime_error("export_convergence: write failed for `" + path + "`");
}

}  // namespace secbeam

#pragma once

// System configuration, seeded Rayleigh-fading channel generation with
// distance-based path loss, and effective-channel composition through the
// reflecting surface.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "secbeam/numerics.hpp"

namespace secbeam {

/// Static description of the link budget and solver budgets. Amplitudes
/// and powers are linear; only ref_loss_db is kept in dB because it enters
/// the path-loss formula directly. The per-antenna amplitude P is the
/// constant modulus of every transmit weight (per-antenna power P^2).
struct SystemConfig {
    int M = 64;    // transmit antennas
    int N_b = 4;   // receive antennas at the legitimate receiver
    int N_e = 4;   // receive antennas at the eavesdropper
    int N_i = 100; // reflecting elements (0 = no surface)

    double P = 1.0;
    double ref_loss_db = -30.0;  // path loss at 1 m
    double path_exponent = 3.0;
    double dist_alice_bob = 80.0;
    double dist_alice_irs = 30.0;
    double dist_alice_eve = 80.0;
    double dist_irs_bob = 40.0;
    double dist_irs_eve = 40.0;
    double noise_power = 1.0;  // linear, per receive antenna

    // Solver budgets (see dinkelbach_bsum.hpp / pmcgd.hpp).
    double bsum_inner_tol = 1e-6;
    double bsum_outer_tol = 1e-6;
    int bsum_inner_cap = 500;
    int bsum_outer_cap = 50;
    double cgd_tol = 1e-6;
    int cgd_cap = 2000;
    double armijo_initial_step = 1.0;
    double armijo_contraction = 0.5;
    double armijo_sufficient_decrease = 1e-4;
    int armijo_max_backtracks = 50;

    /// Throws InvalidInputError on violated invariants (counts, signs).
    void validate() const;
};

/// The five channel matrices of one fading realization (linear amplitude
/// gain). Dimensions: H_ab N_b x M, H_ae N_e x M, H_ai N_i x M,
/// H_ib N_b x N_i, H_ie N_e x N_i.
struct ChannelSet {
    CMat H_ab, H_ae, H_ai, H_ib, H_ie;
};

/// Linear amplitude gain of one link: sqrt(10^(ref_loss_db/10) * d^-exp).
/// The square is the power gain.
double path_loss_gain(double distance_m, const SystemConfig& cfg);

/// One fading realization: i.i.d. CN(0,1) small-scale entries scaled by the
/// link's amplitude gain. Deterministic in (seed, trial); each link draws
/// from its own derived substream, so trials and links are order-free.
ChannelSet sample_channels(const SystemConfig& cfg, uint64_t seed, uint64_t trial);

/// H_direct + H_ir * diag(theta) * H_ai. An empty theta yields H_direct
/// (the no-surface degenerate case).
CMat effective_channel(const CMat& H_direct, const CMat& H_ir, const CVec& theta,
                       const CMat& H_ai);

// ---- Flat key-value config files ------------------------------------
//
// Schema: one `key = value` pair per line, `#` starts a comment. P is
// written as P_db and converted to the linear amplitude 10^(P_db/20) at
// parse time. See README for the full key list.

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line;
};

struct KeyValueEntry {
    std::string key;
    std::string value;
    int line = 0;
};

/// Parses the flat key=value format. Duplicate keys are an error.
std::vector<KeyValueEntry> parse_key_value_file(std::istream& in);

/// Consumes the system keys from `entries` (erasing them) and returns the
/// config; unknown keys are left for the caller. Missing keys keep their
/// defaults. Throws ParseError on malformed values.
SystemConfig system_config_from_entries(std::vector<KeyValueEntry>& entries);

/// Serializes cfg in the same schema (P written back as P_db).
void write_system_config(std::ostream& out, const SystemConfig& cfg);

}  // namespace secbeam

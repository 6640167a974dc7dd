#include "secbeam/channel.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "secbeam/rng.hpp"

namespace secbeam {

namespace {

// Substream labels for the five links.
enum : uint64_t { kLinkAB = 1, kLinkAE, kLinkAI, kLinkIB, kLinkIE };

CMat sample_matrix(int rows, int cols, double gain, uint64_t seed, uint64_t trial, uint64_t link) {
    CMat H(rows, cols);
    Rng rng(derive_stream(seed, trial, link));
    for (cplx& z : H.a) z = gain * rng.cnormal();
    return H;
}

}  // namespace

void SystemConfig::validate() const {
    auto bad = [](const char* msg) { throw InvalidInputError(msg); };
    if (M < 1 || N_b < 1 || N_e < 1) bad("SystemConfig: antenna counts must be >= 1");
    if (N_i < 0) bad("SystemConfig: N_i must be >= 0");
    if (!(P > 0.0)) bad("SystemConfig: P must be positive");
    if (!(dist_alice_bob > 0.0 && dist_alice_irs > 0.0 && dist_alice_eve > 0.0 &&
          dist_irs_bob > 0.0 && dist_irs_eve > 0.0))
        bad("SystemConfig: distances must be positive");
    if (!(noise_power > 0.0)) bad("SystemConfig: noise_power must be positive");
    if (!(bsum_inner_tol > 0.0 && bsum_outer_tol > 0.0 && cgd_tol > 0.0))
        bad("SystemConfig: tolerances must be positive");
    if (bsum_inner_cap < 1 || bsum_outer_cap < 1 || cgd_cap < 1 || armijo_max_backtracks < 1)
        bad("SystemConfig: iteration caps must be >= 1");
    if (!(armijo_contraction > 0.0 && armijo_contraction < 1.0))
        bad("SystemConfig: armijo_contraction must lie in (0,1)");
    if (!(armijo_sufficient_decrease > 0.0 && armijo_sufficient_decrease < 1.0))
        bad("SystemConfig: armijo_sufficient_decrease must lie in (0,1)");
}

double path_loss_gain(double distance_m, const SystemConfig& cfg) {
    return std::sqrt(std::pow(10.0, cfg.ref_loss_db / 10.0) *
                     std::pow(distance_m, -cfg.path_exponent));
}

ChannelSet sample_channels(const SystemConfig& cfg, uint64_t seed, uint64_t trial) {
    cfg.validate();
    ChannelSet ch;
    ch.H_ab = sample_matrix(cfg.N_b, cfg.M, path_loss_gain(cfg.dist_alice_bob, cfg), seed, trial, kLinkAB);
    ch.H_ae = sample_matrix(cfg.N_e, cfg.M, path_loss_gain(cfg.dist_alice_eve, cfg), seed, trial, kLinkAE);
    ch.H_ai = sample_matrix(cfg.N_i, cfg.M, path_loss_gain(cfg.dist_alice_irs, cfg), seed, trial, kLinkAI);
    ch.H_ib = sample_matrix(cfg.N_b, cfg.N_i, path_loss_gain(cfg.dist_irs_bob, cfg), seed, trial, kLinkIB);
    ch.H_ie = sample_matrix(cfg.N_e, cfg.N_i, path_loss_gain(cfg.dist_irs_eve, cfg), seed, trial, kLinkIE);
    return ch;
}

CMat effective_channel(const CMat& H_direct, const CMat& H_ir, const CVec& theta,
                       const CMat& H_ai) {
    if (theta.empty()) return H_direct;
    const int n_i = static_cast<int>(theta.size());
    if (H_ir.cols != n_i || H_ai.rows != n_i)
        throw InvalidInputError("effective_channel: surface dimensions inconsistent");
    if (H_ir.rows != H_direct.rows || H_ai.cols != H_direct.cols)
        throw InvalidInputError("effective_channel: direct/composite dimensions inconsistent");
    CMat out = H_direct;
    for (int i = 0; i < H_ir.rows; ++i) {
        for (int j = 0; j < n_i; ++j) {
            const cplx c = H_ir(i, j) * theta[j];
            if (c == 0.0) continue;
            const cplx* arow = &H_ai.a[static_cast<size_t>(j) * H_ai.cols];
            cplx* orow = &out.a[static_cast<size_t>(i) * out.cols];
            for (int m = 0; m < H_ai.cols; ++m) orow[m] += c * arow[m];
        }
    }
    return out;
}

// ---- config file ------------------------------------------------------

std::vector<KeyValueEntry> parse_key_value_file(std::istream& in) {
    std::vector<KeyValueEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const char* ws = " \t\r\n";
            const size_t b = s.find_first_not_of(ws);
            if (b == std::string::npos) return std::string();
            const size_t e = s.find_last_not_of(ws);
            return s.substr(b, e - b + 1);
        };
        const std::string t = trim(line);
        if (t.empty()) continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected `key = value`", line_no);
        KeyValueEntry e;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty()) throw ParseError("empty key", line_no);
        if (e.value.empty()) throw ParseError("empty value for key `" + e.key + "`", line_no);
        for (const auto& prev : entries)
            if (prev.key == e.key) throw ParseError("duplicate key `" + e.key + "`", line_no);
        entries.push_back(std::move(e));
    }
    return entries;
}

namespace {

double parse_double(const KeyValueEntry& e) {
    try {
        size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("key `" + e.key + "`: not a number: `" + e.value + "`", e.line);
    }
}

int parse_int(const KeyValueEntry& e) {
    try {
        size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ParseError("key `" + e.key + "`: not an integer: `" + e.value + "`", e.line);
    }
}

uint64_t parse_u64(const KeyValueEntry& e) {
    try {
        size_t pos = 0;
        const unsigned long long v = std::stoull(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("key `" + e.key + "`: not an unsigned integer: `" + e.value + "`", e.line);
    }
}

}  // namespace

SystemConfig system_config_from_entries(std::vector<KeyValueEntry>& entries) {
    SystemConfig cfg;
    int cfg_line = 0;
    auto take = [&entries](const char* key, auto&& apply) {
        for (auto it = entries.begin(); it != entries.end(); ++it) {
            if (it->key == key) {
                apply(*it);
                entries.erase(it);
                return;
            }
        }
    };
    take("M", [&](const KeyValueEntry& e) { cfg.M = parse_int(e); cfg_line = e.line; });
    take("N_b", [&](const KeyValueEntry& e) { cfg.N_b = parse_int(e); });
    take("N_e", [&](const KeyValueEntry& e) { cfg.N_e = parse_int(e); });
    take("N_i", [&](const KeyValueEntry& e) { cfg.N_i = parse_int(e); });
    take("P_db", [&](const KeyValueEntry& e) { cfg.P = std::pow(10.0, parse_double(e) / 20.0); });
    take("ref_loss_db", [&](const KeyValueEntry& e) { cfg.ref_loss_db = parse_double(e); });
    take("path_exponent", [&](const KeyValueEntry& e) { cfg.path_exponent = parse_double(e); });
    take("dist_alice_bob", [&](const KeyValueEntry& e) { cfg.dist_alice_bob = parse_double(e); });
    take("dist_alice_irs", [&](const KeyValueEntry& e) { cfg.dist_alice_irs = parse_double(e); });
    take("dist_alice_eve", [&](const KeyValueEntry& e) { cfg.dist_alice_eve = parse_double(e); });
    take("dist_irs_bob", [&](const KeyValueEntry& e) { cfg.dist_irs_bob = parse_double(e); });
    take("dist_irs_eve", [&](const KeyValueEntry& e) { cfg.dist_irs_eve = parse_double(e); });
    take("noise_power", [&](const KeyValueEntry& e) { cfg.noise_power = parse_double(e); });
    take("bsum_inner_tol", [&](const KeyValueEntry& e) { cfg.bsum_inner_tol = parse_double(e); });
    take("bsum_outer_tol", [&](const KeyValueEntry& e) { cfg.bsum_outer_tol = parse_double(e); });
    take("bsum_inner_cap", [&](const KeyValueEntry& e) { cfg.bsum_inner_cap = parse_int(e); });
    take("bsum_outer_cap", [&](const KeyValueEntry& e) { cfg.bsum_outer_cap = parse_int(e); });
    take("cgd_tol", [&](const KeyValueEntry& e) { cfg.cgd_tol = parse_double(e); });
    take("cgd_cap", [&](const KeyValueEntry& e) { cfg.cgd_cap = parse_int(e); });
    take("armijo_initial_step", [&](const KeyValueEntry& e) { cfg.armijo_initial_step = parse_double(e); });
    take("armijo_contraction", [&](const KeyValueEntry& e) { cfg.armijo_contraction = parse_double(e); });
    take("armijo_sufficient_decrease",
         [&](const KeyValueEntry& e) { cfg.armijo_sufficient_decrease = parse_double(e); });
    take("armijo_max_backtracks",
         [&](const KeyValueEntry& e) { cfg.armijo_max_backtracks = parse_int(e); });
    try {
        cfg.validate();
    } catch (const InvalidInputError& err) {
        throw ParseError(err.what(), cfg_line);
    }
    return cfg;
}

void write_system_config(std::ostream& out, const SystemConfig& cfg) {
    char buf[64];
    auto num = [&buf](double v) {
        snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "M = " << cfg.M << "\n"
        << "N_b = " << cfg.N_b << "\n"
        << "N_e = " << cfg.N_e << "\n"
        << "N_i = " << cfg.N_i << "\n"
        << "P_db = " << num(20.0 * std::log10(cfg.P)) << "\n"
        << "ref_loss_db = " << num(cfg.ref_loss_db) << "\n"
        << "path_exponent = " << num(cfg.path_exponent) << "\n"
        << "dist_alice_bob = " << num(cfg.dist_alice_bob) << "\n"
        << "dist_alice_irs = " << num(cfg.dist_alice_irs) << "\n"
        << "dist_alice_eve = " << num(cfg.dist_alice_eve) << "\n"
        << "dist_irs_bob = " << num(cfg.dist_irs_bob) << "\n"
        << "dist_irs_eve = " << num(cfg.dist_irs_eve) << "\n"
        << "noise_power = " << num(cfg.noise_power) << "\n"
        << "bsum_inner_tol = " << num(cfg.bsum_inner_tol) << "\n"
        << "bsum_outer_tol = " << num(cfg.bsum_outer_tol) << "\n"
        << "bsum_inner_cap = " << cfg.bsum_inner_cap << "\n"
        << "bsum_outer_cap = " << cfg.bsum_outer_cap << "\n"
        << "cgd_tol = " << num(cfg.cgd_tol) << "\n"
        << "cgd_cap = " << cfg.cgd_cap << "\n"
        << "armijo_initial_step = " << num(cfg.armijo_initial_step) << "\n"
        << "armijo_contraction = " << num(cfg.armijo_contraction) << "\n"
        << "armijo_sufficient_decrease = " << num(cfg.armijo_sufficient_decrease) << "\n"
        << "armijo_max_backtracks = " << cfg.armijo_max_backtracks << "\n";
}

}  // namespace secbeam

#include "secbeam/objective.hpp"

#include <cmath>

#include "secbeam/rng.hpp"

namespace secbeam {

bool is_feasible(const BeamformerState& s, double tol) {
    if (s.w.empty() || !all_finite(s.w) || !all_finite(s.theta)) return false;
    const double P = std::abs(s.w[0]);
    if (!(P > 0.0)) return false;
    for (const cplx& wi : s.w)
        if (std::abs(std::abs(wi) - P) > tol * P) return false;
    for (const cplx& tj : s.theta)
        if (std::abs(std::abs(tj) - 1.0) > tol) return false;
    return true;
}

void validate_feasible(const BeamformerState& s) {
    if (!is_feasible(s))
        throw InvalidInputError("state violates the constant-modulus invariants");
}

double amplitude_of(const BeamformerState& s) {
    if (s.w.empty()) throw InvalidInputError("amplitude_of: empty beamformer");
    return std::abs(s.w[0]);
}

BeamformerState random_feasible_state(int M, int N_i, double P, uint64_t seed) {
    Rng rng(seed);
    BeamformerState s;
    s.w.resize(M);
    s.theta.resize(N_i);
    for (cplx& wi : s.w) wi = std::polar(P, rng.uniform_angle());
    for (cplx& tj : s.theta) tj = std::polar(1.0, rng.uniform_angle());
    return s;
}

namespace {

double received_power(const CMat& H_direct, const CMat& H_ir, const CVec& theta,
                      const CMat& H_ai, const CVec& w) {
    const CMat G = effective_channel(H_direct, H_ir, theta, H_ai);
    return norm2(matvec(G, w));
}

}  // namespace

std::pair<double, double> rates(const ChannelSet& ch, const BeamformerState& s,
                                double noise_power) {
    const double pb = received_power(ch.H_ab, ch.H_ib, s.theta, ch.H_ai, s.w) / noise_power;
    const double pe = received_power(ch.H_ae, ch.H_ie, s.theta, ch.H_ai, s.w) / noise_power;
    return {std::log2(1.0 + pb), std::log2(1.0 + pe)};
}

double secrecy_rate(const ChannelSet& ch, const BeamformerState& s, double noise_power) {
    const auto [cb, ce] = rates(ch, s, noise_power);
    return std::max(cb - ce, 0.0);
}

double fractional_objective(const ChannelSet& ch, const BeamformerState& s,
                            double noise_power) {
    const double pb = received_power(ch.H_ab, ch.H_ib, s.theta, ch.H_ai, s.w) / noise_power;
    const double pe = received_power(ch.H_ae, ch.H_ie, s.theta, ch.H_ai, s.w) / noise_power;
    return (1.0 + pe) / (1.0 + pb);
}

CMat build_A_from_effective(const CMat& G_e, const CMat& G_b, double alpha,
                            double noise_power) {
    if (!(alpha > 0.0)) throw InvalidInputError("build_A: alpha must be positive");
    CMat A = sub(gram(G_e), scale(gram(G_b), alpha));
    return scale(A, 1.0 / noise_power);
}

CMat build_A(const ChannelSet& ch, const CVec& theta, double alpha, double noise_power) {
    return build_A_from_effective(effective_channel(ch.H_ae, ch.H_ie, theta, ch.H_ai),
                                  effective_channel(ch.H_ab, ch.H_ib, theta, ch.H_ai), alpha,
                                  noise_power);
}

namespace {

ThetaQuadratics theta_quadratics_core(const ChannelSet& ch, const CMat& B, const CMat& E,
                                      const CVec& w, double alpha, double inv_noise) {
    ThetaQuadratics tq;
    tq.B = B;
    tq.E = E;

    const CVec v = matvec(ch.H_ai, w);
    const int n_i = static_cast<int>(v.size());
    tq.C = CMat(n_i, n_i);
    for (int i = 0; i < n_i; ++i)
        for (int j = 0; j < n_i; ++j) tq.C(i, j) = v[i] * std::conj(v[j]);

    // d_i = [H_ai w]_i * [w^H H_ae^H H_ie]_i / noise, and likewise f via Bob.
    const CVec u_e = matvec(ch.H_ae, w);
    const CVec u_b = matvec(ch.H_ab, w);
    const CVec s_e = conj(matvec(adjoint(ch.H_ie), u_e));
    const CVec s_b = conj(matvec(adjoint(ch.H_ib), u_b));
    tq.d.resize(n_i);
    tq.f.resize(n_i);
    for (int i = 0; i < n_i; ++i) {
        tq.d[i] = v[i] * s_e[i] * inv_noise;
        tq.f[i] = v[i] * s_b[i] * inv_noise;
    }

    tq.P_mat = hadamard(sub(tq.B, scale(tq.E, alpha)), transpose(tq.C));
    return tq;
}

}  // namespace

ThetaQuadratics build_theta_quadratics(const ChannelSet& ch, const CVec& w, double alpha,
                                       double noise_power) {
    const double inv = 1.0 / noise_power;
    return theta_quadratics_core(ch, scale(gram(ch.H_ie), inv), scale(gram(ch.H_ib), inv), w,
                                 alpha, inv);
}

GradPieces build_grad_pieces(const ChannelSet& ch, const BeamformerState& s,
                             double noise_power) {
    validate_feasible(s);
    const double P = amplitude_of(s);
    const int M = static_cast<int>(s.w.size());
    const int n_i = static_cast<int>(s.theta.size());
    const double inv = 1.0 / noise_power;

    GradPieces gp;
    const CMat G_e = effective_channel(ch.H_ae, ch.H_ie, s.theta, ch.H_ai);
    const CMat G_b = effective_channel(ch.H_ab, ch.H_ib, s.theta, ch.H_ai);
    gp.G1 = add_scaled_identity(scale(gram(G_e), inv), 1.0 / (M * P * P));
    gp.G2 = add_scaled_identity(scale(gram(G_b), inv), 1.0 / (M * P * P));

    const ThetaQuadratics tq = build_theta_quadratics(ch, s.w, 1.0, noise_power);
    if (n_i > 0) {
        gp.J1 = add_scaled_identity(hadamard(tq.B, transpose(tq.C)), 1.0 / n_i);
        gp.J3 = add_scaled_identity(hadamard(tq.E, transpose(tq.C)), 1.0 / n_i);
        // J2, J4 as the full outer-product matrices; only their diagonals
        // (= tq.d, tq.f) enter the gradient.
        const CVec v = matvec(ch.H_ai, s.w);
        const CVec s_e = conj(matvec(adjoint(ch.H_ie), matvec(ch.H_ae, s.w)));
        const CVec s_b = conj(matvec(adjoint(ch.H_ib), matvec(ch.H_ab, s.w)));
        gp.J2 = CMat(n_i, n_i);
        gp.J4 = CMat(n_i, n_i);
        for (int i = 0; i < n_i; ++i)
            for (int j = 0; j < n_i; ++j) {
                gp.J2(i, j) = v[i] * s_e[j] * inv;
                gp.J4(i, j) = v[i] * s_b[j] * inv;
            }
    }
    gp.o = norm2(matvec(ch.H_ae, s.w)) * inv;
    gp.p = norm2(matvec(ch.H_ab, s.w)) * inv;
    return gp;
}

// The gradients differentiate the fractional objective as a free function
// of (w, theta): the "1 +" constants stay constant off the manifold, so an
// ambient-stationary point has an exactly-zero gradient. (The quotient
// forms of GradPieces replace those constants by ||w||^2/(M P^2) and
// ||theta||^2/N_i; the difference is a purely radial field that the
// tangent projection would remove anyway.)
CVec euclid_grad_w(const ChannelSet& ch, const BeamformerState& s, double noise_power) {
    validate_feasible(s);
    const double inv = 1.0 / noise_power;
    const CMat G_e = effective_channel(ch.H_ae, ch.H_ie, s.theta, ch.H_ai);
    const CMat G_b = effective_channel(ch.H_ab, ch.H_ib, s.theta, ch.H_ai);
    CVec ye = matvec(adjoint(G_e), matvec(G_e, s.w));
    CVec yb = matvec(adjoint(G_b), matvec(G_b, s.w));
    for (cplx& z : ye) z *= inv;
    for (cplx& z : yb) z *= inv;
    const double num = 1.0 + vdot(s.w, ye).real();
    const double den = 1.0 + vdot(s.w, yb).real();
    CVec grad(s.w.size());
    const double inv_den2 = 1.0 / (den * den);
    for (size_t i = 0; i < grad.size(); ++i)
        grad[i] = (ye[i] * den - yb[i] * num) * inv_den2;
    return grad;
}

CVec euclid_grad_theta(const ChannelSet& ch, const BeamformerState& s, double noise_power) {
    validate_feasible(s);
    const int n_i = static_cast<int>(s.theta.size());
    if (n_i == 0) return {};
    const ThetaQuadratics tq = build_theta_quadratics(ch, s.w, 1.0, noise_power);
    const CMat Q1 = hadamard(tq.B, transpose(tq.C));
    const CMat Q3 = hadamard(tq.E, transpose(tq.C));
    const CVec g1 = matvec(Q1, s.theta);
    const CVec g3 = matvec(Q3, s.theta);
    const double inv = 1.0 / noise_power;
    const double o = norm2(matvec(ch.H_ae, s.w)) * inv;
    const double p = norm2(matvec(ch.H_ab, s.w)) * inv;
    const double num = 1.0 + vdot(s.theta, g1).real() + 2.0 * vdot(s.theta, conj(tq.d)).real() + o;
    const double den = 1.0 + vdot(s.theta, g3).real() + 2.0 * vdot(s.theta, conj(tq.f)).real() + p;
    CVec grad(n_i);
    const double inv_den2 = 1.0 / (den * den);
    for (int i = 0; i < n_i; ++i) {
        const cplx gn = g1[i] + std::conj(tq.d[i]);
        const cplx gd = g3[i] + std::conj(tq.f[i]);
        grad[i] = (gn * den - gd * num) * inv_den2;
    }
    return grad;
}

// ---- ObjectiveWorkspace ------------------------------------------------

ObjectiveWorkspace::ObjectiveWorkspace(const ChannelSet& ch, double noise_power)
    : ch_(&ch), noise_(noise_power), inv_noise_(1.0 / noise_power) {
    gram_ie_ = scale(gram(ch.H_ie), inv_noise_);
    gram_ib_ = scale(gram(ch.H_ib), inv_noise_);
}

std::pair<double, double> ObjectiveWorkspace::numden(const CVec& w, const CVec& theta) const {
    const ChannelSet& ch = *ch_;
    CVec ew = matvec(ch.H_ae, w);
    CVec bw = matvec(ch.H_ab, w);
    if (!theta.empty()) {
        const CVec tv = hadamard(theta, matvec(ch.H_ai, w));
        const CVec ie = matvec(ch.H_ie, tv);
        const CVec ib = matvec(ch.H_ib, tv);
        for (size_t i = 0; i < ew.size(); ++i) ew[i] += ie[i];
        for (size_t i = 0; i < bw.size(); ++i) bw[i] += ib[i];
    }
    return {1.0 + norm2(ew) * inv_noise_, 1.0 + norm2(bw) * inv_noise_};
}

double ObjectiveWorkspace::value(const CVec& w, const CVec& theta) const {
    const auto [num, den] = numden(w, theta);
    return num / den;
}

ThetaQuadratics ObjectiveWorkspace::theta_quadratics(const CVec& w, double alpha) const {
    return theta_quadratics_core(*ch_, gram_ie_, gram_ib_, w, alpha, inv_noise_);
}

void ObjectiveWorkspace::euclid_grad(const BeamformerState& s, CVec& grad_w,
                                     CVec& grad_theta) const {
    const ChannelSet& ch = *ch_;
    const int M = static_cast<int>(s.w.size());
    const int n_i = static_cast<int>(s.theta.size());

    const CVec v = n_i > 0 ? matvec(ch.H_ai, s.w) : CVec{};
    const CVec tv = n_i > 0 ? hadamard(s.theta, v) : CVec{};

    // Effective received vectors G_e w, G_b w.
    CVec ew = matvec(ch.H_ae, s.w);
    CVec bw = matvec(ch.H_ab, s.w);
    if (n_i > 0) {
        const CVec ie = matvec(ch.H_ie, tv);
        const CVec ib = matvec(ch.H_ib, tv);
        for (size_t i = 0; i < ew.size(); ++i) ew[i] += ie[i];
        for (size_t i = 0; i < bw.size(); ++i) bw[i] += ib[i];
    }

    // w block: G_e^H (G_e w)/noise applied matrix-free.
    auto apply_eff_adj = [&](const CMat& H_direct, const CMat& H_ir, const CVec& y) {
        CVec r = matvec(adjoint(H_direct), y);
        if (n_i > 0) {
            const CVec t = hadamard(conj(s.theta), matvec(adjoint(H_ir), y));
            const CVec r2 = matvec(adjoint(ch.H_ai), t);
            for (size_t i = 0; i < r.size(); ++i) r[i] += r2[i];
        }
        return r;
    };
    CVec ye = apply_eff_adj(ch.H_ae, ch.H_ie, ew);
    CVec yb = apply_eff_adj(ch.H_ab, ch.H_ib, bw);
    for (int i = 0; i < M; ++i) {
        ye[i] *= inv_noise_;
        yb[i] *= inv_noise_;
    }
    const double num_w = 1.0 + vdot(s.w, ye).real();
    const double den_w = 1.0 + vdot(s.w, yb).real();
    grad_w.resize(M);
    const double inv_den2_w = 1.0 / (den_w * den_w);
    for (int i = 0; i < M; ++i)
        grad_w[i] = (ye[i] * den_w - yb[i] * num_w) * inv_den2_w;

    // theta block. (B o C^T) theta = conj(v) o (B (v o theta)).
    grad_theta.resize(n_i);
    if (n_i == 0) return;
    const CVec u_e = matvec(ch.H_ae, s.w);
    const CVec u_b = matvec(ch.H_ab, s.w);
    const CVec s_e = conj(matvec(adjoint(ch.H_ie), u_e));
    const CVec s_b = conj(matvec(adjoint(ch.H_ib), u_b));
    const CVec bvt = matvec(gram_ie_, tv);
    const CVec evt = matvec(gram_ib_, tv);
    CVec g1(n_i), g3(n_i), d(n_i), f(n_i);
    for (int i = 0; i < n_i; ++i) {
        const cplx cv = std::conj(v[i]);
        g1[i] = cv * bvt[i];
        g3[i] = cv * evt[i];
        d[i] = v[i] * s_e[i] * inv_noise_;
        f[i] = v[i] * s_b[i] * inv_noise_;
    }
    const double o = norm2(u_e) * inv_noise_;
    const double p = norm2(u_b) * inv_noise_;
    const double num_t =
        1.0 + vdot(s.theta, g1).real() + 2.0 * vdot(s.theta, conj(d)).real() + o;
    const double den_t =
        1.0 + vdot(s.theta, g3).real() + 2.0 * vdot(s.theta, conj(f)).real() + p;
    const double inv_den2_t = 1.0 / (den_t * den_t);
    for (int i = 0; i < n_i; ++i) {
        const cplx gn = g1[i] + std::conj(d[i]);
        const cplx gd = g3[i] + std::conj(f[i]);
        grad_theta[i] = (gn * den_t - gd * num_t) * inv_den2_t;
    }
}

}  // namespace secbeam

#pragma once

// Secrecy-rate and fractional-objective evaluation, the quadratic forms the
// block solvers minimize, and the Euclidean gradients of the fractional
// objective. All squared channel norms are divided by the noise power
// before the "1 +", so with unit noise the expressions reduce to their
// textbook form.

#include <cstdint>
#include <utility>

#include "secbeam/channel.hpp"
#include "secbeam/numerics.hpp"

namespace secbeam {

/// A point on the constant-modulus product manifold: |w_i| = P for every
/// transmit weight and |theta_j| = 1 for every surface element.
struct BeamformerState {
    CVec w;
    CVec theta;
};

/// Checks the modulus invariants (1e-9 relative). The common amplitude P
/// is inferred from w itself.
bool is_feasible(const BeamformerState& s, double tol = 1e-9);
void validate_feasible(const BeamformerState& s);  // throws InvalidInputError

/// Common transmit amplitude of a feasible state (|w_0|). Requires M >= 1.
double amplitude_of(const BeamformerState& s);

/// Uniformly random phases on the product manifold, deterministic in seed.
BeamformerState random_feasible_state(int M, int N_i, double P, uint64_t seed);

/// Transmission rates (C_b, C_e) in bits:
///   C_b = log2(1 + ||(H_ab + H_ib diag(theta) H_ai) w||^2 / noise_power).
std::pair<double, double> rates(const ChannelSet& ch, const BeamformerState& s,
                                double noise_power);

/// max(C_b - C_e, 0).
double secrecy_rate(const ChannelSet& ch, const BeamformerState& s, double noise_power);

/// f(w, theta) = (1 + ||Eve term||^2 / noise) / (1 + ||Bob term||^2 / noise).
/// Strictly positive; secrecy_rate == max(-log2 f, 0).
double fractional_objective(const ChannelSet& ch, const BeamformerState& s,
                            double noise_power);

/// A = (G_e^H G_e - alpha G_b^H G_b) / noise_power with G_x the effective
/// channels at theta. Hermitian M x M; indefinite in general.
CMat build_A(const ChannelSet& ch, const CVec& theta, double alpha, double noise_power);

/// Same matrix from already-composed effective channels.
CMat build_A_from_effective(const CMat& G_e, const CMat& G_b, double alpha,
                            double noise_power);

/// Quadratic-form pieces of the theta block for fixed w, noise-normalized:
/// the theta-dependent part of the Dinkelbach surrogate equals
///   theta^H P_mat theta + 2 Re(theta^H (d* - alpha f*)) + const.
/// B and E are Hermitian PSD, C = v v^H (v = H_ai w) is PSD of rank one,
/// P_mat = (B - alpha E) o C^T (elementwise product) is Hermitian.
struct ThetaQuadratics {
    CMat B, C, E;
    CVec d, f;
    CMat P_mat;
};

ThetaQuadratics build_theta_quadratics(const ChannelSet& ch, const CVec& w, double alpha,
                                       double noise_power);

/// Matrices of the two quotient forms whose gradients the solvers use.
/// w^H G1 w / w^H G2 w equals f for every feasible w (the 1/(M P^2) I term
/// reproduces the "1 +" exactly); the theta quotient uses J1..J4 with the
/// scalar direct-link powers o, p.
struct GradPieces {
    CMat G1, G2;        // M x M, Hermitian
    CMat J1, J2, J3, J4;  // N_i x N_i; J1, J3 Hermitian
    double o = 0.0, p = 0.0;
};

GradPieces build_grad_pieces(const ChannelSet& ch, const BeamformerState& s,
                             double noise_power);

/// Wirtinger gradients of fractional_objective treated as a free function
/// of w (resp. theta), scaled so the first-order change along an ambient
/// direction delta is 2 Re<grad, delta>. Both are validated against
/// central differences of fractional_objective itself.
CVec euclid_grad_w(const ChannelSet& ch, const BeamformerState& s, double noise_power);
CVec euclid_grad_theta(const ChannelSet& ch, const BeamformerState& s, double noise_power);

/// Precomputed per-channel products for the iterative solvers: evaluates
/// the fractional objective and its gradients matrix-free, agreeing with
/// the reference operations above to rounding error.
class ObjectiveWorkspace {
  public:
    ObjectiveWorkspace(const ChannelSet& ch, double noise_power);

    double value(const CVec& w, const CVec& theta) const;
    double value(const BeamformerState& s) const { return value(s.w, s.theta); }

    /// Numerator/denominator pair (1 + ||.||^2/noise) of the fraction.
    std::pair<double, double> numden(const CVec& w, const CVec& theta) const;

    void euclid_grad(const BeamformerState& s, CVec& grad_w, CVec& grad_theta) const;

    /// Same result as build_theta_quadratics, reusing the cached grams.
    ThetaQuadratics theta_quadratics(const CVec& w, double alpha) const;

    const ChannelSet& channels() const { return *ch_; }
    double noise_power() const { return noise_; }

  private:
    const ChannelSet* ch_;
    double noise_;
    double inv_noise_;
    CMat gram_ie_, gram_ib_;  // H_ie^H H_ie / noise, H_ib^H H_ib / noise
};

}  // namespace secbeam

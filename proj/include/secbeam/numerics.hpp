#pragma once

// Dense complex-matrix kernels shared by all solvers: products, Hermitian
// dominant-eigenvalue extraction, Hadamard products and per-entry phase
// projection onto constant-modulus sets.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace secbeam {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

struct InvalidInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised by iterative kernels that hit their iteration cap. The best
/// estimate seen so far is carried along so callers can degrade gracefully.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& msg, double estimate, int iters)
        : std::runtime_error(msg), best_estimate(estimate), iterations(iters) {}
    double best_estimate;
    int iterations;
};

/// Dense complex matrix, row-major storage.
struct CMat {
    int rows = 0;
    int cols = 0;
    CVec a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c)) {}

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }
};

CMat identity(int n);
CMat adjoint(const CMat& A);
CMat transpose(const CMat& A);
CMat matmul(const CMat& A, const CMat& B);
CVec matvec(const CMat& A, const CVec& x);
/// AᴴA, assembled so the result is Hermitian to the last bit.
CMat gram(const CMat& A);
CMat add(const CMat& A, const CMat& B);
CMat sub(const CMat& A, const CMat& B);
CMat scale(const CMat& A, cplx s);
/// A + s*I (A square).
CMat add_scaled_identity(const CMat& A, double s);

bool all_finite(const CMat& A);
bool all_finite(const CVec& v);

// Vector helpers.
cplx vdot(const CVec& a, const CVec& b);  // aᴴb
double norm2(const CVec& v);              // squared Euclidean norm
double norm(const CVec& v);
CVec conj(const CVec& v);
CVec hadamard(const CVec& a, const CVec& b);
CVec axpy(cplx alpha, const CVec& x, const CVec& y);  // alpha*x + y

/// Elementwise matrix product. Dimensions must match.
CMat hadamard(const CMat& A, const CMat& B);

/// xᴴ A x. For Hermitian A the imaginary part is rounding noise only.
cplx quadratic_form(const CVec& x, const CMat& A);

struct MaxEigenResult {
    double value = 0.0;
    int iterations = 0;
    bool converged = true;
};

inline constexpr uint64_t kDefaultEigSeed = 0x5eedbeefcafe1234ULL;
inline constexpr int kMaxEigIterations = 5000;

/// Smallest Gershgorin shift with H + shift*I positive semidefinite.
double gershgorin_psd_shift(const CMat& H);

/// Power-iteration core on H + sigma*I given only the matrix action
/// y += H x (same stop rule as the dense entry point below). `sigma` must
/// make H + sigma*I positive semidefinite. Used by the solvers to apply
/// structured matrices through their low-rank factors.
MaxEigenResult power_iteration_shifted(
    int n, double sigma, const std::function<void(const CVec& x, CVec& y)>& accumulate_Hx,
    uint64_t seed = kDefaultEigSeed);

/// Algebraically largest eigenvalue of a Hermitian matrix via power
/// iteration on H + sigma*I, with sigma the smallest Gershgorin bound that
/// makes the shifted matrix positive semidefinite, so its dominant
/// eigenvalue is sigma + lambda_max even when H is indefinite. Stops when
/// the Rayleigh quotient changes by less than 1e-10 relative, or at the
/// iteration cap (converged = false, best estimate returned). Throws
/// InvalidInputError for non-square or non-Hermitian input (1e-10 relative
/// asymmetry).
MaxEigenResult hermitian_max_eigenvalue_estimate(const CMat& H, uint64_t seed = kDefaultEigSeed);

/// Throwing wrapper: ConvergenceError (carrying the estimate) if the cap
/// is reached before the stop rule fires.
double hermitian_max_eigenvalue(const CMat& H, uint64_t seed = kDefaultEigSeed);

/// Per-entry projection onto the circle of radius `magnitude`: keeps each
/// entry's phase, fixes its modulus. Entries already on the circle (within
/// a few ulp) pass through unchanged, which makes the map exactly
/// idempotent. An exactly-zero entry maps to phase 0.
CVec phase_project(const CVec& v, double magnitude);

/// Same, with a fallback iterate: entries of modulus below 1e-14 take the
/// phase of the corresponding `previous` entry instead of an arbitrary one.
/// `previous` is expected to be feasible (modulus == magnitude), in which
/// case those entries are carried over bitwise.
CVec phase_project(const CVec& v, double magnitude, const CVec& previous);

/// Modulus threshold of the previous-phase fallback in the 3-argument
/// phase_project and in the solvers' closed-form block updates.
inline constexpr double kZeroArgumentTol = 1e-14;

}  // namespace secbeam

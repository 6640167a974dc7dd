#include "secbeam/numerics.hpp"
#include "secbeam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace secbeam {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw InvalidInputError(msg);
}

}  // namespace

CMat identity(int n) {
    CMat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

CMat adjoint(const CMat& A) {
    CMat B(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) B(j, i) = std::conj(A(i, j));
    return B;
}

CMat transpose(const CMat& A) {
    CMat B(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) B(j, i) = A(i, j);
    return B;
}

CMat matmul(const CMat& A, const CMat& B) {
    require(A.cols == B.rows, "matmul: inner dimensions differ");
    CMat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int k = 0; k < A.cols; ++k) {
            const cplx aik = A(i, k);
            if (aik == 0.0) continue;
            const cplx* brow = &B.a[static_cast<size_t>(k) * B.cols];
            cplx* crow = &C.a[static_cast<size_t>(i) * C.cols];
            for (int j = 0; j < B.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return C;
}

CVec matvec(const CMat& A, const CVec& x) {
    require(A.cols == static_cast<int>(x.size()), "matvec: dimension mismatch");
    CVec y(A.rows);
    for (int i = 0; i < A.rows; ++i) {
        const cplx* row = &A.a[static_cast<size_t>(i) * A.cols];
        cplx acc = 0.0;
        for (int j = 0; j < A.cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

CMat gram(const CMat& A) {
    // Fill the upper triangle, mirror conjugates below; diagonal assembled
    // from |.|^2 so it is exactly real.
    const int n = A.cols;
    CMat G(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int k = 0; k < A.rows; ++k) diag += std::norm(A(k, i));
        G(i, i) = diag;
        for (int j = i + 1; j < n; ++j) {
            cplx acc = 0.0;
            for (int k = 0; k < A.rows; ++k) acc += std::conj(A(k, i)) * A(k, j);
            G(i, j) = acc;
            G(j, i) = std::conj(acc);
        }
    }
    return G;
}

CMat add(const CMat& A, const CMat& B) {
    require(A.rows == B.rows && A.cols == B.cols, "add: dimension mismatch");
    CMat C(A.rows, A.cols);
    for (size_t k = 0; k < A.a.size(); ++k) C.a[k] = A.a[k] + B.a[k];
    return C;
}

CMat sub(const CMat& A, const CMat& B) {
    require(A.rows == B.rows && A.cols == B.cols, "sub: dimension mismatch");
    CMat C(A.rows, A.cols);
    for (size_t k = 0; k < A.a.size(); ++k) C.a[k] = A.a[k] - B.a[k];
    return C;
}

CMat scale(const CMat& A, cplx s) {
    CMat C(A.rows, A.cols);
    for (size_t k = 0; k < A.a.size(); ++k) C.a[k] = s * A.a[k];
    return C;
}

CMat add_scaled_identity(const CMat& A, double s) {
    require(A.square(), "add_scaled_identity: matrix not square");
    CMat C = A;
    for (int i = 0; i < A.rows; ++i) C(i, i) += s;
    return C;
}

bool all_finite(const CMat& A) {
    for (const cplx& z : A.a)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

bool all_finite(const CVec& v) {
    for (const cplx& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

cplx vdot(const CVec& a, const CVec& b) {
    require(a.size() == b.size(), "vdot: length mismatch");
    cplx acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm2(const CVec& v) {
    double acc = 0.0;
    for (const cplx& z : v) acc += std::norm(z);
    return acc;
}

double norm(const CVec& v) { return std::sqrt(norm2(v)); }

CVec conj(const CVec& v) {
    CVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = std::conj(v[i]);
    return r;
}

CVec hadamard(const CVec& a, const CVec& b) {
    require(a.size() == b.size(), "hadamard: length mismatch");
    CVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

CVec axpy(cplx alpha, const CVec& x, const CVec& y) {
    require(x.size() == y.size(), "axpy: length mismatch");
    CVec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = alpha * x[i] + y[i];
    return r;
}

CMat hadamard(const CMat& A, const CMat& B) {
    require(A.rows == B.rows && A.cols == B.cols, "hadamard: dimension mismatch");
    CMat C(A.rows, A.cols);
    for (size_t k = 0; k < A.a.size(); ++k) C.a[k] = A.a[k] * B.a[k];
    return C;
}

cplx quadratic_form(const CVec& x, const CMat& A) {
    require(A.square(), "quadratic_form: matrix not square");
    require(A.cols == static_cast<int>(x.size()), "quadratic_form: dimension mismatch");
    cplx acc = 0.0;
    for (int i = 0; i < A.rows; ++i) {
        const cplx* row = &A.a[static_cast<size_t>(i) * A.cols];
        cplx rowdot = 0.0;
        for (int j = 0; j < A.cols; ++j) rowdot += row[j] * x[j];
        acc += std::conj(x[i]) * rowdot;
    }
    return acc;
}

namespace {

void check_hermitian(const CMat& H) {
    require(H.square(), "hermitian_max_eigenvalue: matrix not square");
    double max_abs = 0.0;
    for (const cplx& z : H.a) max_abs = std::max(max_abs, std::abs(z));
    double max_asym = 0.0;
    for (int i = 0; i < H.rows; ++i)
        for (int j = i; j < H.cols; ++j)
            max_asym = std::max(max_asym, std::abs(H(i, j) - std::conj(H(j, i))));
    if (max_asym > 1e-10 * std::max(max_abs, 1e-300))
        throw InvalidInputError("hermitian_max_eigenvalue: matrix not Hermitian");
}

}  // namespace

// Smallest Gershgorin shift that makes H + sigma*I positive semidefinite:
// lambda_min(H) >= min_i (H_ii - sum_{j != i} |H_ij|). A sharper shift than
// the plain max row sum keeps the shifted spectral gap wide, which the
// power iteration's convergence rate lives on.
double gershgorin_psd_shift(const CMat& H) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < H.rows; ++i) {
        double off = 0.0;
        for (int j = 0; j < H.cols; ++j)
            if (j != i) off += std::abs(H(i, j));
        lo = std::min(lo, H(i, i).real() - off);
    }
    return std::max(0.0, -lo);
}

MaxEigenResult power_iteration_shifted(
    int n, double sigma, const std::function<void(const CVec& x, CVec& y)>& accumulate_Hx,
    uint64_t seed) {
    Rng rng(seed);
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.cnormal();
    double nv = norm(v);
    for (int i = 0; i < n; ++i) v[i] /= nv;

    // rq tracks the shifted Rayleigh quotient, which converges
    // monotonically up to rounding.
    double rq_prev = std::numeric_limits<double>::quiet_NaN();
    double rq = 0.0;
    CVec y(n);
    for (int it = 1; it <= kMaxEigIterations; ++it) {
        for (int i = 0; i < n; ++i) y[i] = sigma * v[i];
        accumulate_Hx(v, y);
        cplx dot = 0.0;
        for (int i = 0; i < n; ++i) dot += std::conj(v[i]) * y[i];
        rq = dot.real();

        const double ny = norm(y);
        if (ny == 0.0) return {-sigma, it, true};  // shifted matrix annihilates v
        for (int i = 0; i < n; ++i) v[i] = y[i] / ny;

        if (it > 1 && std::abs(rq - rq_prev) < 1e-10 * std::max(std::abs(rq), 1e-300))
            return {rq - sigma, it, true};
        rq_prev = rq;
    }
    return {rq - sigma, kMaxEigIterations, false};
}

MaxEigenResult hermitian_max_eigenvalue_estimate(const CMat& H, uint64_t seed) {
    check_hermitian(H);
    const int n = H.rows;
    if (n == 1) return {H(0, 0).real(), 0, true};

    auto dense = [&H, n](const CVec& x, CVec& y) {
        for (int i = 0; i < n; ++i) {
            const cplx* row = &H.a[static_cast<size_t>(i) * n];
            cplx acc = 0.0;
            for (int j = 0; j < n; ++j) acc += row[j] * x[j];
            y[i] += acc;
        }
    };
    return power_iteration_shifted(n, gershgorin_psd_shift(H), dense, seed);
}

double hermitian_max_eigenvalue(const CMat& H, uint64_t seed) {
    MaxEigenResult r = hermitian_max_eigenvalue_estimate(H, seed);
    if (!r.converged)
        throw ConvergenceError("hermitian_max_eigenvalue: no convergence within iteration cap",
                               r.value, r.iterations);
    return r.value;
}

namespace {

// Pass-through band: entries whose modulus is already within a few ulp of
// the target keep their bits, making repeated projection exactly idempotent.
bool on_circle(double r, double magnitude) {
    return std::abs(r - magnitude) <= 8.0 * std::numeric_limits<double>::epsilon() * magnitude;
}

cplx project_entry(cplx z, double magnitude) {
    const double r = std::abs(z);
    if (r == 0.0) return cplx(magnitude, 0.0);  // arg(0) undefined: phase 0
    if (on_circle(r, magnitude)) return z;
    if (r < 1e-150) return std::polar(magnitude, std::arg(z));  // avoid overflow in m/r
    return z * (magnitude / r);
}

}  // namespace

CVec phase_project(const CVec& v, double magnitude) {
    require(magnitude > 0.0, "phase_project: magnitude must be positive");
    CVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = project_entry(v[i], magnitude);
    return out;
}

CVec phase_project(const CVec& v, double magnitude, const CVec& previous) {
    require(magnitude > 0.0, "phase_project: magnitude must be positive");
    require(previous.size() == v.size(), "phase_project: previous iterate length mismatch");
    CVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) < kZeroArgumentTol) {
            const cplx p = previous[i];
            const double rp = std::abs(p);
            if (rp == 0.0)
                out[i] = cplx(magnitude, 0.0);
            else if (on_circle(rp, magnitude))
                out[i] = p;  // feasible previous entry carried over bitwise
            else
                out[i] = p * (magnitude / rp);
        } else {
            out[i] = project_entry(v[i], magnitude);
        }
    }
    return out;
}

}  // namespace secbeam

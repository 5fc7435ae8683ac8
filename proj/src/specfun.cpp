#include "kgtanh/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace kgtanh::specfun {

namespace {

// Internal arithmetic runs in extended precision; the z -> 1-z connection
// formula cancels between two large terms.
using CL = std::complex<long double>;

constexpr int kSeriesCap = 10000;
constexpr double kDegenerateSTol = 1e-9;     // s vs nonpositive integer
constexpr double kDegenerateSpqTol = 1e-6;   // s-p-q vs any integer
const CL kPerturbation = CL(1e-9L, 1e-9L);

// Lanczos coefficients, g = 607/128, 15 terms (Godfrey's set).
constexpr long double kLanczosG = 4.7421875L;
constexpr long double kLanczosCoeff[15] = {
    0.99999999999999709182L,     57.156235665862923517L,
    -59.597960355475491248L,     14.136097974741747174L,
    -0.49191381609762019978L,    0.33994649984811888699e-4L,
    0.46523628927048575665e-4L,  -0.98374475304879564677e-4L,
    0.15808870322491248884e-3L,  -0.21026444172410488319e-3L,
    0.21743961811521264320e-3L,  -0.16431810653676389022e-3L,
    0.84418223983852743293e-4L,  -0.26190838401581408670e-4L,
    0.36899182659531622704e-5L};

constexpr long double kPiL = 3.14159265358979323846264338328L;

long double dist_to_nearest_integer(CL v) {
    const long double n = std::roundl(v.real());
    return std::abs(v - CL(n, 0.0L));
}

bool is_nonpositive_integer(CL v, long double tol) {
    const long double n = std::roundl(v.real());
    return n <= 0.0L && std::abs(v - CL(n, 0.0L)) < tol;
}

CL log_gamma_right(CL z) {
    // Valid for Re z >= 0.5.
    CL acc(kLanczosCoeff[0], 0.0L);
    for (int k = 1; k < 15; ++k) {
        acc += kLanczosCoeff[k] / (z - 1.0L + static_cast<long double>(k));
    }
    const CL t = z + (kLanczosG - 0.5L);
    constexpr long double half_log_two_pi = 0.918938533204672741780329736406L;
    return half_log_two_pi + (z - 0.5L) * std::log(t) - t + std::log(acc);
}

CL log_gamma_impl(CL z) {
    if (z.real() >= 0.5L) return log_gamma_right(z);
    // Reflection formula. sin(pi z) is evaluated at the pole-centered
    // argument via periodicity:, sin(pi z) = (-1)^n sin(pi (z-n)), which
    // keeps full relative accuracy arbitrarily close to the poles.
    const long long n = std::llroundl(z.real());
    const CL d = z - static_cast<long double>(n);
    const CL sin_pid = std::sin(kPiL * d);
    if (std::abs(sin_pid) == 0.0L) {
        throw DomainError("log_gamma at a nonpositive-integer pole");
    }
    CL log_sin = std::log(sin_pid);
    if (n % 2 != 0) log_sin += CL(0.0L, kPiL);
    return std::log(CL(kPiL, 0.0L)) - log_sin - log_gamma_right(1.0L - z);
}

// Maclaurin series; caller guarantees convergence (z <= 1/2 or a terminating
// polynomial case).
CL series_2f1(CL p, CL q, CL s, long double z) {
    CL sum(1.0L, 0.0L);
    CL term(1.0L, 0.0L);
    int small_streak = 0;
    for (int n = 0; n < kSeriesCap; ++n) {
        const long double dn = static_cast<long double>(n);
        term *= (p + dn) * (q + dn) * z / ((s + dn) * (dn + 1.0L));
        sum += term;
        if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag())) {
            throw NonConvergence("hyp2f1 series overflowed");
        }
        const long double scale = std::max(std::abs(sum), 1e-300L);
        if (std::abs(term) <= 1e-20L * scale) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw NonConvergence("hyp2f1 series did not converge in 10000 terms");
}

CL hyp2f1_impl(CL p, CL q, CL s, long double z) {
    if (!(z >= 0.0L && z < 1.0L)) {
        std::ostringstream msg;
        msg << "hyp2f1 argument z = " << static_cast<double>(z) << " outside [0, 1)";
        throw DomainError(msg.str());
    }
    if (is_nonpositive_integer(s, kDegenerateSTol)) {
        throw DegenerateParameters("hyp2f1 lower parameter near nonpositive integer");
    }
    if (z == 0.0L) return CL(1.0L, 0.0L);

    // Terminating series: a polynomial in z, valid on all of [0, 1).
    if (is_nonpositive_integer(p, 1e-13L) || is_nonpositive_integer(q, 1e-13L)) {
        return series_2f1(p, q, s, z);
    }
    if (z <= 0.5L) return series_2f1(p, q, s, z);

    // z -> 1-z connection formula. The formula degenerates when s-p-q is an
    // integer; perturb off the degeneracy and accept the perturbed value (the
    // ODE oracle validates downstream results). The perturbation is applied
    // to s-p-q directly and s is kept consistent with it, so the nearly
    // vanishing series denominators are formed without cancellation.
    CL spq = s - p - q;
    if (dist_to_nearest_integer(spq) < kDegenerateSpqTol) {
        spq += kPerturbation;
        s += kPerturbation;
    }
    const long double w = 1.0L - z;
    const CL coeff1 = std::exp(log_gamma_impl(s) + log_gamma_impl(spq) -
                               log_gamma_impl(s - p) - log_gamma_impl(s - q));
    const CL coeff2 = std::exp(log_gamma_impl(s) + log_gamma_impl(-spq) -
                               log_gamma_impl(p) - log_gamma_impl(q)) *
                      std::exp(spq * std::log(CL(w, 0.0L)));
    const CL t1 = coeff1 * series_2f1(p, q, 1.0L - spq, w);
    const CL t2 = coeff2 * series_2f1(s - p, s - q, 1.0L + spq, w);
    const CL result = t1 + t2;
    if (!std::isfinite(result.real()) || !std::isfinite(result.imag())) {
        throw NonConvergence("hyp2f1 connection formula overflowed");
    }
    // The two terms can cancel heavily for parameters with large imaginary
    // parts. When they do, the direct series still converges for z < 1 and is
    // the better-conditioned route; keep the transformation only where the
    // series cannot reach the cap (z close to 1, the regime it exists for).
    const long double cancellation =
        (std::abs(t1) + std::abs(t2)) / std::max(std::abs(result), 1e-4932L);
    if (cancellation > 1e4L) {
        try {
            return series_2f1(p, q, s, z);
        } catch (const NonConvergence&) {
        }
    }
    return result;
}

CL widen(Complex v) { return CL(v.real(), v.imag()); }

Complex narrow(CL v) {
    return Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

}  // namespace

Complex log_gamma(Complex z) { return narrow(log_gamma_impl(widen(z))); }

Complex gamma(Complex z) { return narrow(std::exp(log_gamma_impl(widen(z)))); }

Complex hyp2f1(Complex p, Complex q, Complex s, double z) {
    return narrow(hyp2f1_impl(widen(p), widen(q), widen(s), z));
}

Complex hyp2f1_dz(Complex p, Complex q, Complex s, double z) {
    const CL pl = widen(p), ql = widen(q), sl = widen(s);
    return narrow(pl * ql / sl * hyp2f1_impl(pl + 1.0L, ql + 1.0L, sl + 1.0L, z));
}

}  // namespace kgtanh::specfun

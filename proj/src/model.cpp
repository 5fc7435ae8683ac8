#include "kgtanh/model.hpp"

#include <cmath>
#include <sstream>

namespace kgtanh::model {

namespace {

constexpr double kConstantPotentialD = 1e-10;  // |D| below this: analytic branch
constexpr double kBasisDegeneracyTol = 1e-8;

// sin(K r)/K and cos(K r) with the K -> 0 limit handled.
void constant_potential_state(Complex K, double r, Complex* u, Complex* du) {
    if (std::abs(K) * r < 1e-8) {
        const Complex K2 = K * K;
        *u = r * (1.0 - K2 * r * r / 6.0);
        *du = 1.0 - K2 * r * r / 2.0;
    } else {
        *u = std::sin(K * r) / K;
        *du = std::cos(K * r);
    }
}

}  // namespace

double potential(double r, const PotentialParams& p) {
    if (r < 0.0) throw DomainError("potential: r must be >= 0");
    if (r > p.a) return 0.0;
    return p.D * std::tanh(p.lambda * r) - p.B;
}

HypExponents exponents(Complex E, const PotentialParams& p) {
    const double m2 = p.m * p.m;
    const Complex eb = E + p.B;
    HypExponents x;
    // Radicands assembled complex-minus-complex: a real-E radicand keeps a
    // +0 imaginary part, so the principal square root lands on the upper
    // side of the branch cut. (double - complex would negate the zero.)
    const Complex rad_alpha = Complex(m2 - p.D * p.D, 0.0) - eb * (eb - 2.0 * p.D);
    const Complex rad_beta = Complex(m2 - p.D * p.D, 0.0) - eb * (eb + 2.0 * p.D);
    x.alpha = std::sqrt(rad_alpha) / (2.0 * p.lambda);
    x.beta = std::sqrt(rad_beta) / (2.0 * p.lambda);
    const Complex w =
        std::sqrt(Complex(p.lambda * p.lambda - 4.0 * p.D * p.D, 0.0)) / (2.0 * p.lambda);
    x.c_p = 0.5 - w + x.beta + x.alpha;
    x.d_p = 0.5 + w + x.beta + x.alpha;
    x.f_p = 1.0 + 2.0 * x.beta;
    x.g_p = 0.5 - w - x.beta + x.alpha;
    x.h_p = 0.5 + w - x.beta + x.alpha;
    x.j_p = 1.0 - 2.0 * x.beta;
    return x;
}

BasisPair interior_basis(double r, Complex E, const PotentialParams& p) {
    const HypExponents x = exponents(E, p);
    const Complex two_beta = 2.0 * x.beta;
    const double nearest = std::round(two_beta.real());
    if (std::abs(two_beta - Complex(nearest, 0.0)) < kBasisDegeneracyTol) {
        std::ostringstream msg;
        msg << "interior_basis: 2*beta = (" << two_beta.real() << ", " << two_beta.imag()
            << ") within 1e-8 of an integer";
        throw DegenerateBasis(msg.str());
    }

    const double t = std::tanh(p.lambda * r);
    const double z = 0.5 * (1.0 + t);
    // Powers of positive reals only; the constant phase of a negative-base
    // prefactor is absorbed into the mixing coefficients.
    const Complex prefactor =
        std::pow(Complex(1.0 - t, 0.0), x.alpha) * std::pow(Complex(1.0 + t, 0.0), x.beta);
    const Complex zpow = std::pow(Complex(z, 0.0), -two_beta);

    const Complex F = specfun::hyp2f1(x.c_p, x.d_p, x.f_p, z);
    const Complex Fp = specfun::hyp2f1_dz(x.c_p, x.d_p, x.f_p, z);
    const Complex G = specfun::hyp2f1(x.g_p, x.h_p, x.j_p, z);
    const Complex Gp = specfun::hyp2f1_dz(x.g_p, x.h_p, x.j_p, z);

    // d/dr acting on the prefactor and on z(r) = (1+tanh(lambda r))/2,
    // dz/dr = lambda (1 - t^2)/2.
    const double lam = p.lambda;
    const double one_minus_t2 = (1.0 - t) * (1.0 + t);
    BasisPair b;
    b.u1 = prefactor * F;
    b.du1 = prefactor * lam *
            ((x.beta * (1.0 - t) - x.alpha * (1.0 + t)) * F + 0.5 * one_minus_t2 * Fp);
    b.u2 = prefactor * zpow * G;
    b.du2 = prefactor * zpow * lam *
            ((-x.beta * (1.0 - t) - x.alpha * (1.0 + t)) * G + 0.5 * one_minus_t2 * Gp);
    return b;
}

BoundaryData interior_state(double r, Complex E, const PotentialParams& p) {
    if (r < 0.0 || r > p.a * (1.0 + 1e-12)) {
        throw DomainError("interior_state: r outside [0, a]");
    }
    if (std::abs(p.D) < kConstantPotentialD) {
        // Constant interior potential -B: u'' + K^2 u = 0 with u(0)=0, du(0)=1.
        const Complex eb = E + p.B;
        const Complex K = std::sqrt(eb * eb - p.m * p.m);
        Complex u, du;
        constant_potential_state(K, r, &u, &du);
        return BoundaryData{u, du, r};
    }

    const BasisPair b0 = interior_basis(0.0, E, p);
    const Complex w0 = b0.du1 * b0.u2 - b0.u1 * b0.du2;
    const double scale = std::max({std::abs(b0.u1 * b0.du2), std::abs(b0.du1 * b0.u2), 1e-300});
    if (std::abs(w0) < 1e-10 * scale) {
        throw DegenerateBasis("interior_state: basis Wronskian vanishes at r = 0");
    }
    // u = C1 u1 + C2 u2 with u(0) = 0 and du(0) = 1.
    const Complex c1 = b0.u2 / w0;
    const Complex c2 = -b0.u1 / w0;
    if (r == 0.0) return BoundaryData{Complex(0.0, 0.0), Complex(1.0, 0.0), 0.0};
    const BasisPair b = interior_basis(r, E, p);
    return BoundaryData{c1 * b.u1 + c2 * b.u2, c1 * b.du1 + c2 * b.du2, r};
}

BoundaryData interior_state(double r, double E, const PotentialParams& p) {
    return interior_state(r, Complex(E, 0.0), p);
}

}  // namespace kgtanh::model

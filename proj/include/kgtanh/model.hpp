#ifndef KGTANH_MODEL_HPP
#define KGTANH_MODEL_HPP

#include <complex>

#include "kgtanh/errors.hpp"
#include "kgtanh/specfun.hpp"

namespace kgtanh::model {

// Physical knobs of the truncated tanh well
//   V(r) = D*tanh(lambda*r) - B   for r in [0, a],   0 for r > a,
// for a scalar particle of mass m. lambda is the tanh steepness (the exterior
// decay constant is a separate quantity, see eigensolve).
struct PotentialParams {
    double D;
    double B;
    double lambda;
    double a;
    double m;

    PotentialParams(double D_, double B_, double lambda_, double a_, double m_)
        : D(D_), B(B_), lambda(lambda_), a(a_), m(m_) {
        if (!(a > 0.0)) throw DomainError("PotentialParams: a must be > 0");
        if (!(lambda > 0.0)) throw DomainError("PotentialParams: lambda must be > 0");
        if (!(m > 0.0)) throw DomainError("PotentialParams: m must be > 0");
    }

    PotentialParams with_B(double B_) const {
        return PotentialParams(D, B_, lambda, a, m);
    }
};

// The eight hypergeometric exponents of the interior closed form, as
// functions of (E, params). alpha/beta are the edge exponents of the two
// regular singular points; c..j are the 2F1 parameters of the two basis
// solutions.
struct HypExponents {
    Complex alpha;
    Complex beta;
    Complex c_p, d_p, f_p;
    Complex g_p, h_p, j_p;
};

// Wavefunction value and radial derivative at a radius, in the du(0)=1
// normalization. The matching currency between interior, exterior and
// phase-shift extraction.
struct BoundaryData {
    Complex u;
    Complex du;
    double r;
};

// Both interior basis solutions at a radius (used by Wronskian checks).
struct BasisPair {
    Complex u1, du1;
    Complex u2, du2;
};

// V(r); the jump at r = a is accepted as-is. Throws DomainError for r < 0.
double potential(double r, const PotentialParams& p);

// Exponents for (possibly complex) trial energy. All square roots are
// principal branch; complex arithmetic absorbs every sign case.
HypExponents exponents(Complex E, const PotentialParams& p);

// The two hypergeometric basis solutions at r (no boundary condition applied).
// Throws DegenerateBasis when 2*beta is within 1e-8 of an integer.
BasisPair interior_basis(double r, Complex E, const PotentialParams& p);

// Interior solution with u(0) = 0, du(0) = 1, evaluated at r in [0, a].
// For |D| < 1e-10 branches to the exact constant-potential solution.
BoundaryData interior_state(double r, Complex E, const PotentialParams& p);
BoundaryData interior_state(double r, double E, const PotentialParams& p);

}  // namespace kgtanh::model

#endif

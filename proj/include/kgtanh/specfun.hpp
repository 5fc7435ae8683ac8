#ifndef KGTANH_SPECFUN_HPP
#define KGTANH_SPECFUN_HPP

#include <complex>

#include "kgtanh/errors.hpp"

namespace kgtanh {

using Complex = std::complex<double>;

namespace specfun {

// Principal-branch log-gamma for complex argument. Lanczos approximation on
// the right half-plane, reflection formula for Re z < 0.5. The imaginary part
// carries an arbitrary 2*pi*i branch; only exp(log_gamma(...)) combinations
// are meaningful downstream.
Complex log_gamma(Complex z);

// Gamma function, exp(log_gamma(z)).
Complex gamma(Complex z);

// Gauss hypergeometric function 2F1(p, q; s; z) for complex parameters and
// real z in [0, 1). Direct Maclaurin series for z <= 1/2, the z -> 1-z linear
// transformation for z > 1/2. Near-degenerate s-p-q (within 1e-6 of an
// integer) is handled by evaluating at s perturbed by 1e-9*(1+i).
//
// Throws DomainError (z outside [0,1)), DegenerateParameters (s within 1e-9
// of a nonpositive integer), NonConvergence (series cap of 10000 terms hit).
Complex hyp2f1(Complex p, Complex q, Complex s, double z);

// d/dz 2F1(p, q; s; z) = (p*q/s) * 2F1(p+1, q+1; s+1; z).
Complex hyp2f1_dz(Complex p, Complex q, Complex s, double z);

}  // namespace specfun
}  // namespace kgtanh

#endif

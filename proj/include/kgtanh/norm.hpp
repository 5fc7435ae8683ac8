#ifndef KGTANH_NORM_HPP
#define KGTANH_NORM_HPP

#include "kgtanh/model.hpp"

namespace kgtanh::norm {

// Sign classification of a bound state under the indefinite Klein-Gordon
// inner product.
enum class Classification { particle, antiparticle, critical };

const char* to_string(Classification c);

// N proportional to  integral_0^inf (E - V(r)) u(r)^2 dr  for the interior
// state in the du(0)=1 normalization, plus the analytic exponential tail.
// Only the sign and zero-proximity are contractual; constant prefactors are
// dropped.
struct NormResult {
    double value;          // interior_part + tail_part
    double interior_part;  // adaptive quadrature over [0, a]
    double tail_part;      // E * u(a)^2 / (2 kappa_b)
    double zero_tolerance;
};

// Evaluates the norm at a bound-state eigenvalue. Throws NotAnEigenvalue when
// |matching_function(E)| > 1e-6.
NormResult kg_norm(double E, const model::PotentialParams& p);

Classification classify_state(const NormResult& n);

}  // namespace kgtanh::norm

#endif

#pragma once

#include <functional>
#include <vector>

#include "orbitforge/complexbox.hpp"

namespace orbitforge {

// Certified composite Gauss-Legendre quadrature on [0,1] for functions
// analytic in a neighborhood of the segment. The caller supplies a box
// evaluator for the integrand and a bound for its (2n)-th derivative on the
// segment (typically a Cauchy estimate). Node/weight enclosures come from
// interval Newton on the exact Legendre polynomial.
struct GaussLegendreRule {
    int n = 8;
    std::vector<ComplexBox> nodes;   // real enclosures embedded as boxes
    std::vector<ComplexBox> weights; // positive real enclosures
};

// rule on [-1,1]; cached per (n, precision)
const GaussLegendreRule& gauss_legendre_rule(int n, Prec p);

// Integrate integrand over [0,1] with m equal segments of an n-point rule.
// deriv_bound(k) must bound sup |d^k/dt^k integrand| over [0,1].
ComplexBox integrate_01(const std::function<ComplexBox(const ComplexBox&, Prec)>& integrand,
                        int n, int segments, Prec p,
                        const std::function<BigFloat(int)>& deriv_bound);

} // namespace orbitforge

#pragma once

#include <vector>

#include "cantorlocus/types.hpp"

namespace cantorlocus {

// Truncated power series with zero constant term are the working currency
// here; coefficients are indexed by power.
using Series = std::vector<Complex>;

Series series_mul(const Series& a, const Series& b, int degree);
// outer(inner(w)); inner must have zero constant term.
Series series_compose(const Series& outer, const Series& inner, int degree);
// 1 / (1 + s(w)) where s has zero constant term; result has constant term 1.
Series series_reciprocal_one_plus(const Series& s, int degree);

// Data for a parabolic germ F(w) = w + a w^{q+1} + ... at 0 (multiplier 1):
// a polynomial change of variable h with h^{-1} o F o h = w + a w^{q+1}
// + b w^{2q+1} + O(w^{D+1}), and the asymptotic expansion of the Fatou
// coordinate of the return map in the sector coordinate u = -1/(q a w^q):
//
//   u' = u + 1 + beta/u + gamma/u^2 + delta/u^3 + O(u^-4)
//   Phi(u) = u - beta Log u + s/u + t/u^2 + O(u^-3),  Phi o F = Phi + 1.
struct ParabolicGerm {
    int q = 1;
    Complex a, b;
    Series h;  // normalizing polynomial, h[0] = 0, h[1] = 1
    Complex beta, gamma, delta;
    Complex s_coef, t_coef;
    double r_switch = 0.05;  // radius where h-inversion is reliable
    double sector_min = 20.0;  // Re u above this certifies petal membership
    std::vector<Complex> directions;  // attracting directions, counterclockwise
};

// Builds the germ data from the Taylor jet of the return map (the q-th
// iterate when the multiplier is a primitive q-th root of unity). The jet
// must satisfy jet[0] = 0, jet[1] ~= 1; it is normalized internally.
ParabolicGerm build_germ(const Series& return_map_jet);

// Jet of the n-th iterate of a one-step map given by its jet.
Series iterate_jet(const Series& one_step, int n, int degree);

// h^{-1}(z) by Newton, |z| < r_switch.
Complex germ_normalize(const ParabolicGerm& g, Complex z);
// u = -1/(q a w^q) with w = h^{-1}(z).
Complex germ_u(const ParabolicGerm& g, Complex z);
// Index of the attracting direction nearest to w = h^{-1}(z); -1 when the
// point sits between petals (angle off by more than 0.45 * (2 pi / q)).
int germ_direction_index(const ParabolicGerm& g, Complex z);

// Phi(u) and its derivative.
Complex germ_phi_u(const ParabolicGerm& g, Complex u);
Complex germ_phi_u_derivative(const ParabolicGerm& g, Complex u);
// Solve Phi(u) = y by Newton (Re y should exceed sector_min).
Complex germ_phi_u_inverse(const ParabolicGerm& g, Complex y);
// The w with u(w) = u lying in the petal of direction index k, mapped back
// through h.
Complex germ_point_from_u(const ParabolicGerm& g, Complex u, int dir_index);

// Stop threshold on Re u for a target accuracy of the Fatou coordinate.
double germ_u_stop(const ParabolicGerm& g, double tol);

}  // namespace cantorlocus

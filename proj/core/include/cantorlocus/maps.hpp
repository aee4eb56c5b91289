#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cantorlocus/types.hpp"

namespace cantorlocus {

// A point of the moduli slice Per1(lambda) in (lambda, sigma) coordinates:
// lambda is one fixed-point eigenvalue, sigma the product of the other two.
struct MapClass {
    Complex lambda;
    Complex sigma;
    PQ pq;

    static MapClass make(Complex lambda, Complex sigma, PQ pq) {
        return MapClass{lambda, sigma, pq};
    }
};

enum class RepKind {
    PolynomialP,   // P_lambda(z) = lambda z + z^2
    RationalG,     // G_{lambda,A}(z) = (z + A + 1/z)/lambda
    ParabolicGT,   // G_T(z) = z + T + 1/z   (lambda = 1, A plays the role of T)
};

// Concrete normal-form representative of a conjugacy class.
struct Representative {
    RepKind kind = RepKind::PolynomialP;
    Complex lambda{0.5, 0.0};
    Complex A{0.0, 0.0};

    static Representative polynomial(Complex lambda) {
        return Representative{RepKind::PolynomialP, lambda, Complex{0.0, 0.0}};
    }
    static Representative rational(Complex lambda, Complex A);
    static Representative parabolic(Complex T) {
        return Representative{RepKind::ParabolicGT, Complex{1.0, 0.0}, T};
    }

    // sigma recovered from the normal form.
    Complex sigma() const;
    // One application of the map to a sphere point (never overflows).
    SpherePoint step(const SpherePoint& pt) const;
    // Critical points on the sphere.
    std::array<SpherePoint, 2> critical_points() const;
    // The distinguished fixed point carrying eigenvalue lambda:
    // 0 for P_lambda, infinity for G-type maps.
    SpherePoint marked_fixed_point() const;
};

struct FixedPoint {
    SpherePoint point;
    Complex eigenvalue;
    int multiplicity = 1;
};

// (lambda, mu, nu) with mu*nu = sigma and mu+nu = lambda*sigma - lambda + 2;
// mu, nu ordered lexicographically by (Re, Im).
std::array<Complex, 3> eigen_triple(const MapClass& cls);

// Normal-form representative on Per1(lambda), A = principal sqrt of
// (lambda-2)^2 - sigma*lambda^2. A and -A represent the same class: the
// conjugacy z -> -z swaps the critical points +1 and -1 and carries
// G_{lambda,A} to G_{lambda,-A}.
Representative representative_from_sigma(const MapClass& cls);

// All fixed points with eigenvalues (eigenvalue at infinity computed in the
// chart w = 1/z).
std::vector<FixedPoint> fixed_points(const Representative& rep);

// [z0, f(z0), ..., f^n(z0)] with chart switching near infinity.
std::vector<SpherePoint> orbit(const Representative& rep, SpherePoint z0, int n);

enum class Relatedness { InR, NotInR, Undecided };

// InR iff both critical orbits enter and remain in the trapping region of the
// marked fixed point within max_iter steps. Attracting case (0<|lambda|<1):
// trap is the certified linearization disk (radius <= 0 means: certify here).
// Parabolic case (lambda = 1): an explicit attracting petal of G_T at
// infinity. Undecided when the budget runs out.
Relatedness classify_relatedness(const Representative& rep, long max_iter = kDefaultDepth,
                                 double radius = 0.0);

// Largest radius r (found by bisection on a sampled circle) such that
// |f(z) - z0 - lambda (z - z0)| < (1-|lambda|)|z - z0|/2 on |z - z0| = r in
// the working chart of the marked fixed point. Guarantees the disk is
// forward-invariant and the map is a contraction there; injectivity is
// heuristic, backed by round-trip tests.
double certified_linearization_radius(const Representative& rep);

// Map evaluated in the working chart of the marked fixed point (identity
// chart at 0 for P, w = 1/z at infinity for G). Exposed for the chart
// builders; ordinary callers should use Representative::step.
Complex working_chart_step(const Representative& rep, Complex u);

}  // namespace cantorlocus

#pragma once

#include <optional>
#include <vector>

#include "cantorlocus/linearize.hpp"
#include "cantorlocus/types.hpp"

namespace cantorlocus {

// Geometry of the (log lambda, p/q)-star in log-linearizer coordinates:
// L = q Log(lambda e^{-2 pi i p/q}), theta the angle between L and 2 pi i,
// m = 2 pi sin(theta)/(q|L|), r_lambda = |L|/(2 q sin(theta)). Lines tau^j
// run parallel to L through the value lattice; strips between them carry the
// wires.
//
// Strip bookkeeping happens in the normalized coordinate xi = logw / L,
// where boundary lines are horizontal at levels eta in Z (family 1, through
// zeta_1 = 0) and Z + eta2 (family 2, through zeta_2, when present). The
// strip index follows the lines' ordering with U^0 bounded by tau^0 =
// (family-1 level 0); for k = 2 the merged families are ordered by
// increasing level inside each unit cell.
struct StarGeometry {
    PQ pq;
    Complex lambda;
    Complex L;
    double theta = 0.0;
    double m = 0.0;
    double r_lambda = 0.0;
    std::vector<Complex> zeta;  // zeta[0] = 0; zeta[1] present when k = 2
    int k = 1;
    std::optional<double> h;        // least normalized distance between families
    std::optional<int> bound_to;    // family-1 line index tau_2^p is bound to (mod q)
    double m_signed = 0.0;          // signed level spacing Im((2 pi i/q)/L)
    double eta2 = 0.0;              // fractional family-2 level, k = 2 only
};

StarGeometry build_star(const PQ& pq, Complex lambda,
                        std::optional<Complex> zeta2 = std::nullopt);

// m(lambda) >= M. Agrees with the horodisk exp(D(-r + 2 pi i p/q, r)),
// r = pi/(q^2 M).
bool in_horodisk(const PQ& pq, Complex lambda, double M);
double m_of_lambda(const PQ& pq, Complex lambda);

// Per-term ratios |Im(conj(omega) lambda_k)| / sqrt(1 - |lambda_k|^2); the
// sequence converges subhorocyclicly when the tail ratio tends to 0. For
// points outside the unit disk (repelling-side sequences) the reflected
// quantity sqrt(|lambda|^2 - 1) is used.
std::vector<double> subhorocyclic_rate(const Complex omega,
                                       const std::vector<Complex>& lambdas);
std::vector<double> subhorocyclic_rate(const PQ& pq, const std::vector<Complex>& lambdas);

struct StripQuery {
    long strip = 0;
    double dist_line = 0.0;  // signed normalized distance to the nearest tau line
    double dist_wire = 0.0;  // signed normalized distance to the nearest wire
    bool on_line = false;    // within tol of a tau line (they carry critical values)
};

StripQuery strip_and_wire(const StarGeometry& g, Complex logw, double tol = 1e-9);

// Log-value of the wire of strip `j` at parameter t (central straight line).
Complex wire_log_point(const StarGeometry& g, long j, double t);

// Branch hint for koenigs_inverse following the strip-parallel direction L.
BranchHint strip_branch_hint(const StarGeometry& g, Complex log_value);

// Radius of the circle through logv tangent to the imaginary axis at the
// given tangency point.
double horocircle_radius(Complex logv, Complex tangent);
// Tangency at -2 pi i p/q with the branch minimizing |q log mu + 2 pi i p|.
double r_mu_radius(const PQ& pq, Complex mu);
// Tangency at 0 with the branch minimizing |log rho + 2 pi i n|.
double r_rho_radius(Complex rho);

}  // namespace cantorlocus

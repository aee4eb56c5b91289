#pragma once

#include <optional>

#include "cantorlocus/maps.hpp"

namespace cantorlocus {

enum class WhichCritical { First, Second, Auto };

// Numerical Koenigs coordinate phi for the attracting fixed point of `rep`
// (eigenvalue lambda, 0 < |lambda| < 1), normalized by phi(c1) = 1 and
// extended to the whole basin through phi(f(z)) = lambda phi(z).
//
// All values are computed in the working chart of the fixed point: the
// identity chart at 0 for P_lambda, w = 1/z at infinity for G-type maps.
struct KoenigsChart {
    Representative rep;
    SpherePoint fixed_point;
    double local_radius = 0.0;        // certified radius in the working chart
    Complex normalization{1.0, 0.0};  // raw linearizer value at c1
    double tol = kKoenigsTol;
    int depth_limit = 20000;
    int critical_index = 1;           // which critical point got normalized to 1
    SpherePoint c1;

    Complex lambda() const { return rep.lambda; }
};

// Branch data for inverting phi: follow the value path exp(log_value + t d),
// t from deep inside the linearization disk up to 0. A path with d = L of a
// star never leaves one strip of the star, so its lift is the strip preimage.
struct BranchHint {
    Complex log_value;  // branch of log of the target value (normalized scale)
    Complex direction;  // Re(direction) < 0
};

KoenigsChart build_chart(const Representative& rep,
                         WhichCritical which = WhichCritical::First,
                         double tol = kKoenigsTol, int depth_limit = 20000);

// phi(z) for z in the attracting basin.
Complex koenigs_value(const KoenigsChart& chart, const SpherePoint& z);
inline Complex koenigs_value(const KoenigsChart& chart, Complex z) {
    return koenigs_value(chart, SpherePoint::of(z));
}

// Principal-branch log of phi(z). Strip queries use it modulo the value
// lattice; no branch continuity is promised across calls.
Complex koenigs_log_value(const KoenigsChart& chart, const SpherePoint& z);

// z with phi(z) = w. Without a hint, the branch continuous from the
// linearization disk along the ray t -> lambda^t w. With a hint, the branch
// continuous along the hinted path (strip-parallel when the hint comes from
// a star strip; see star.hpp).
SpherePoint koenigs_inverse(const KoenigsChart& chart, Complex w,
                            const std::optional<BranchHint>& hint = std::nullopt);

// The involution I(z) = phi^{-1}(lambda^2 / phi(z)), an involution in the
// boundary of the domain U = {|phi| < |lambda|} with fixed points at
// phi-values +-lambda.
SpherePoint involution(const KoenigsChart& chart, const SpherePoint& z);

// Derivative of phi at the fixed point in the working chart (1/normalization).
Complex chart_derivative_at_fixed_point(const KoenigsChart& chart);

// Incremental continuation of phi^{-1} along a value path. `begin` lifts from
// the linearization disk to exp(log_value); `step` moves the existing lift to
// a nearby value (callers keep steps small). Used for wire tracing.
struct LiftState {
    Complex u;      // working-chart coordinate of the current lift point
    Complex value;  // normalized phi-value it solves
};

LiftState lift_begin(const KoenigsChart& chart, Complex log_value, Complex direction);
void lift_step(const KoenigsChart& chart, LiftState& state, Complex new_value);
SpherePoint lift_point(const KoenigsChart& chart, const LiftState& state);

}  // namespace cantorlocus

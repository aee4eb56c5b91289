#include "cantorlocus/linearize.hpp"

#include <algorithm>
#include <cmath>

namespace cantorlocus {

namespace {

Complex pow_int(Complex b, long n) {
    Complex r{1.0, 0.0};
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// Working-chart coordinate of a sphere point, or nullopt when the point has
// no finite coordinate there (P at infinity, G at z = 0 gives chart infinity).
std::optional<Complex> working_coord(const Representative& rep, const SpherePoint& p) {
    if (rep.kind == RepKind::PolynomialP) {
        if (p.at_inf) return std::nullopt;
        return p.z;
    }
    if (p.at_inf) return Complex{0.0, 0.0};
    if (std::abs(p.z) < 1e-300) return std::nullopt;
    return 1.0 / p.z;
}

SpherePoint from_working(const Representative& rep, Complex u) {
    if (rep.kind == RepKind::PolynomialP) return SpherePoint::of(u);
    if (std::abs(u) < 1e-300) return SpherePoint::infinity();
    return SpherePoint::of(1.0 / u);
}

// Raw local Koenigs coordinate (derivative 1 at the fixed point), valid for
// |u| < local_radius. One Aitken-style correction halves the iteration count.
Complex phi_local(const KoenigsChart& chart, Complex u) {
    const Complex lam = chart.lambda();
    const Complex inv = 1.0 / lam;
    const double stop = std::max(0.25 * chart.tol * std::abs(1.0 - lam), 2e-16);
    Complex cur = u;
    Complex scale{1.0, 0.0};
    Complex est = u;
    for (int k = 0; k < 40000; ++k) {
        cur = working_chart_step(chart.rep, cur);
        scale *= inv;
        const Complex next = scale * cur;
        const Complex d = next - est;
        est = next;
        if (std::abs(d) < stop) return next + d * lam / (1.0 - lam);
    }
    fail(Err::NoConvergence, "Koenigs local limit did not settle");
}

// Raw extended linearizer: iterate into the certified disk, rescale back.
Complex koenigs_raw(const KoenigsChart& chart, const SpherePoint& z) {
    const Representative& rep = chart.rep;
    SpherePoint pt = z;
    SpherePoint prev = pt;
    int stall = 0;
    for (long n = 0; n <= chart.depth_limit; ++n) {
        const auto u = working_coord(rep, pt);
        if (u && std::abs(*u) < chart.local_radius)
            return phi_local(chart, *u) / pow_int(chart.lambda(), n);
        if (rep.kind == RepKind::PolynomialP) {
            if (pt.at_inf || std::abs(pt.z) > 2.0 + std::abs(rep.lambda))
                fail(Err::NotInBasin, "orbit escapes the bounded basin");
        }
        pt = rep.step(pt);
        if (sphere_dist(pt, prev) < 1e-15) {
            if (++stall > 16) fail(Err::NotInBasin, "orbit stalled away from the fixed point");
        } else {
            stall = 0;
        }
        prev = pt;
    }
    fail(Err::DepthExceeded, "orbit did not reach the linearization disk");
}

// Newton solve of phi_raw(u) = target (raw scale) in the working chart.
// Forward evaluation picks the fiber point nearest the seed; continuation
// drives the seed.
Complex newton_raw(const KoenigsChart& chart, Complex target, Complex seed) {
    Complex u = seed;
    const double tol = 1e-13 * std::max(1.0, std::abs(target));
    for (int it = 0; it < 40; ++it) {
        Complex val, val2;
        const double h = 1e-7 * std::max(1e-4, std::abs(u));
        try {
            val = koenigs_raw(chart, from_working(chart.rep, u));
            if (std::abs(val - target) < tol) return u;
            val2 = koenigs_raw(chart, from_working(chart.rep, u + h));
        } catch (const CantorError&) {
            fail(Err::BranchAmbiguous, "continuation stepped outside the basin");
        }
        const Complex deriv = (val2 - val) / h;
        if (std::abs(deriv) < 1e-12 * std::max(1.0, std::abs(target)))
            fail(Err::BranchAmbiguous, "continuation passed too close to a critical value");
        Complex step = (val - target) / deriv;
        const double cap = 0.5 * std::max(1e-6, std::abs(u)) + 1e-3;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        u -= step;
    }
    fail(Err::BranchAmbiguous, "continuation Newton did not converge");
}

Complex raw_derivative(const KoenigsChart& chart, Complex u) {
    const double h = 1e-7 * std::max(1e-4, std::abs(u));
    const Complex v0 = koenigs_raw(chart, from_working(chart.rep, u));
    const Complex v1 = koenigs_raw(chart, from_working(chart.rep, u + h));
    return (v1 - v0) / h;
}

}  // namespace

KoenigsChart build_chart(const Representative& rep, WhichCritical which, double tol,
                         int depth_limit) {
    const double al = std::abs(rep.lambda);
    if (al <= 0.0 || al >= 1.0)
        fail(Err::InvalidArgument, "Koenigs chart needs 0 < |lambda| < 1");

    KoenigsChart chart;
    chart.rep = rep;
    chart.fixed_point = rep.marked_fixed_point();
    chart.tol = tol;
    chart.depth_limit = depth_limit;
    chart.local_radius = certified_linearization_radius(rep);
    chart.normalization = Complex{1.0, 0.0};

    const auto crits = rep.critical_points();
    auto raw_at = [&](const SpherePoint& c) -> Complex {
        try {
            return koenigs_raw(chart, c);
        } catch (const CantorError& e) {
            if (e.code() == Err::NotInBasin || e.code() == Err::DepthExceeded)
                fail(Err::CriticalNotInBasin, "chosen critical point is not in the basin");
            throw;
        }
    };

    int idx = 1;
    if (rep.kind == RepKind::PolynomialP) {
        if (which == WhichCritical::Second)
            fail(Err::CriticalNotInBasin, "the second critical point of P is fixed at infinity");
        idx = 1;
    } else if (which == WhichCritical::First) {
        idx = 1;
    } else if (which == WhichCritical::Second) {
        idx = 2;
    } else {
        // Auto: smaller |phi| wins; ties go to the smaller principal argument.
        const Complex r1 = raw_at(crits[0]);
        const Complex r2 = raw_at(crits[1]);
        const double a1 = std::abs(r1), a2 = std::abs(r2);
        if (std::abs(a1 - a2) < 1e-9 * std::max(a1, a2)) {
            idx = (std::arg(r1) <= std::arg(r2)) ? 1 : 2;
        } else {
            idx = (a1 < a2) ? 1 : 2;
        }
    }
    chart.critical_index = idx;
    chart.c1 = crits[size_t(idx - 1)];
    chart.normalization = raw_at(chart.c1);
    if (std::abs(chart.normalization) == 0.0)
        fail(Err::CriticalNotInBasin, "critical point is prefixed to the fixed point");
    return chart;
}

Complex koenigs_value(const KoenigsChart& chart, const SpherePoint& z) {
    return koenigs_raw(chart, z) / chart.normalization;
}

Complex koenigs_log_value(const KoenigsChart& chart, const SpherePoint& z) {
    const Complex v = koenigs_value(chart, z);
    if (std::abs(v) == 0.0) fail(Err::Unreachable, "log of zero linearizer value");
    return std::log(v);
}

LiftState lift_begin(const KoenigsChart& chart, Complex log_value, Complex direction) {
    if (direction.real() >= -1e-12)
        fail(Err::InvalidArgument, "lift direction must decay");
    // Work on the raw scale throughout.
    const Complex l0 = log_value + std::log(chart.normalization);
    const double r_inv = 0.25 * chart.local_radius;
    const double re_start = std::log(0.5 * r_inv);
    double T = 0.0;
    if (l0.real() > re_start) T = (re_start - l0.real()) / direction.real();

    const double dt = 0.30 / std::abs(direction);
    double t = T;
    Complex u = newton_raw(chart, std::exp(l0 + T * direction), std::exp(l0 + T * direction));
    while (t > 0.0) {
        const double tn = (t - dt > 1e-12) ? t - dt : 0.0;
        const Complex target = std::exp(l0 + tn * direction);
        const Complex v0 = koenigs_raw(chart, from_working(chart.rep, u));
        const Complex deriv = raw_derivative(chart, u);
        Complex seed = u;
        if (std::abs(deriv) > 1e-14) seed = u + (target - v0) / deriv;
        u = newton_raw(chart, target, seed);
        t = tn;
    }
    return LiftState{u, std::exp(log_value)};
}

void lift_step(const KoenigsChart& chart, LiftState& state, Complex new_value) {
    const Complex target = new_value * chart.normalization;
    const Complex v0 = koenigs_raw(chart, from_working(chart.rep, state.u));
    const Complex deriv = raw_derivative(chart, state.u);
    Complex seed = state.u;
    if (std::abs(deriv) > 1e-14) seed = state.u + (target - v0) / deriv;
    state.u = newton_raw(chart, target, seed);
    state.value = new_value;
}

SpherePoint lift_point(const KoenigsChart& chart, const LiftState& state) {
    return from_working(chart.rep, state.u);
}

SpherePoint koenigs_inverse(const KoenigsChart& chart, Complex w,
                            const std::optional<BranchHint>& hint) {
    if (std::abs(w) == 0.0) return chart.fixed_point;
    if (close(w, Complex{1.0, 0.0}, 1e-12)) return chart.c1;  // normalization point
    Complex l0, dir;
    if (hint) {
        l0 = hint->log_value;
        dir = hint->direction;
        if (!close(std::exp(l0), w, 1e-9 * std::max(1.0, std::abs(w))))
            fail(Err::Unreachable, "branch hint does not match the requested value");
    } else {
        l0 = std::log(w);
        dir = std::log(chart.lambda());  // principal; Re < 0 since |lambda| < 1
    }
    const LiftState st = lift_begin(chart, l0, dir);
    return lift_point(chart, st);
}

SpherePoint involution(const KoenigsChart& chart, const SpherePoint& z) {
    const Complex v = koenigs_value(chart, z);
    if (std::abs(v) == 0.0)
        fail(Err::Unreachable, "involution undefined on preimages of the fixed point");
    const Complex lam = chart.lambda();
    return koenigs_inverse(chart, lam * lam / v);
}

Complex chart_derivative_at_fixed_point(const KoenigsChart& chart) {
    return 1.0 / chart.normalization;
}

}  // namespace cantorlocus

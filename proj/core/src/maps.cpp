#include "cantorlocus/maps.hpp"

#include <algorithm>
#include <cmath>

namespace cantorlocus {

const char* err_name(Err e) {
    switch (e) {
        case Err::InvalidArgument: return "InvalidArgument";
        case Err::DegenerateIndex: return "DegenerateIndex";
        case Err::CriticalNotInBasin: return "CriticalNotInBasin";
        case Err::NoConvergence: return "NoConvergence";
        case Err::NotInBasin: return "NotInBasin";
        case Err::DepthExceeded: return "DepthExceeded";
        case Err::Unreachable: return "Unreachable";
        case Err::BranchAmbiguous: return "BranchAmbiguous";
        case Err::NotInImmediateBasin: return "NotInImmediateBasin";
        case Err::PrefixedToZero: return "PrefixedToZero";
        case Err::Undecidable: return "Undecidable";
        case Err::OnExcludedRay: return "OnExcludedRay";
        case Err::OnLine: return "OnLine";
        case Err::NotInXiStar: return "NotInXiStar";
        case Err::NotInR: return "NotInR";
        case Err::LeftR: return "LeftR";
        case Err::OutsideDomain: return "OutsideDomain";
        case Err::NoLanding: return "NoLanding";
        case Err::NewtonDiverged: return "NewtonDiverged";
        case Err::NotDiverging: return "NotDiverging";
        case Err::FitUnstable: return "FitUnstable";
        case Err::ConfigError: return "ConfigError";
        case Err::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

// Roots of t^2 - S t + P = 0, stable form.
std::array<Complex, 2> quadratic_roots_monic(Complex S, Complex P) {
    const Complex disc = S * S - 4.0 * P;
    Complex sq = std::sqrt(disc);
    // Pick the sign that avoids cancellation.
    if (std::abs(S + sq) < std::abs(S - sq)) sq = -sq;
    const Complex t1 = 0.5 * (S + sq);
    Complex t2;
    if (std::abs(t1) > 0.0)
        t2 = P / t1;
    else
        t2 = S - t1;
    return {t1, t2};
}

bool lex_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Image of a point given as num/den, renormalized to a sphere point.
SpherePoint from_fraction(Complex num, Complex den) {
    const double an = std::abs(num), ad = std::abs(den);
    if (!std::isfinite(an) || !std::isfinite(ad))
        fail(Err::InvalidArgument, "non-finite intermediate in map step");
    if (ad == 0.0) {
        if (an == 0.0) fail(Err::InvalidArgument, "0/0 in map step");
        return SpherePoint::infinity();
    }
    if (an <= ad) return SpherePoint::of(num / den);
    const Complex q = den / num;  // |q| < 1, safe to invert unless subnormal
    if (std::abs(q) < 1e-300) return SpherePoint::infinity();
    return SpherePoint::of(1.0 / q);
}

}  // namespace

Representative Representative::rational(Complex lambda, Complex A) {
    if (std::abs(lambda) == 0.0)
        fail(Err::InvalidArgument, "lambda = 0 has no G-type normal form; use PolynomialP");
    if (close(lambda, Complex{1.0, 0.0}, 0.0))
        return Representative{RepKind::ParabolicGT, Complex{1.0, 0.0}, A};
    return Representative{RepKind::RationalG, lambda, A};
}

Complex Representative::sigma() const {
    switch (kind) {
        case RepKind::PolynomialP:
            return Complex{0.0, 0.0};
        case RepKind::RationalG:
            return ((lambda - 2.0) * (lambda - 2.0) - A * A) / (lambda * lambda);
        case RepKind::ParabolicGT:
            return 1.0 - A * A;
    }
    return {};
}

SpherePoint Representative::step(const SpherePoint& pt) const {
    if (kind == RepKind::PolynomialP) {
        if (pt.at_inf) return SpherePoint::infinity();
        const double az = std::abs(pt.z);
        if (az > 1.0) {
            // w-chart: image of 1/w under P is (lambda w + 1)/w^2.
            const Complex w = 1.0 / pt.z;
            return from_fraction(lambda * w + 1.0, w * w);
        }
        return SpherePoint::of(lambda * pt.z + pt.z * pt.z);
    }
    // G-type maps: G(z) = (z^2 + A z + 1)/(lambda z); G(1/w) has the same
    // numerator shape, so one fraction handles both charts.
    if (pt.at_inf) return SpherePoint::infinity();
    const Complex u = (std::abs(pt.z) > 1.0) ? 1.0 / pt.z : pt.z;
    // Image of the original point: if we flipped to u = 1/z, G(z) = G(1/u)
    // and G(1/u) = (u^2 + A u + 1)/(lambda u) as well, since G(1/u) = G(u).
    const Complex num = u * u + A * u + 1.0;
    const Complex den = lambda * u;
    return from_fraction(num, den);
}

std::array<SpherePoint, 2> Representative::critical_points() const {
    if (kind == RepKind::PolynomialP)
        return {SpherePoint::of(-lambda / 2.0), SpherePoint::infinity()};
    return {SpherePoint::of(Complex{1.0, 0.0}), SpherePoint::of(Complex{-1.0, 0.0})};
}

SpherePoint Representative::marked_fixed_point() const {
    if (kind == RepKind::PolynomialP) return SpherePoint::of(Complex{0.0, 0.0});
    return SpherePoint::infinity();
}

std::array<Complex, 3> eigen_triple(const MapClass& cls) {
    const Complex S = cls.lambda * cls.sigma - cls.lambda + 2.0;
    const Complex P = cls.sigma;
    if (!std::isfinite(std::abs(S)) || !std::isfinite(std::abs(P)))
        fail(Err::DegenerateIndex, "eigenvalue quadratic has non-finite data");
    auto r = quadratic_roots_monic(S, P);
    if (!lex_less(r[0], r[1])) std::swap(r[0], r[1]);
    return {cls.lambda, r[0], r[1]};
}

Representative representative_from_sigma(const MapClass& cls) {
    if (std::abs(cls.lambda) == 0.0)
        fail(Err::InvalidArgument, "lambda = 0: use the polynomial normal form z^2 + sigma/4");
    const Complex A2 = (cls.lambda - 2.0) * (cls.lambda - 2.0) - cls.sigma * cls.lambda * cls.lambda;
    const Complex A = std::sqrt(A2);  // principal branch
    return Representative::rational(cls.lambda, A);
}

std::vector<FixedPoint> fixed_points(const Representative& rep) {
    std::vector<FixedPoint> out;
    const Complex lam = rep.lambda;
    if (rep.kind == RepKind::PolynomialP) {
        // Fixed: 0 (eigenvalue lambda), 1-lambda (eigenvalue 2-lambda),
        // infinity (superattracting, eigenvalue 0 in the w-chart).
        const bool merged = std::abs(1.0 - lam) < 1e-14;
        if (merged) {
            out.push_back({SpherePoint::of(Complex{0, 0}), lam, 2});
        } else {
            out.push_back({SpherePoint::of(Complex{0, 0}), lam, 1});
            out.push_back({SpherePoint::of(1.0 - lam), 2.0 - lam, 1});
        }
        out.push_back({SpherePoint::infinity(), Complex{0.0, 0.0}, 1});
        return out;
    }
    // G-type: finite fixed points solve (1-lambda) z^2 + A z + 1 = 0,
    // eigenvalue G'(z) = (1 - 1/z^2)/lambda; infinity has eigenvalue lambda.
    const Complex a = 1.0 - lam, b = rep.A, c{1.0, 0.0};
    auto eig = [&](Complex z) { return (1.0 - 1.0 / (z * z)) / lam; };
    if (std::abs(a) < 1e-14) {
        // Parabolic at infinity: double (triple when A = 0).
        if (std::abs(b) < 1e-14) {
            out.push_back({SpherePoint::infinity(), lam, 3});
        } else {
            const Complex z = -c / b;
            out.push_back({SpherePoint::of(z), eig(z), 1});
            out.push_back({SpherePoint::infinity(), lam, 2});
        }
        return out;
    }
    const Complex disc = b * b - 4.0 * a * c;
    if (std::abs(disc) < 1e-14 * std::max(1.0, std::norm(b))) {
        const Complex z = -b / (2.0 * a);
        out.push_back({SpherePoint::of(z), eig(z), 2});
    } else {
        auto r = quadratic_roots_monic(-b / a, c / a);
        if (!lex_less(r[0], r[1])) std::swap(r[0], r[1]);
        out.push_back({SpherePoint::of(r[0]), eig(r[0]), 1});
        out.push_back({SpherePoint::of(r[1]), eig(r[1]), 1});
    }
    out.push_back({SpherePoint::infinity(), lam, 1});
    return out;
}

std::vector<SpherePoint> orbit(const Representative& rep, SpherePoint z0, int n) {
    if (n < 0) fail(Err::InvalidArgument, "orbit length must be >= 0");
    std::vector<SpherePoint> out;
    out.reserve(size_t(n) + 1);
    out.push_back(z0);
    SpherePoint z = z0;
    for (int i = 0; i < n; ++i) {
        z = rep.step(z);
        out.push_back(z);
    }
    return out;
}

Complex working_chart_step(const Representative& rep, Complex u) {
    if (rep.kind == RepKind::PolynomialP) return rep.lambda * u + u * u;
    // Chart w = 1/z at infinity: F(w) = lambda w / (1 + A w + w^2).
    return rep.lambda * u / (1.0 + rep.A * u + u * u);
}

double certified_linearization_radius(const Representative& rep) {
    const Complex lam = rep.lambda;
    const double al = std::abs(lam);
    if (al <= 0.0 || al >= 1.0)
        fail(Err::InvalidArgument, "certified radius needs 0 < |lambda| < 1");

    double cap = 1e6;
    if (rep.kind == RepKind::PolynomialP) {
        cap = 0.95 * std::abs(1.0 - lam);  // stay clear of the other fixed point
    } else {
        // Poles of the w-chart map: roots of w^2 + A w + 1 (product 1).
        auto r = quadratic_roots_monic(-rep.A, Complex{1.0, 0.0});
        cap = 0.90 * std::min(std::abs(r[0]), std::abs(r[1]));
        cap = std::min(cap, 0.90);
    }

    const int kSamples = 256;
    auto ok = [&](double r) {
        for (int i = 0; i < kSamples; ++i) {
            const double t = 2.0 * kPi * (double(i) + 0.5) / kSamples;
            const Complex z = r * Complex{std::cos(t), std::sin(t)};
            const Complex img = working_chart_step(rep, z);
            if (!std::isfinite(img.real()) || !std::isfinite(img.imag())) return false;
            if (std::abs(img - lam * z) >= 0.5 * (1.0 - al) * std::abs(z)) return false;
        }
        return true;
    };

    double lo = 0.0, hi = cap;
    if (!ok(hi)) {
        // Shrink until valid, then bisect the boundary.
        while (hi > 1e-12 && !ok(hi)) hi *= 0.5;
        if (hi <= 1e-12) fail(Err::NoConvergence, "no certifiable linearization radius");
        lo = hi;
        hi *= 2.0;
        for (int i = 0; i < 50; ++i) {
            const double mid = 0.5 * (lo + hi);
            (ok(mid) ? lo : hi) = mid;
        }
    } else {
        lo = hi;
    }
    return 0.8 * lo;  // margin inside the certified circle
}

namespace {

// Attracting petal membership for the parabolic maps G_T at infinity.
// For T != 0 the coordinate u = z/T turns G_T into u -> u + 1 + 1/(T^2 u),
// so {Re(z/T) > R0} is forward-invariant once R0 kills the remainder.
// For T = 0 use u = z^2/2 (two petals along the real axis).
struct ParabolicTrap {
    Complex T;
    double R0;

    static ParabolicTrap make(Complex T) {
        const double aT = std::abs(T);
        if (aT < 1e-9) return ParabolicTrap{T, 1.0};
        return ParabolicTrap{T, std::max(1.0, 2.0 / (aT * aT))};
    }
    bool contains(const SpherePoint& p) const {
        if (p.at_inf) return true;
        if (std::abs(T) < 1e-9) return (0.5 * p.z * p.z).real() > R0;
        return (p.z / T).real() > R0;
    }
};

}  // namespace

Relatedness classify_relatedness(const Representative& rep, long max_iter, double radius) {
    const double al = std::abs(rep.lambda);
    const bool parabolic = (rep.kind == RepKind::ParabolicGT) ||
                           (std::abs(rep.lambda - 1.0) < 1e-14);
    if (!parabolic && (al <= 0.0 || al >= 1.0))
        fail(Err::InvalidArgument, "classify_relatedness needs |lambda| < 1 or lambda = 1");

    // Trap membership test.
    double r_cert = radius;
    ParabolicTrap trap = ParabolicTrap::make(rep.A);
    if (!parabolic && r_cert <= 0.0) r_cert = certified_linearization_radius(rep);
    auto in_trap = [&](const SpherePoint& p) {
        if (parabolic) return trap.contains(p);
        if (rep.kind == RepKind::PolynomialP) return !p.at_inf && std::abs(p.z) < r_cert;
        return p.at_inf || std::abs(p.z) > 1.0 / r_cert;
    };
    const SpherePoint target = rep.marked_fixed_point();

    for (const SpherePoint& c : rep.critical_points()) {
        SpherePoint z = c;
        bool trapped = false;
        SpherePoint prev = z;
        int stall = 0;
        for (long i = 0; i < max_iter; ++i) {
            if (in_trap(z)) {
                // Confirm it stays a few steps (the trap is forward-invariant;
                // this guards against borderline numerics).
                SpherePoint y = z;
                trapped = true;
                for (int j = 0; j < 8; ++j) {
                    y = rep.step(y);
                    if (!in_trap(y)) { trapped = false; break; }
                }
                if (trapped) break;
            }
            z = rep.step(z);
            // Stalled at a point that is not the target: converged elsewhere.
            if (sphere_dist(z, prev) < 1e-15) {
                ++stall;
                if (stall > 16 && !in_trap(z) && sphere_dist(z, target) > 1e-8)
                    return Relatedness::NotInR;
            } else {
                stall = 0;
            }
            prev = z;
        }
        if (!trapped) {
            // For P the second critical point is the superattracting fixed
            // point at infinity, never in the basin of 0.
            if (rep.kind == RepKind::PolynomialP && c.at_inf) return Relatedness::NotInR;
            return Relatedness::Undecided;
        }
    }
    return Relatedness::InR;
}

}  // namespace cantorlocus

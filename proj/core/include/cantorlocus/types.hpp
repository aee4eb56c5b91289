#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cantorlocus {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Default tolerances. Individual operations accept overrides.
constexpr double kKoenigsTol = 1e-12;
constexpr double kFatouTol = 1e-10;
constexpr double kSolveTol = 1e-10;
constexpr int kDefaultDepth = 100000;

enum class Err {
    InvalidArgument,
    DegenerateIndex,
    CriticalNotInBasin,
    NoConvergence,
    NotInBasin,
    DepthExceeded,
    Unreachable,
    BranchAmbiguous,
    NotInImmediateBasin,
    PrefixedToZero,
    Undecidable,
    OnExcludedRay,
    OnLine,
    NotInXiStar,
    NotInR,
    LeftR,
    OutsideDomain,
    NoLanding,
    NewtonDiverged,
    NotDiverging,
    FitUnstable,
    ConfigError,
    IoError,
};

const char* err_name(Err e);

class CantorError : public std::runtime_error {
public:
    CantorError(Err code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
    throw CantorError(code, what);
}

// Point on the Riemann sphere. `z` is meaningful only when !at_inf.
struct SpherePoint {
    Complex z{0.0, 0.0};
    bool at_inf = false;

    static SpherePoint infinity() { return SpherePoint{Complex{0.0, 0.0}, true}; }
    static SpherePoint of(Complex v) { return SpherePoint{v, false}; }

    bool is_infinity() const { return at_inf; }
    // Coordinate in the chart w = 1/z (maps infinity to 0).
    Complex w() const {
        if (at_inf) return Complex{0.0, 0.0};
        return 1.0 / z;
    }
    bool finite_values() const {
        return at_inf || (std::isfinite(z.real()) && std::isfinite(z.imag()));
    }
};

inline double sphere_dist(const SpherePoint& a, const SpherePoint& b) {
    // Chordal-like distance, adequate for convergence tests.
    if (a.at_inf && b.at_inf) return 0.0;
    if (a.at_inf || b.at_inf) {
        const SpherePoint& f = a.at_inf ? b : a;
        const double az = std::abs(f.z);
        if (az == 0.0) return 1e308;
        return 1.0 / az;
    }
    const double direct = std::abs(a.z - b.z);
    const double na = std::abs(a.z), nb = std::abs(b.z);
    if (na > 1.0 && nb > 1.0) return std::min(direct, std::abs(1.0 / a.z - 1.0 / b.z));
    return direct;
}

// Rational rotation number p/q in lowest terms, q >= 2.
struct PQ {
    int p = 1;
    int q = 2;

    static PQ make(int p, int q) {
        if (q < 2) fail(Err::InvalidArgument, "q must be >= 2");
        if (p <= 0 || p >= q) fail(Err::InvalidArgument, "require 0 < p < q");
        if (std::gcd(p, q) != 1) fail(Err::InvalidArgument, "gcd(p,q) != 1");
        return PQ{p, q};
    }

    Complex omega() const {  // e^{2 pi i p/q}
        const double t = 2.0 * kPi * double(p) / double(q);
        return Complex{std::cos(t), std::sin(t)};
    }
    Complex omega_conj() const {  // e^{-2 pi i p/q}
        const double t = 2.0 * kPi * double(p) / double(q);
        return Complex{std::cos(t), -std::sin(t)};
    }
    // Multiplicative inverse of p mod q.
    int p_inverse() const {
        for (int r = 1; r < q; ++r)
            if ((r * p) % q == 1) return r;
        fail(Err::InvalidArgument, "p not invertible mod q");
    }
    int mod(long long j) const {
        long long m = j % q;
        if (m < 0) m += q;
        return int(m);
    }
    std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
};

inline bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace cantorlocus

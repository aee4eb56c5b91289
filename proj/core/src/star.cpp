#include "cantorlocus/star.hpp"

#include <algorithm>
#include <cmath>

namespace cantorlocus {

namespace {

double frac_part(double x) { return x - std::floor(x); }

}  // namespace

StarGeometry build_star(const PQ& pq, Complex lambda, std::optional<Complex> zeta2) {
    const double al = std::abs(lambda);
    if (al <= 0.0 || al >= 1.0)
        fail(Err::InvalidArgument, "star geometry needs lambda in the punctured disk");
    const Complex rotated = lambda * pq.omega_conj();
    if (rotated.imag() == 0.0 && rotated.real() <= 0.0)
        fail(Err::OnExcludedRay, "lambda on the ray [0, -omega) has no principal log");

    StarGeometry g;
    g.pq = pq;
    g.lambda = lambda;
    g.L = double(pq.q) * std::log(rotated);  // principal branch
    g.theta = std::abs(std::arg(g.L * Complex{0.0, -1.0}));
    const double sin_theta = std::sin(g.theta);
    if (sin_theta <= 0.0) fail(Err::OnExcludedRay, "L parallel to 2 pi i");
    g.m = 2.0 * kPi * sin_theta / (double(pq.q) * std::abs(g.L));
    g.r_lambda = std::abs(g.L) / (2.0 * double(pq.q) * sin_theta);
    g.m_signed = (2.0 * kPi * Complex{0.0, 1.0} / (double(pq.q) * g.L)).imag();

    g.zeta.push_back(Complex{0.0, 0.0});
    if (zeta2) {
        const double eta2_raw = (*zeta2 / g.L).imag() / g.m_signed;
        const double d2 = std::min(frac_part(eta2_raw), 1.0 - frac_part(eta2_raw));
        if (d2 * g.m < 1e-12) {
            g.k = 1;  // zeta_2 lies on the family-1 lines
        } else {
            g.k = 2;
            g.zeta.push_back(*zeta2);
            g.eta2 = frac_part(eta2_raw);
            g.h = g.m * d2;
            // tau_2^p sits at level eta2_raw + p; bind it to the nearest
            // family-1 level, ties toward the smaller index.
            const double level = eta2_raw + double(pq.p);
            double j_near = std::floor(level + 0.5);
            if (frac_part(level) == 0.5) j_near = std::floor(level);
            g.bound_to = pq.mod(long(j_near));
        }
    }
    return g;
}

double m_of_lambda(const PQ& pq, Complex lambda) {
    const Complex rotated = lambda * pq.omega_conj();
    if (rotated.imag() == 0.0 && rotated.real() <= 0.0)
        fail(Err::OnExcludedRay, "lambda on the excluded ray");
    const Complex L = double(pq.q) * std::log(rotated);
    const double theta = std::abs(std::arg(L * Complex{0.0, -1.0}));
    return 2.0 * kPi * std::sin(theta) / (double(pq.q) * std::abs(L));
}

bool in_horodisk(const PQ& pq, Complex lambda, double M) {
    if (M <= 1.0 / double(pq.q * pq.q)) fail(Err::InvalidArgument, "M must exceed 1/q^2");
    return m_of_lambda(pq, lambda) >= M;
}

std::vector<double> subhorocyclic_rate(const Complex omega,
                                       const std::vector<Complex>& lambdas) {
    std::vector<double> out;
    out.reserve(lambdas.size());
    for (const Complex lam : lambdas) {
        const double num = std::abs((std::conj(omega) * lam).imag());
        const double den = std::sqrt(std::abs(1.0 - std::norm(lam)));
        out.push_back(den > 0.0 ? num / den : 1e308);
    }
    return out;
}

std::vector<double> subhorocyclic_rate(const PQ& pq, const std::vector<Complex>& lambdas) {
    return subhorocyclic_rate(pq.omega(), lambdas);
}

StripQuery strip_and_wire(const StarGeometry& g, Complex logw, double tol) {
    const double eta = (logw / g.L).imag() / g.m_signed;
    StripQuery r;
    if (g.k == 1) {
        const double nearest = std::floor(eta + 0.5);
        r.dist_line = (eta - nearest) * g.m;
        r.strip = long(std::floor(eta));
        const double wire_level = double(r.strip) + 0.5;
        r.dist_wire = (eta - wire_level) * g.m;
    } else {
        const double cell = std::floor(eta);
        const double f = eta - cell;
        // Levels in this cell: cell (fam 1), cell + eta2 (fam 2), cell + 1.
        const double cands[3] = {cell, cell + g.eta2, cell + 1.0};
        double best = cands[0];
        for (const double c : cands)
            if (std::abs(eta - c) < std::abs(eta - best)) best = c;
        r.dist_line = (eta - best) * g.m;
        double wire_level;
        if (f < g.eta2) {
            r.strip = 2 * long(cell);
            wire_level = cell + 0.5 * g.eta2;
        } else {
            r.strip = 2 * long(cell) + 1;
            wire_level = cell + 0.5 * (g.eta2 + 1.0);
        }
        r.dist_wire = (eta - wire_level) * g.m;
    }
    r.on_line = std::abs(r.dist_line) < tol;
    return r;
}

Complex wire_log_point(const StarGeometry& g, long j, double t) {
    double wire_level;
    if (g.k == 1) {
        wire_level = double(j) + 0.5;
    } else {
        const long cell = (j >= 0) ? j / 2 : -((-j + 1) / 2);
        const bool lower = ((j % 2) + 2) % 2 == 0;
        wire_level = double(cell) + (lower ? 0.5 * g.eta2 : 0.5 * (g.eta2 + 1.0));
    }
    // eta is Im(xi)/m_signed with xi = logw/L; the wire is xi = t + i eta m_signed.
    const Complex xi{t, wire_level * g.m_signed};
    return xi * g.L;
}

BranchHint strip_branch_hint(const StarGeometry& g, Complex log_value) {
    return BranchHint{log_value, g.L};
}

double horocircle_radius(Complex logv, Complex tangent) {
    const Complex d = logv - tangent;
    const double re = std::abs(d.real());
    if (re == 0.0) fail(Err::InvalidArgument, "point on the tangent axis");
    return std::norm(d) / (2.0 * re);
}

double r_mu_radius(const PQ& pq, Complex mu) {
    const Complex base = std::log(mu);  // principal
    const double target = -double(pq.q) * base.imag() / (2.0 * kPi) - double(pq.p);
    const long n0 = std::lround(target / double(pq.q));
    double best = 1e308;
    for (long n = n0 - 1; n <= n0 + 1; ++n) {
        const Complex M = double(pq.q) * (base + Complex{0.0, 2.0 * kPi * double(n)}) +
                          Complex{0.0, 2.0 * kPi * double(pq.p)};
        const double r = std::norm(M) / (2.0 * double(pq.q) * std::abs(M.real()));
        best = std::min(best, r);
    }
    return best;
}

double r_rho_radius(Complex rho) {
    const Complex base = std::log(rho);
    const long n0 = std::lround(-base.imag() / (2.0 * kPi));
    double best = 1e308;
    for (long n = n0 - 1; n <= n0 + 1; ++n) {
        const Complex R = base + Complex{0.0, 2.0 * kPi * double(n)};
        if (R.real() == 0.0) continue;
        best = std::min(best, std::norm(R) / (2.0 * std::abs(R.real())));
    }
    return best;
}

}  // namespace cantorlocus

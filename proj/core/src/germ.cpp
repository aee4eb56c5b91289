#include "cantorlocus/germ.hpp"

#include <algorithm>
#include <cmath>

namespace cantorlocus {

Series series_mul(const Series& a, const Series& b, int degree) {
    Series r(size_t(degree) + 1, Complex{0.0, 0.0});
    const int na = int(a.size()) - 1, nb = int(b.size()) - 1;
    for (int i = 0; i <= std::min(na, degree); ++i) {
        if (a[size_t(i)] == Complex{0.0, 0.0}) continue;
        const int jmax = std::min(nb, degree - i);
        for (int j = 0; j <= jmax; ++j) r[size_t(i + j)] += a[size_t(i)] * b[size_t(j)];
    }
    return r;
}

Series series_compose(const Series& outer, const Series& inner, int degree) {
    // Horner: r <- r * inner + c_m, descending over outer coefficients.
    Series r(size_t(degree) + 1, Complex{0.0, 0.0});
    for (int m = int(outer.size()) - 1; m >= 0; --m) {
        r = series_mul(r, inner, degree);
        r[0] += outer[size_t(m)];
    }
    return r;
}

Series series_reciprocal_one_plus(const Series& s, int degree) {
    // r = 1 - s + s^2 - ... truncated.
    Series r(size_t(degree) + 1, Complex{0.0, 0.0});
    r[0] = 1.0;
    Series pow(size_t(degree) + 1, Complex{0.0, 0.0});
    pow[0] = 1.0;
    for (int k = 1; k <= degree; ++k) {
        pow = series_mul(pow, s, degree);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        bool all_zero = true;
        for (size_t i = 0; i < r.size(); ++i) {
            r[i] += sign * pow[i];
            if (pow[i] != Complex{0.0, 0.0}) all_zero = false;
        }
        if (all_zero) break;
    }
    return r;
}

Series iterate_jet(const Series& one_step, int n, int degree) {
    Series r(size_t(degree) + 1, Complex{0.0, 0.0});
    r[1] = 1.0;  // identity
    for (int i = 0; i < n; ++i) r = series_compose(one_step, r, degree);
    return r;
}

namespace {

int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return int(r);
}

Complex horner(const Series& p, Complex w) {
    Complex r{0.0, 0.0};
    for (int i = int(p.size()) - 1; i >= 0; --i) r = r * w + p[size_t(i)];
    return r;
}

Complex horner_derivative(const Series& p, Complex w) {
    Complex r{0.0, 0.0};
    for (int i = int(p.size()) - 1; i >= 1; --i) r = r * w + double(i) * p[size_t(i)];
    return r;
}

}  // namespace

ParabolicGerm build_germ(const Series& jet_in) {
    Series F = jet_in;
    if (F.size() < 4) fail(Err::InvalidArgument, "germ jet too short");
    if (std::abs(F[0]) > 1e-12 || std::abs(F[1] - 1.0) > 1e-8)
        fail(Err::InvalidArgument, "germ jet must fix 0 with multiplier 1");
    F[0] = 0.0;
    F[1] = 1.0;
    const int D = int(F.size()) - 1;

    // q = first nonlinear order minus one.
    int q = 0;
    double scale = 0.0;
    for (size_t i = 2; i < F.size(); ++i) scale = std::max(scale, std::abs(F[i]));
    for (int m = 2; m <= D; ++m) {
        if (std::abs(F[size_t(m)]) > 1e-10 * std::max(1.0, scale)) {
            q = m - 1;
            break;
        }
    }
    if (q == 0) fail(Err::InvalidArgument, "germ jet is the identity to working order");
    if (D < 3 * q + 1) fail(Err::InvalidArgument, "germ jet degree too low for this q");

    ParabolicGerm g;
    g.q = q;
    g.a = F[size_t(q + 1)];

    // Triangular normal-form solve: find h (and b) with F o h = h o N,
    // N = w + a w^{q+1} + b w^{2q+1}, degree by degree.
    Series h(size_t(D) + 1, Complex{0.0, 0.0});
    h[1] = 1.0;
    Series N(size_t(D) + 1, Complex{0.0, 0.0});
    N[1] = 1.0;
    N[size_t(q + 1)] = g.a;
    Complex b{0.0, 0.0};

    auto defect_at = [&](int d) {
        const Series lhs = series_compose(F, h, d);
        const Series rhs = series_compose(h, N, d);
        return lhs[size_t(d)] - rhs[size_t(d)];
    };

    for (int d = q + 2; d <= D; ++d) {
        if (d == 2 * q + 1) {
            // b enters h o N linearly with slope h[1] = 1.
            const Complex e0 = defect_at(d);
            b += e0;
            N[size_t(2 * q + 1)] = b;
            continue;
        }
        const int m = d - q;
        if (m < 2 || m > D) continue;
        const Complex e0 = defect_at(d);
        h[size_t(m)] += 1.0;
        const Complex e1 = defect_at(d);
        h[size_t(m)] -= 1.0;
        const Complex slope = e1 - e0;
        if (std::abs(slope) < 1e-14 * std::max(1.0, std::abs(e0)))
            fail(Err::NoConvergence, "normal form solve hit a resonant degree");
        h[size_t(m)] = -e0 / slope;
    }
    g.b = b;
    g.h = h;

    // Sector-coordinate expansion constants. With at = q a:
    //   v' = v (1 + at v + B v^2 + C v^3 + Dh v^4 + ...)
    const Complex a = g.a;
    const Complex at = double(q) * a;
    const Complex B = double(q) * b + double(binom(q, 2)) * a * a;
    const Complex C = double(q) * (double(q) - 1.0) * a * b + double(binom(q, 3)) * a * a * a;
    const Complex Dh = double(binom(q, 2)) * b * b + double(binom(q, 3)) * 3.0 * a * a * b +
                       double(binom(q, 4)) * a * a * a * a;

    const Complex at2 = at * at, at3 = at2 * at, at4 = at3 * at;
    g.beta = 1.0 - B / at2;
    g.gamma = 1.0 + C / at3 - 2.0 * B / at2;
    // delta = E4 / at^4 with E4 the v^4 coefficient of v/v'.
    const Complex E4 = -Dh + 2.0 * at * C + B * B - 3.0 * at2 * B + at4;
    g.delta = E4 / at4;

    g.s_coef = g.gamma - g.beta * g.beta + 0.5 * g.beta;
    g.t_coef = 0.5 * (g.delta - g.beta * g.gamma + g.beta * g.beta - g.beta / 3.0 +
                      g.s_coef * (1.0 - g.beta));

    // Reliability radius of the normalizing polynomial.
    double rho = 1.0;
    for (int m = 2; m <= D; ++m) {
        const double c = std::abs(h[size_t(m)]);
        if (c > 0.0) rho = std::max(rho, std::pow(c, 1.0 / double(m - 1)));
    }
    g.r_switch = std::min(0.15, 0.35 / rho);

    g.sector_min =
        std::max(20.0, 4.0 * (1.0 + std::abs(g.beta) + std::abs(g.gamma) + std::abs(g.delta)));

    // Attracting directions: a d^q real negative.
    const double base_arg = (kPi - std::arg(a)) / double(q);
    g.directions.reserve(size_t(q));
    for (int k = 0; k < q; ++k) {
        const double t = base_arg + 2.0 * kPi * double(k) / double(q);
        g.directions.push_back(Complex{std::cos(t), std::sin(t)});
    }
    return g;
}

Complex germ_normalize(const ParabolicGerm& g, Complex z) {
    if (std::abs(z) >= g.r_switch)
        fail(Err::InvalidArgument, "point outside the germ working radius");
    Complex w = z;
    for (int it = 0; it < 24; ++it) {
        const Complex f = horner(g.h, w) - z;
        if (std::abs(f) < 1e-15 * std::max(1.0, std::abs(z))) return w;
        const Complex d = horner_derivative(g.h, w);
        w -= f / d;
    }
    return w;
}

Complex germ_u(const ParabolicGerm& g, Complex z) {
    const Complex w = germ_normalize(g, z);
    Complex v{1.0, 0.0};
    for (int i = 0; i < g.q; ++i) v *= w;
    return -1.0 / (double(g.q) * g.a * v);
}

int germ_direction_index(const ParabolicGerm& g, Complex z) {
    const Complex w = germ_normalize(g, z);
    if (std::abs(w) == 0.0) return -1;
    const Complex d = w / std::abs(w);
    int best = -1;
    double best_ang = 1e9;
    for (size_t k = 0; k < g.directions.size(); ++k) {
        const double ang = std::abs(std::arg(d / g.directions[k]));
        if (ang < best_ang) {
            best_ang = ang;
            best = int(k);
        }
    }
    if (best_ang > 0.45 * (2.0 * kPi / double(g.q))) return -1;
    return best;
}

Complex germ_phi_u(const ParabolicGerm& g, Complex u) {
    return u - g.beta * std::log(u) + g.s_coef / u + g.t_coef / (u * u);
}

Complex germ_phi_u_derivative(const ParabolicGerm& g, Complex u) {
    return 1.0 - g.beta / u - g.s_coef / (u * u) - 2.0 * g.t_coef / (u * u * u);
}

Complex germ_phi_u_inverse(const ParabolicGerm& g, Complex y) {
    Complex u = y + g.beta * std::log(y + 10.0);
    for (int it = 0; it < 50; ++it) {
        const Complex f = germ_phi_u(g, u) - y;
        if (std::abs(f) < 1e-13 * std::max(1.0, std::abs(y))) return u;
        u -= f / germ_phi_u_derivative(g, u);
    }
    fail(Err::NoConvergence, "sector coordinate inversion did not converge");
}

Complex germ_point_from_u(const ParabolicGerm& g, Complex u, int dir_index) {
    if (dir_index < 0 || dir_index >= g.q) fail(Err::InvalidArgument, "bad petal index");
    const Complex v = -1.0 / (double(g.q) * g.a * u);
    // q-th roots of v; pick the one nearest the requested direction.
    const double r = std::pow(std::abs(v), 1.0 / double(g.q));
    const double th = std::arg(v) / double(g.q);
    Complex best{0.0, 0.0};
    double best_ang = 1e9;
    for (int k = 0; k < g.q; ++k) {
        const double t = th + 2.0 * kPi * double(k) / double(g.q);
        const Complex w{r * std::cos(t), r * std::sin(t)};
        const double ang = std::abs(std::arg((w / std::abs(w)) / g.directions[size_t(dir_index)]));
        if (ang < best_ang) {
            best_ang = ang;
            best = w;
        }
    }
    return horner(g.h, best);
}

double germ_u_stop(const ParabolicGerm& g, double tol) {
    const double K = 10.0 * (1.0 + std::abs(g.beta) + std::abs(g.gamma) + std::abs(g.delta) +
                             std::abs(g.s_coef) + std::abs(g.t_coef));
    double u = std::cbrt(K / std::max(tol, 1e-14));
    // Orbit rounding accumulates like u^2 * eps, so iterating deeper than
    // about 1.2e3 loses more than the asymptotic expansion gains.
    u = std::min(u, 1200.0);
    return std::max(u, g.sector_min + 10.0);
}

}  // namespace cantorlocus

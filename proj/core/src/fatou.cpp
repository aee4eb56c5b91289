#include "cantorlocus/fatou.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cantorlocus {

namespace {

int rep_in_range(int value_mod_q, int lo, int q) {
    // Representative of value_mod_q (already in [0,q)) in {lo, ..., lo+q-1}.
    int r = value_mod_q;
    while (r < lo) r += q;
    return r;
}

}  // namespace

int twig_threshold_index(int j, const PQ& pq) {
    const int m = pq.mod(long(j) * pq.p_inverse());
    return rep_in_range(m, 2, pq.q);  // in {2, ..., q+1}
}

int model_truncation_index(int j, const PQ& pq) {
    const int m = pq.mod(long(j) * pq.p_inverse());
    return rep_in_range(m, 2, pq.q);
}

int slit_strip_index(int j, const PQ& pq) {
    return pq.mod(long(j - pq.p) * pq.p_inverse());
}

int conjugacy_petal_offset(int j, int j_prime, const PQ& pq) {
    return pq.mod(long(j - j_prime) * pq.p_inverse());
}

namespace {

// Shared driver for parabolic dynamics in a fixed chart. `steps_per_return`
// is the number of single map steps per application of the germ's return map
// (q for root-of-unity eigenvalues, 1 for G_T).
struct Flow {
    Representative rep;
    bool w_chart = false;
    const ParabolicGerm* germ = nullptr;
    int steps_per_return = 1;
    double escape = 0.0;  // z-chart escape radius (P only)
    long depth = 200000;
};

std::optional<Complex> flow_coord(const Flow& f, const SpherePoint& p) {
    if (!f.w_chart) {
        if (p.at_inf) return std::nullopt;
        return p.z;
    }
    if (p.at_inf) return Complex{0.0, 0.0};
    if (std::abs(p.z) < 1e-300) return std::nullopt;
    return 1.0 / p.z;
}

struct Landing {
    long n = 0;       // single steps to the first trap entry
    int dir = -1;     // germ direction index of the trap
    Complex value{};  // canonical germ Fatou value of the landed point
    bool exact_hit = false;
};

// Canonical Fatou value of a point already inside the trap.
Complex settle_value(const Flow& f, SpherePoint pt, double tol) {
    const ParabolicGerm& g = *f.germ;
    const double u_stop = germ_u_stop(g, tol);
    long m = 0;
    for (int guard = 0; guard < 200; ++guard) {
        const auto c = flow_coord(f, pt);
        if (!c) fail(Err::NoConvergence, "trap orbit left the chart");
        const Complex u = germ_u(g, *c);
        if (u.real() >= u_stop) return germ_phi_u(g, u) - double(m);
        long skip = std::max(1L, long(u_stop - u.real()) - 2);
        skip = std::min(skip, 4000L);
        for (long i = 0; i < skip * f.steps_per_return; ++i) pt = f.rep.step(pt);
        m += skip;
    }
    fail(Err::NoConvergence, "trap orbit did not reach the evaluation zone");
}

Landing para_land(const Flow& f, SpherePoint pt, int required_dir, double tol) {
    const ParabolicGerm& g = *f.germ;
    SpherePoint prev = pt;
    int stall = 0;
    for (long n = 0; n <= f.depth; ++n) {
        const auto c = flow_coord(f, pt);
        if (c && std::abs(*c) < 1e-13) return {n, -1, Complex{0.0, 0.0}, true};
        if (f.w_chart && pt.at_inf) return {n, -1, Complex{0.0, 0.0}, true};
        if (!f.w_chart && pt.at_inf) fail(Err::NotInBasin, "orbit left the plane");
        if (c && std::abs(*c) < g.r_switch) {
            const int k = germ_direction_index(g, *c);
            if (k >= 0 && (required_dir < 0 || k == required_dir)) {
                const Complex u = germ_u(g, *c);
                if (std::isfinite(u.real()) && u.real() > g.sector_min)
                    return {n, k, settle_value(f, pt, tol), false};
            }
        }
        if (!f.w_chart && f.escape > 0.0 && c && std::abs(*c) > f.escape)
            fail(Err::NotInBasin, "orbit escapes");
        pt = f.rep.step(pt);
        if (sphere_dist(pt, prev) < 1e-15) {
            if (++stall > 16) fail(Err::NotInBasin, "orbit converges away from the parabolic point");
        } else {
            stall = 0;
        }
        prev = pt;
    }
    fail(Err::DepthExceeded, "orbit did not land in a petal trap");
}

Flow atlas_flow(const FatouAtlas& a) {
    Flow f;
    f.rep = a.poly;
    f.w_chart = false;
    f.germ = &a.germ;
    f.steps_per_return = a.pq.q;
    f.escape = 3.0;
    f.depth = a.depth_limit;
    return f;
}

Complex fatou_eval(const FatouAtlas& a, Complex x, double tol) {
    const Landing l = para_land(atlas_flow(a), SpherePoint::of(x), a.dir0, tol);
    if (l.exact_hit) fail(Err::PrefixedToZero, "orbit hits the parabolic point exactly");
    return l.value - double(l.n) / double(a.pq.q) - a.base;
}

// Newton solve of phi(z) = target from a seed, forward evaluations only.
Complex newton_phi(const FatouAtlas& a, Complex target, Complex seed, double tol_eval,
                   double tol_res) {
    Complex z = seed;
    for (int it = 0; it < 30; ++it) {
        Complex v, v2;
        const double h = 1e-6 * std::max(1e-3, std::abs(z));
        try {
            v = fatou_eval(a, z, tol_eval);
            if (std::abs(v - target) < tol_res) return z;
            v2 = fatou_eval(a, z + h, tol_eval);
        } catch (const CantorError&) {
            fail(Err::BranchAmbiguous, "lift stepped outside the basin");
        }
        const Complex d = (v2 - v) / h;
        if (std::abs(d) < 1e-10) fail(Err::BranchAmbiguous, "lift hit a critical point of phi");
        Complex step = (v - target) / d;
        const double cap = 0.35 * std::max(1e-4, std::abs(z)) + 1e-3;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        z -= step;
    }
    fail(Err::NoConvergence, "lift Newton did not converge");
}

bool in_trap_of_dir(const ParabolicGerm& g, Complex coord, int dir) {
    if (std::abs(coord) >= g.r_switch) return false;
    if (germ_direction_index(g, coord) != dir) return false;
    const Complex u = germ_u(g, coord);
    return std::isfinite(u.real()) && u.real() > g.sector_min;
}

// March the lift of phi = y0 + t + i*tilt*min(t,1) from a seed for the first
// node out to t = T; the path stays in one basin component. The tilt ramp
// moves the path off the real axis, where every critical value of phi sits.
Complex lift_march(const FatouAtlas& a, Complex first_seed, Complex y0, double T,
                   double tilt) {
    Complex z = first_seed;
    double t = 0.0;
    const double dt = 0.25;
    while (t < T) {
        const double tn = std::min(T, t + dt);
        const Complex target = y0 + tn + Complex{0.0, tilt * std::min(tn, 1.0)};
        z = newton_phi(a, target, z, 1e-6, 1e-6 * (1.0 + std::abs(target)));
        t = tn;
    }
    return z;
}

// Starting seeds for the first lift node. At a critical point of phi (a fork
// of the real-phi tree) the derivative vanishes and Newton needs the local
// quadratic model; both forks belong to the component.
std::vector<Complex> lift_seeds(const FatouAtlas& a, Complex x, Complex y0, Complex target1) {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    try {
        const Complex vp = fatou_eval(a, x + h, 1e-6);
        const Complex d1 = (vp - y0) / h;
        if (std::abs(d1) < 0.05) {
            const Complex vm = fatou_eval(a, x - h, 1e-6);
            const Complex second = (vp + vm - 2.0 * y0) / (h * h);
            if (std::abs(second) > 1e-6) {
                const Complex root = std::sqrt((target1 - y0) * 2.0 / second);
                return {x + root, x - root};
            }
        }
    } catch (const CantorError&) {
    }
    return {x};
}

// True if the trap of the given direction is reachable by lifting from x.
bool trap_walk(const FatouAtlas& a, Complex x, Complex y0, int dir) {
    const double ab = std::abs(a.germ.beta);
    const double target_re =
        a.germ.sector_min + 8.0 + ab * std::log(a.germ.sector_min + 10.0);
    const double T = std::max(1.0, target_re - (y0 + a.base).real());
    const bool on_tree = std::abs(y0.imag()) < 1e-6;
    const std::vector<double> tilts = on_tree ? std::vector<double>{0.05, -0.05}
                                              : std::vector<double>{0.0, 0.05};
    for (const double tilt : tilts) {
        const Complex target1 = y0 + 0.25 + Complex{0.0, tilt * 0.25};
        for (const Complex seed : lift_seeds(a, x, y0, target1)) {
            try {
                const Complex zT = lift_march(a, seed, y0, T, tilt);
                if (in_trap_of_dir(a.germ, zT, dir)) return true;
            } catch (const CantorError&) {
            }
        }
    }
    return false;
}

}  // namespace

FatouAtlas build_atlas(const PQ& pq, double tol, long depth_limit) {
    FatouAtlas a;
    a.pq = pq;
    a.omega = pq.omega();
    a.poly = Representative::polynomial(a.omega);
    a.tol = tol;
    a.depth_limit = depth_limit;

    const int D = 5 * pq.q + 2;
    Series one(size_t(D) + 1, Complex{0.0, 0.0});
    one[1] = a.omega;
    one[2] = 1.0;
    a.germ = build_germ(iterate_jet(one, pq.q, D));
    if (a.germ.q != pq.q) fail(Err::InvalidArgument, "petal count does not match q");

    const Complex crit = -a.omega / 2.0;
    const Flow f = atlas_flow(a);
    const Landing l0 = para_land(f, SpherePoint::of(crit), -1, 1e-6);
    a.dir0 = a.pq.mod(long(l0.dir) - l0.n * pq.p);
    const Landing lb = para_land(f, SpherePoint::of(crit), a.dir0, tol);
    a.base = lb.value - double(lb.n) / double(pq.q);

    a.petal_directions.resize(size_t(pq.q));
    for (int j = 0; j < pq.q; ++j)
        a.petal_directions[size_t(j)] = a.germ.directions[size_t((a.dir0 + j) % pq.q)];
    return a;
}

Complex fatou_value(const FatouAtlas& atlas, Complex x) {
    return fatou_eval(atlas, x, atlas.tol);
}

int virtual_petal_index(const FatouAtlas& atlas, Complex x) {
    const Landing l = para_land(atlas_flow(atlas), SpherePoint::of(x), -1, 1e-6);
    if (l.exact_hit) fail(Err::PrefixedToZero, "petal label undefined on preimages of 0");
    return atlas.pq.mod(long(l.dir - atlas.dir0) - l.n * atlas.pq.p);
}

int petal_index(const FatouAtlas& atlas, Complex x) {
    const Landing l = para_land(atlas_flow(atlas), SpherePoint::of(x), -1, 1e-6);
    if (l.exact_hit) fail(Err::NotInImmediateBasin, "preimages of 0 are not interior points");
    const int jv = atlas.pq.mod(long(l.dir - atlas.dir0) - l.n * atlas.pq.p);
    if (l.n == 0) return jv;  // already in a trap

    // Only immediate components reach a petal trap by the horizontal lift.
    const Complex y0 = fatou_eval(atlas, x, 1e-6);
    const int dir = (atlas.dir0 + jv) % atlas.pq.q;
    if (trap_walk(atlas, x, y0, dir)) return jv;

    // The walk can die on side arms of the real-phi tree. The deck symmetry
    // s(z) = -z - omega fixes phi (phi o s = phi) and maps components to
    // components with s(B^0) = B^0; s(B^j) for j != 0 are exactly the
    // first-generation preimage components. So a successful walk from s(x)
    // resolves x: petal 0 means x was immediate after all.
    const Complex sx = -x - atlas.omega;
    try {
        const Landing ls = para_land(atlas_flow(atlas), SpherePoint::of(sx), -1, 1e-6);
        if (!ls.exact_hit) {
            const int js =
                atlas.pq.mod(long(ls.dir - atlas.dir0) - ls.n * atlas.pq.p);
            const int dir_s = (atlas.dir0 + js) % atlas.pq.q;
            const bool s_immediate =
                (ls.n == 0) || trap_walk(atlas, sx, fatou_eval(atlas, sx, 1e-6), dir_s);
            if (s_immediate) {
                if (js == 0) return jv;  // x in s(B^0) = B^0
                fail(Err::NotInImmediateBasin,
                     "point lies in a first-generation preimage component");
            }
        }
    } catch (const CantorError& e) {
        if (e.code() == Err::NotInImmediateBasin) throw;
    }
    // Neither x nor s(x) certified: generation >= 2 when the walks are
    // reliable (off the tree), otherwise undecidable.
    if (std::abs(y0.imag()) >= 1e-6)
        fail(Err::NotInImmediateBasin, "component hangs off a preimage of 0");
    fail(Err::Undecidable, "real-axis point off the principal spine");
}

bool in_xi(const FatouAtlas& atlas, Complex x, double M) {
    if (M <= 1.0 / double(atlas.pq.q * atlas.pq.q))
        fail(Err::InvalidArgument, "M must exceed 1/q^2");
    try {
        const Complex v = fatou_value(atlas, x);
        return std::abs(v.imag()) < 0.5 * M;
    } catch (const CantorError& e) {
        if (e.code() == Err::PrefixedToZero) return true;
        if (e.code() == Err::NotInBasin) return false;
        if (e.code() == Err::DepthExceeded)
            fail(Err::Undecidable, "point too close to the basin boundary");
        throw;
    }
}

bool in_truncated_twig(const FatouAtlas& atlas, Complex x) {
    if (std::abs(x) < 1e-13) return true;  // every branch contains 0
    const int j = petal_index(atlas, x);
    const Complex v = fatou_value(atlas, x);
    const double tol = 1e-8;
    if (std::abs(v.imag()) > tol) return false;
    const double threshold = double(twig_threshold_index(j, atlas.pq)) / double(atlas.pq.q);
    return v.real() >= threshold - tol;
}

SectorVerdict in_sector_p(const FatouAtlas& atlas, Complex x, SectorScope scope) {
    try {
        const int j = petal_index(atlas, x);
        return (j == atlas.pq.p) ? SectorVerdict::InBp : SectorVerdict::NotInSp;
    } catch (const CantorError& e) {
        if (e.code() != Err::NotInImmediateBasin) throw;
    }
    if (scope == SectorScope::ImmediateOnly) return SectorVerdict::OutOfScope;
    // First-generation components are the deck-symmetry images s(B^j),
    // s(z) = -z - omega; they attach at -omega, inside the closure of S^0.
    try {
        (void)petal_index(atlas, -x - atlas.omega);
        return (atlas.pq.p % atlas.pq.q == 0) ? SectorVerdict::InSpNotBp
                                              : SectorVerdict::NotInSp;
    } catch (const CantorError& e) {
        if (e.code() == Err::NotInImmediateBasin) return SectorVerdict::OutOfScope;
        throw;
    }
}

Complex point_from_fatou_value(const FatouAtlas& atlas, int petal, Complex y) {
    if (petal < 0 || petal >= atlas.pq.q) fail(Err::InvalidArgument, "petal out of range");
    const int dir = (atlas.dir0 + petal) % atlas.pq.q;
    const ParabolicGerm& g = atlas.germ;
    const double ab = std::abs(g.beta);
    const double deep_re = g.sector_min + 10.0 + ab * std::log(g.sector_min + 10.0);

    const Complex y_raw = y + atlas.base;
    const double need = deep_re - y_raw.real();
    const double m = (need > 0.0) ? std::ceil(need) : 0.0;

    // Seed on the right sheet from the asymptotic inverse; its O(u^-3)
    // formula error is far below the injectivity scale.
    const Complex u = germ_phi_u_inverse(g, y_raw + m);
    Complex z = germ_point_from_u(g, u, dir);
    z = newton_phi(atlas, y + m, z, 1e-8, 1e-9);
    if (m > 0.0) {
        // March the target back down inside the component.
        double t = m;
        while (t > 0.0) {
            const double tn = std::max(0.0, t - 0.25);
            z = newton_phi(atlas, y + tn, z, 1e-8, 1e-8);
            t = tn;
        }
    }
    z = newton_phi(atlas, y, z, atlas.tol, 10.0 * atlas.tol * (1.0 + std::abs(y)));
    return z;
}

std::vector<XiSample> sample_xi_star(const FatouAtlas& atlas, double M, int n,
                                     SectorFilter filter, unsigned long seed) {
    if (M <= 1.0 / double(atlas.pq.q * atlas.pq.q))
        fail(Err::InvalidArgument, "M must exceed 1/q^2");
    std::vector<int> petals;
    for (int j = 0; j < atlas.pq.q; ++j) {
        if (filter == SectorFilter::InBp && j != atlas.pq.p) continue;
        if (filter == SectorFilter::NotInSp && j == atlas.pq.p) continue;
        petals.push_back(j);
    }
    if (petals.empty()) fail(Err::InvalidArgument, "filter excludes every petal");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re_dist(0.7, 2.7);
    std::uniform_real_distribution<double> im_dist(0.05, 0.45);
    std::bernoulli_distribution sign_dist(0.5);

    std::vector<XiSample> out;
    out.reserve(size_t(n));
    for (int i = 0; i < n; ++i) {
        const int j = petals[size_t(i) % petals.size()];
        const double im = im_dist(rng) * M * (sign_dist(rng) ? 1.0 : -1.0);
        const Complex y{re_dist(rng), im};
        XiSample s;
        s.petal = j;
        s.phi = y;
        s.z = point_from_fatou_value(atlas, j, y);
        out.push_back(s);
    }
    return out;
}

// ------------------------------------------------------------------

namespace {

Series w_chart_one_step_jet(Complex lambda, Complex A, int D) {
    // F(w) = lambda w / (1 + A w + w^2).
    Series s(size_t(D) + 1, Complex{0.0, 0.0});
    s[1] = A;
    s[2] = 1.0;
    const Series recip = series_reciprocal_one_plus(s, D);
    Series one(size_t(D) + 1, Complex{0.0, 0.0});
    for (int i = 1; i <= D; ++i) one[size_t(i)] = lambda * recip[size_t(i - 1)];
    return one;
}

Flow chart_flow(const ParabolicChart& c) {
    Flow f;
    f.rep = c.rep;
    f.w_chart = true;
    f.germ = &c.germ;
    f.steps_per_return = c.pq.q;
    f.depth = c.depth_limit;
    return f;
}

}  // namespace

ParabolicChart build_parabolic_chart(const PQ& pq, Complex A, double tol, long depth_limit) {
    ParabolicChart c;
    c.pq = pq;
    c.rep = Representative::rational(pq.omega(), A);
    c.tol = tol;
    c.depth_limit = depth_limit;
    const int D = 5 * pq.q + 2;
    c.germ = build_germ(iterate_jet(w_chart_one_step_jet(pq.omega(), A, D), pq.q, D));
    if (c.germ.q != pq.q) fail(Err::InvalidArgument, "petal count does not match q");
    const Landing l = para_land(chart_flow(c), SpherePoint::of(Complex{1.0, 0.0}), -1, 1e-6);
    if (l.exact_hit) fail(Err::CriticalNotInBasin, "critical orbit prefixed to the parabolic point");
    c.anchor_dir = l.dir;
    return c;
}

Complex parabolic_fatou_value(const ParabolicChart& chart, const SpherePoint& z) {
    const Landing l = para_land(chart_flow(chart), z, chart.anchor_dir, chart.tol);
    if (l.exact_hit) fail(Err::PrefixedToZero, "orbit hits the parabolic point exactly");
    return l.value - double(l.n) / double(chart.pq.q);
}

int parabolic_landing_dir(const ParabolicChart& chart, const SpherePoint& z) {
    const Landing l = para_land(chart_flow(chart), z, -1, 1e-6);
    if (l.exact_hit) fail(Err::PrefixedToZero, "no landing petal for exact hits");
    return l.dir;
}

SpherePoint parabolic_point_from_value(const ParabolicChart& chart, Complex value, int dir) {
    const ParabolicGerm& g = chart.germ;
    const double ab = std::abs(g.beta);
    const double deep_re = g.sector_min + 10.0 + ab * std::log(g.sector_min + 10.0);
    const double need = deep_re - value.real();
    const double m = (need > 0.0) ? std::ceil(need) : 0.0;

    auto eval_w = [&](Complex w) {
        return parabolic_fatou_value(chart,
                                     std::abs(w) < 1e-300 ? SpherePoint::infinity()
                                                          : SpherePoint::of(1.0 / w));
    };
    auto newton_w = [&](Complex target, Complex seed, double tol_res) {
        Complex w = seed;
        for (int it = 0; it < 30; ++it) {
            Complex v, v2;
            const double h = 1e-7 * std::max(1e-5, std::abs(w));
            try {
                v = eval_w(w);
                if (std::abs(v - target) < tol_res) return w;
                v2 = eval_w(w + h);
            } catch (const CantorError&) {
                fail(Err::BranchAmbiguous, "inverse lift left the basin");
            }
            const Complex d = (v2 - v) / h;
            if (std::abs(d) < 1e-10) fail(Err::BranchAmbiguous, "inverse lift hit a branch point");
            Complex step = (v - target) / d;
            const double cap = 0.35 * std::max(1e-5, std::abs(w)) + 1e-4;
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            w -= step;
        }
        fail(Err::NoConvergence, "inverse lift Newton did not converge");
    };

    const Complex u = germ_phi_u_inverse(g, value + m);
    Complex w = germ_point_from_u(g, u, dir);
    w = newton_w(value + m, w, 1e-9);
    double t = m;
    while (t > 0.0) {
        const double tn = std::max(0.0, t - 0.25);
        w = newton_w(value + tn, w, 1e-8);
        t = tn;
    }
    w = newton_w(value, w, 10.0 * chart.tol * (1.0 + std::abs(value)));
    return std::abs(w) < 1e-300 ? SpherePoint::infinity() : SpherePoint::of(1.0 / w);
}

Relatedness classify_parabolic_relatedness(const PQ& pq, Complex A, long max_iter) {
    ParabolicChart c;
    try {
        c = build_parabolic_chart(pq, A, 1e-6, max_iter);
    } catch (const CantorError& e) {
        if (e.code() == Err::CriticalNotInBasin) {
            // The +1 orbit hits the parabolic point exactly: prefixed counts
            // as converged; classify the other critical orbit alone.
            c.pq = pq;
            c.rep = Representative::rational(pq.omega(), A);
            c.depth_limit = max_iter;
            const int D = 5 * pq.q + 2;
            c.germ = build_germ(iterate_jet(w_chart_one_step_jet(pq.omega(), A, D), pq.q, D));
            c.anchor_dir = 0;
        } else {
            throw;
        }
    }
    Flow f = chart_flow(c);
    f.depth = max_iter;
    for (const Complex crit : {Complex{1.0, 0.0}, Complex{-1.0, 0.0}}) {
        try {
            (void)para_land(f, SpherePoint::of(crit), -1, 1e-4);
        } catch (const CantorError& e) {
            if (e.code() == Err::NotInBasin) return Relatedness::NotInR;
            if (e.code() == Err::DepthExceeded) return Relatedness::Undecided;
            throw;
        }
    }
    return Relatedness::InR;
}

GTBasinInfo gt_basin_info(Complex T, Complex z, long depth_limit) {
    const int D = 12;
    const ParabolicGerm germ = build_germ(w_chart_one_step_jet(Complex{1.0, 0.0}, T, D));
    Flow f;
    f.rep = Representative::parabolic(T);
    f.w_chart = true;
    f.germ = &germ;
    f.steps_per_return = 1;
    f.depth = depth_limit;

    Landing l;
    try {
        l = para_land(f, SpherePoint::of(z), -1, 1e-6);
    } catch (const CantorError&) {
        return {false, -1};
    }
    if (l.exact_hit) return {false, -1};  // prefixed, not interior
    if (l.n == 0) return {true, l.dir};

    // Anchored value function for the lift.
    auto eval_z = [&](Complex zz, double tol) {
        const Landing ll = para_land(f, SpherePoint::of(zz), l.dir, tol);
        if (ll.exact_hit) fail(Err::PrefixedToZero, "exact hit");
        return ll.value - double(ll.n);
    };
    auto newton_z = [&](Complex target, Complex seed) {
        Complex zz = seed;
        for (int it = 0; it < 30; ++it) {
            Complex v, v2;
            const double h = 1e-6 * std::max(1e-3, std::abs(zz));
            v = eval_z(zz, 1e-6);
            if (std::abs(v - target) < 1e-6 * (1.0 + std::abs(target))) return zz;
            v2 = eval_z(zz + h, 1e-6);
            const Complex d = (v2 - v) / h;
            if (std::abs(d) < 1e-10) fail(Err::BranchAmbiguous, "lift hit a branch point");
            Complex step = (v - target) / d;
            const double cap = 0.35 * std::max(1e-3, std::abs(zz)) + 1e-2;
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            zz -= step;
        }
        fail(Err::NoConvergence, "lift Newton did not converge");
    };

    Complex y0;
    try {
        y0 = eval_z(z, 1e-6);
    } catch (const CantorError&) {
        return {false, -1};
    }
    const double target_re =
        germ.sector_min + 8.0 + std::abs(germ.beta) * std::log(germ.sector_min + 10.0);
    const double Tlift = std::max(1.0, target_re - y0.real());
    const double tilt = (std::abs(y0.imag()) < 1e-6) ? 0.05 : 0.0;
    Complex cur = z;
    double t = 0.0;
    try {
        while (t < Tlift) {
            const double tn = std::min(Tlift, t + 0.25);
            cur = newton_z(y0 + tn + Complex{0.0, tilt * std::min(tn, 1.0)}, cur);
            t = tn;
        }
    } catch (const CantorError&) {
        return {false, -1};
    }
    const Complex w = (std::abs(cur) < 1e-300) ? Complex{1e308, 0.0} : 1.0 / cur;
    if (in_trap_of_dir(germ, w, l.dir)) return {true, l.dir};
    return {false, l.dir};
}

}  // namespace cantorlocus

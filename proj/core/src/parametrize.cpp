#include "cantorlocus/parametrize.hpp"

#include <algorithm>
#include <cmath>

namespace cantorlocus {

namespace {

constexpr double kTieTol = 1e-9;

Complex involute(Complex w, Complex lambda) { return lambda * lambda / w; }

}  // namespace

ModelPoint make_model_point(Complex w, Complex lambda) {
    const double al = std::abs(lambda);
    const double aw = std::abs(w);
    if (aw == 0.0) fail(Err::InvalidArgument, "model point needs a nonzero value");
    ModelPoint mp{w, lambda, true};
    if (aw < al * (1.0 - 1e-12)) {
        mp.w = involute(w, lambda);
    } else if (aw <= al * (1.0 + 1e-12)) {
        // Boundary circle: representative with Im(w/lambda) >= 0.
        if ((w / lambda).imag() < 0.0) mp.w = involute(w, lambda);
    }
    return mp;
}

double model_distance(const ModelPoint& a, const ModelPoint& b) {
    const double direct = std::abs(a.w - b.w);
    const double swapped = std::abs(a.w - involute(b.w, a.lambda));
    return std::min(direct, swapped);
}

Complex target_value(const FatouAtlas& atlas, const StarGeometry& geo, Complex x) {
    Complex phix;
    try {
        phix = fatou_value(atlas, x);
    } catch (const CantorError& e) {
        if (e.code() == Err::PrefixedToZero) return Complex{0.0, 0.0};
        if (e.code() == Err::NotInBasin || e.code() == Err::DepthExceeded)
            fail(Err::NotInXiStar, "point is not in the basin");
        throw;
    }
    if (std::abs(phix.imag()) >= 0.5 * geo.m)
        fail(Err::NotInXiStar, "point leaves the strip of the geometry");
    const int j = virtual_petal_index(atlas, x);
    // Reject the twig and the critical value, where the target degenerates.
    if (std::abs(phix.imag()) < 1e-9) {
        const double threshold =
            double(twig_threshold_index(j, atlas.pq)) / double(atlas.pq.q);
        if (phix.real() >= threshold - 1e-9)
            fail(Err::NotInXiStar, "point lies on the truncated twig");
        if (std::abs(phix - Complex{1.0 / double(atlas.pq.q), 0.0}) < 1e-9 &&
            j == atlas.pq.p)
            fail(Err::NotInXiStar, "point is the critical value");
    }
    const Complex phase{0.0, 2.0 * kPi * double(j) / double(atlas.pq.q)};
    return std::exp(geo.L * phix + phase);
}

ModelPoint chi(const Representative& rep, const KoenigsChart& chart) {
    const auto crits = rep.critical_points();
    const SpherePoint c2 = crits[size_t(2 - chart.critical_index)];
    const Complex v2_value = rep.lambda * koenigs_value(chart, c2);
    return make_model_point(v2_value, rep.lambda);
}

ModelPoint chi(const MapClass& cls) {
    const Representative rep = representative_from_sigma(cls);
    if (classify_relatedness(rep) != Relatedness::InR)
        fail(Err::NotInR, "chi is defined on the relatedness locus only");
    const KoenigsChart chart = build_chart(rep, WhichCritical::First);
    return chi(rep, chart);
}

namespace {

struct TargetEval {
    Complex F;          // value - w_x
    Complex F_alt;      // value - lambda^2/w_x
    Complex value;      // phi(v2)
    bool ok = false;
};

TargetEval eval_target(Complex lambda, Complex A, Complex w_x) {
    TargetEval t;
    try {
        const Representative rep = Representative::rational(lambda, A);
        const KoenigsChart chart = build_chart(rep, WhichCritical::First);
        const Complex phi_c2 = koenigs_value(chart, SpherePoint::of(Complex{-1.0, 0.0}));
        t.value = lambda * phi_c2;  // phi(v2) by the functional equation
        t.F = t.value - w_x;
        t.F_alt = (std::abs(w_x) > 0.0)
                      ? t.value - lambda * lambda / w_x
                      : t.F;
        t.ok = true;
    } catch (const CantorError&) {
        t.ok = false;
    }
    return t;
}

}  // namespace

namespace {

// The defining condition is pointwise: the transferred point of x is the
// critical value G(-1) itself, not merely a basin point sharing its
// linearizer value (decoration copies of the fiber admit spurious
// value-matched sigma). Verify the matched fiber point by the strip lift.
bool verify_branch(const FatouAtlas& atlas, const StarGeometry& geo, Complex A,
                   Complex log_target, bool* involuted) {
    const Complex lambda = geo.lambda;
    try {
        const Representative rep = Representative::rational(lambda, A);
        const KoenigsChart chart = build_chart(rep, WhichCritical::First);
        const SpherePoint v2 = rep.step(SpherePoint::of(Complex{-1.0, 0.0}));
        const double scale = std::max(1.0, std::abs(v2.z));
        const SpherePoint direct =
            koenigs_inverse(chart, std::exp(log_target), strip_branch_hint(geo, log_target));
        if (!v2.at_inf && !direct.at_inf && std::abs(direct.z - v2.z) < 1e-5 * scale) {
            *involuted = false;
            return true;
        }
        // Swapped normalization: the involuted log-target.
        const Complex log_lambda = (geo.L + Complex{0.0, 2.0 * kPi * double(geo.pq.p)}) /
                                   double(geo.pq.q);
        const Complex log_inv = 2.0 * log_lambda - log_target;
        const SpherePoint other =
            koenigs_inverse(chart, std::exp(log_inv), strip_branch_hint(geo, log_inv));
        if (!v2.at_inf && !other.at_inf && std::abs(other.z - v2.z) < 1e-5 * scale) {
            *involuted = true;
            return true;
        }
    } catch (const CantorError&) {
    }
    return false;
}

}  // namespace

PhiSolve solve_phi(const FatouAtlas& atlas, const StarGeometry& geo, Complex x,
                   std::optional<Complex> seed_A, double tol) {
    const Complex lambda = geo.lambda;
    const Complex w_x = target_value(atlas, geo, x);
    // Log-form of the target (pins the strip the transferred point lives in).
    const Complex phix = fatou_value(atlas, x);
    const int jx = virtual_petal_index(atlas, x);
    const Complex log_target =
        geo.L * phix + Complex{0.0, 2.0 * kPi * double(jx) / double(atlas.pq.q)};

    PhiSolve out;
    out.x = x;
    out.lambda = lambda;
    out.w_x = w_x;
    out.seed_source = seed_A ? PhiSolve::Seed::Continuation : PhiSolve::Seed::GridScan;

    auto run_newton = [&](Complex A0, int max_iter, PhiSolve& result) -> bool {
        Complex A = A0;
        TargetEval cur = eval_target(lambda, A, w_x);
        if (!cur.ok) return false;
        for (int it = 0; it < max_iter; ++it) {
            const double r_main = std::abs(cur.F);
            const double r_alt = std::abs(cur.F_alt);
            if (std::min(r_main, r_alt) < tol) {
                result.A = A;
                result.sigma = Representative::rational(lambda, A).sigma();
                result.involuted_branch = (r_alt < r_main);
                result.residual = std::min(r_main, r_alt);
                result.newton_iters = it;
                return true;
            }
            const double h = 1e-6 * std::max(1.0, std::abs(A));
            const TargetEval bumped = eval_target(lambda, A + h, w_x);
            if (!bumped.ok) return false;
            const Complex deriv = (bumped.F - cur.F) / h;
            if (std::abs(deriv) < 1e-14) return false;
            Complex step = cur.F / deriv;
            // Backtrack into evaluable territory and toward decrease.
            bool advanced = false;
            for (int half = 0; half < 8; ++half) {
                const TargetEval trial = eval_target(lambda, A - step, w_x);
                if (trial.ok &&
                    std::min(std::abs(trial.F), std::abs(trial.F_alt)) <
                        4.0 * std::min(r_main, r_alt)) {
                    A -= step;
                    cur = trial;
                    advanced = true;
                    break;
                }
                step *= 0.5;
            }
            if (!advanced) return false;
        }
        return false;
    };

    auto solve_and_verify = [&](Complex A0) -> bool {
        PhiSolve trial = out;
        if (!run_newton(A0, 40, trial)) return false;
        bool involuted = false;
        if (!verify_branch(atlas, geo, trial.A, log_target, &involuted)) return false;
        out = trial;
        out.involuted_branch = involuted;
        return true;
    };

    bool solved = false;
    if (seed_A) {
        solved = solve_and_verify(*seed_A);
        if (!solved) solved = solve_and_verify(-*seed_A);
    }
    if (!solved) {
        // Cold start: asymptotic seeds for targets near the puncture value
        // lambda (phi(v2) = lambda(1 - 4/A) + O(A^-2) as A -> infinity), then
        // a coarse grid scan over the A-disk, best scores first.
        struct Cand {
            double score;
            Complex A;
        };
        std::vector<Cand> cands;
        if (std::abs(w_x - lambda) > 0.0) {
            const Complex Aasy = -4.0 * lambda / (w_x - lambda);
            if (std::abs(Aasy) > 6.0) cands.push_back({0.0, Aasy});
        }
        const Complex w_inv = lambda * lambda / w_x;
        if (std::abs(w_x) > 0.0 && std::abs(w_inv - lambda) > 0.0) {
            const Complex Aasy = -4.0 * lambda / (w_inv - lambda);
            if (std::abs(Aasy) > 6.0) cands.push_back({0.0, Aasy});
        }
        const int N = 21;
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                const Complex A{-8.0 + 16.0 * double(i) / (N - 1),
                                -8.0 + 16.0 * double(j) / (N - 1)};
                if (A.real() < 0.0) continue;  // A and -A represent the same class
                const TargetEval t = eval_target(lambda, A, w_x);
                if (t.ok)
                    cands.push_back({std::min(std::abs(t.F), std::abs(t.F_alt)), A});
            }
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Cand& a, const Cand& b) { return a.score < b.score; });
        const size_t tries = std::min<size_t>(cands.size(), 12);
        for (size_t i = 0; i < tries && !solved; ++i) solved = solve_and_verify(cands[i].A);
        out.seed_source = PhiSolve::Seed::GridScan;
    }
    if (!solved) fail(Err::NoConvergence, "Newton did not reach the target point");

    // The solution must stay in the relatedness locus.
    const Representative rep = Representative::rational(lambda, out.A);
    if (classify_relatedness(rep) != Relatedness::InR)
        fail(Err::LeftR, "solution left the relatedness locus");

    // Record normalization ties (both critical values on the same circle).
    const KoenigsChart chart = build_chart(rep, WhichCritical::First);
    const Complex phi_c2 = koenigs_value(chart, SpherePoint::of(Complex{-1.0, 0.0}));
    out.normalization_tie = std::abs(std::abs(phi_c2) - 1.0) < kTieTol;
    return out;
}

bool in_conjugacy_domain(const FatouAtlas& atlas, const StarGeometry& geo, Complex x,
                         Complex z) {
    Complex phiz, phix;
    int jz, jx;
    try {
        phiz = fatou_value(atlas, z);
        jz = virtual_petal_index(atlas, z);
        phix = fatou_value(atlas, x);
        jx = virtual_petal_index(atlas, x);
    } catch (const CantorError&) {
        return false;
    }
    if (std::abs(phiz.imag()) >= 0.5 * geo.m) return false;
    const double tol = 1e-9;
    const int q = atlas.pq.q;
    // Slit along the backward critical orbit.
    const double k_off = double(slit_strip_index(jz, atlas.pq));
    if (std::abs(phiz.imag()) < tol &&
        phiz.real() <= 1.0 / q + k_off / q - 1.0 + tol)
        return false;
    // Slit along the backward orbit of x.
    const double h_off = double(conjugacy_petal_offset(jz, jx, atlas.pq));
    if (std::abs(phiz.imag() - phix.imag()) < tol &&
        phiz.real() <= phix.real() + h_off / q - 1.0 + tol)
        return false;
    return true;
}

SpherePoint conjugacy_value(const FatouAtlas& atlas, const StarGeometry& geo,
                            const PhiSolve& solve, Complex z) {
    const Representative rep = Representative::rational(solve.lambda, solve.A);
    if (std::abs(z - (-atlas.omega / 2.0)) < 1e-12)
        return SpherePoint::of(Complex{1.0, 0.0});  // critical point to critical point
    if (std::abs(z) < 1e-13) return rep.marked_fixed_point();

    Complex phiz;
    try {
        phiz = fatou_value(atlas, z);
    } catch (const CantorError& e) {
        if (e.code() == Err::PrefixedToZero)
            fail(Err::OutsideDomain, "proper preimages of 0 are not resolved by the value");
        throw;
    }
    if (!in_conjugacy_domain(atlas, geo, solve.x, z))
        fail(Err::OutsideDomain, "point outside the conjugacy domain");
    const int j = virtual_petal_index(atlas, z);
    const Complex log_target =
        geo.L * phiz + Complex{0.0, 2.0 * kPi * double(j) / double(atlas.pq.q)};
    const KoenigsChart chart = build_chart(rep, WhichCritical::First);
    return koenigs_inverse(chart, std::exp(log_target),
                           strip_branch_hint(geo, log_target));
}

}  // namespace cantorlocus

#pragma once

#include "cantorlocus/fatou.hpp"
#include "cantorlocus/linearize.hpp"
#include "cantorlocus/star.hpp"

namespace cantorlocus {

// Point of the model space: a linearizer value modulo the boundary
// involution w ~ lambda^2/w. The canonical representative has |w| >=
// |lambda|; on the boundary circle the one with Im(w/lambda) >= 0 wins.
struct ModelPoint {
    Complex w;
    Complex lambda;
    bool canonical = true;
};

ModelPoint make_model_point(Complex w, Complex lambda);
double model_distance(const ModelPoint& a, const ModelPoint& b);

struct PhiSolve {
    Complex x;
    Complex lambda;
    Complex sigma;
    Complex A;
    Complex w_x;             // target linearizer value
    double residual = 0.0;
    int newton_iters = 0;
    enum class Seed { GridScan, Continuation };
    Seed seed_source = Seed::GridScan;
    bool involuted_branch = false;   // matched lambda^2/w_x instead of w_x
    bool normalization_tie = false;  // |phi(c1)| = |phi(c2)| within tolerance
};

// Target value w_x = exp(L phi(x) + 2 pi i j/q) with j the petal label of x
// (virtual label for preimage components); preimages of 0 get w_x = 0.
// This is the linearizer value the transferred point of x must take.
Complex target_value(const FatouAtlas& atlas, const StarGeometry& geo, Complex x);

// chi(sigma): model point of the linearizer value of the second critical
// value. The normalization swap c1 <-> c2 moves the value by the involution,
// so the model point is well defined.
ModelPoint chi(const MapClass& cls);
ModelPoint chi(const Representative& rep, const KoenigsChart& chart);

// Newton solve (in A, finite-difference derivative) of
// phi_{lambda,sigma}(v2) = w_x with v2 = G_{lambda,A}(-1) under the
// phi(+1) = 1 normalization. Also accepts the involuted target.
PhiSolve solve_phi(const FatouAtlas& atlas, const StarGeometry& geo, Complex x,
                   std::optional<Complex> seed_A = std::nullopt, double tol = kSolveTol);

// Approximate membership in the conjugacy domain V_M(x): the strip
// |Im phi| < m/2 minus the two slit families around the critical orbit and
// around x, written as Fatou-coordinate inequalities.
bool in_conjugacy_domain(const FatouAtlas& atlas, const StarGeometry& geo, Complex x,
                         Complex z);

// Psi(z) = phi_{lambda,sigma}^{-1}(exp(L phi(z) + 2 pi i j(z)/q)), the
// transfer conjugating P to g_{lambda,sigma} on V_M(x).
SpherePoint conjugacy_value(const FatouAtlas& atlas, const StarGeometry& geo,
                            const PhiSolve& solve, Complex z);

}  // namespace cantorlocus

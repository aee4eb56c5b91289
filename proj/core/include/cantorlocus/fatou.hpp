#pragma once

#include <vector>

#include "cantorlocus/germ.hpp"
#include "cantorlocus/maps.hpp"

namespace cantorlocus {

// Index conventions used by the twig, the model-space truncation and the
// conjugacy domain. They look alike and are easy to confuse, so each gets
// its own function and pinned tests.
//
// Twig branch T^j starts at phi = twig_threshold_index(j)/q, where the index
// is the representative of j/p in Z_q taken in {2, ..., q+1}.
int twig_threshold_index(int j, const PQ& pq);
// Same formula, used to truncate the twig of the model space.
int model_truncation_index(int j, const PQ& pq);
// Slit offset of the strip paired with petal j: (j - p)/p in Z_q.
int slit_strip_index(int j, const PQ& pq);
// Petal offset (j - j')/p in Z_q entering the twice-slit domain around x.
int conjugacy_petal_offset(int j, int j_prime, const PQ& pq);

// Fatou coordinate atlas for P(z) = omega z + z^2, omega = e^{2 pi i p/q}:
// phi satisfies phi(P(x)) = phi(x) + 1/q on the parabolic basin of 0 and is
// normalized by phi(-omega/2) = 0.
struct FatouAtlas {
    PQ pq;
    Complex omega;
    Representative poly;                    // P as a Representative
    ParabolicGerm germ;                     // germ of P^q at 0
    std::vector<Complex> petal_directions;  // index j = direction of B^j
    int dir0 = 0;                           // germ direction index of B^0
    Complex base{0.0, 0.0};                 // raw value at -omega/2
    double tol = kFatouTol;
    long depth_limit = 200000;
};

FatouAtlas build_atlas(const PQ& pq, double tol = kFatouTol, long depth_limit = 200000);

// phi(x) for x in the parabolic basin. Errors: NotInBasin, DepthExceeded,
// PrefixedToZero (orbit hits 0 exactly, |P^n x| < 1e-13).
Complex fatou_value(const FatouAtlas& atlas, Complex x);

// Petal label of the trap the orbit of x first lands in, pulled back:
// agrees with the component index for immediate-basin points and is defined
// for every basin point. Cheap; no immediate-membership verification.
int virtual_petal_index(const FatouAtlas& atlas, Complex x);

// Component index j with x in B^j. Verifies immediate membership by lifting
// the horizontal path phi = phi(x) + t inside the component of x until it
// reaches a petal trap; components that hang off preimages of 0 never do.
// Errors: NotInImmediateBasin, plus fatou_value errors.
int petal_index(const FatouAtlas& atlas, Complex x);

// x in the basin with |Im phi(x)| < M/2, or a preimage of 0.
bool in_xi(const FatouAtlas& atlas, Complex x, double M);

// x in the truncated twig: x = 0, or x in B^j with phi(x) real (within tol)
// and phi(x) >= twig_threshold_index(j)/q.
bool in_truncated_twig(const FatouAtlas& atlas, Complex x);

enum class SectorScope { ImmediateOnly, OneStep };
enum class SectorVerdict { InBp, InSpNotBp, NotInSp, OutOfScope };

// Position of x relative to the critical-value sector S^p. ImmediateOnly
// resolves immediate-basin points. OneStep additionally recognizes
// first-generation preimage components through the deck symmetry
// s(z) = -z - omega (s(B^j) are exactly the non-immediate preimages of the
// B^{j+p}); those components all attach at -omega inside the closure of
// sector 0, so they lie in S^p only when p = 0 mod q, which cannot happen.
SectorVerdict in_sector_p(const FatouAtlas& atlas, Complex x, SectorScope scope);

struct XiSample {
    Complex z;
    Complex phi;
    int petal = 0;
};

enum class SectorFilter { Any, InBp, NotInSp };

// n points of Xi*_M = Xi_M minus the twig and the critical value, built by
// inverting phi into prescribed petals. Deterministic for a fixed seed.
std::vector<XiSample> sample_xi_star(const FatouAtlas& atlas, double M, int n,
                                     SectorFilter filter = SectorFilter::Any,
                                     unsigned long seed = 1);

// z in B^j with phi(z) = y (inverts the Fatou coordinate into one petal).
Complex point_from_fatou_value(const FatouAtlas& atlas, int petal, Complex y);

// ------------------------------------------------------------------
// Fatou machinery for the parabolic rational maps G_{omega,A} (fixed point
// at infinity with root-of-unity eigenvalue), used by the boundary-limit
// checks. Values are computed in the chart w = 1/z.
struct ParabolicChart {
    Representative rep;  // RationalG with lambda = omega_{p/q}
    PQ pq;
    ParabolicGerm germ;  // germ of the w-chart return map at 0
    int anchor_dir = 0;  // trap the orbit of the critical point +1 lands in
    double tol = kFatouTol;
    long depth_limit = 200000;
};

ParabolicChart build_parabolic_chart(const PQ& pq, Complex A, double tol = kFatouTol,
                                     long depth_limit = 200000);

// Fatou coordinate of G_{omega,A} at its parabolic point (raw normalization;
// callers pin additive offsets). Satisfies value(G(z)) = value(z) + 1/q.
Complex parabolic_fatou_value(const ParabolicChart& chart, const SpherePoint& z);

// Germ direction index of the petal the orbit of z lands in.
int parabolic_landing_dir(const ParabolicChart& chart, const SpherePoint& z);

// Point in the petal of germ direction `dir` with the given raw Fatou value
// (Re of the value must be large enough to invert in the petal).
SpherePoint parabolic_point_from_value(const ParabolicChart& chart, Complex value, int dir);

// Do both critical orbits of G_{omega,A} converge to the parabolic point at
// infinity (through petals or by an exact hit)?
Relatedness classify_parabolic_relatedness(const PQ& pq, Complex A,
                                           long max_iter = kDefaultDepth);

// Immediate-basin membership for the parabolic G_T at infinity via the same
// horizontal-lift test as petal_index (used by the rescaling-limit checks).
// T may be 0, in which case there are two petals and petal_dir tells them
// apart; for T != 0 the immediate basin is a single component.
struct GTBasinInfo {
    bool immediate = false;
    int petal_dir = -1;
};
GTBasinInfo gt_basin_info(Complex T, Complex z, long depth_limit = 200000);
inline bool gt_in_immediate_basin(Complex T, Complex z, long depth_limit = 200000) {
    return gt_basin_info(T, z, depth_limit).immediate;
}

}  // namespace cantorlocus

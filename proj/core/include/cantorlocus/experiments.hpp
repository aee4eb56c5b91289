#pragma once

#include <string>

#include "cantorlocus/parametrize.hpp"

namespace cantorlocus {

enum class SchedulePreset { Radial, Spiral, Tangential };

// Boundary approach lambda_k -> omega_{p/q}. Radial and Spiral are
// subhorocyclic; Tangential deliberately is not and must be flagged as a
// control run.
struct Schedule {
    SchedulePreset preset = SchedulePreset::Radial;
    int k0 = 5;
    int k1 = 60;
    double param = 0.5;
    bool control = false;

    Complex lambda_at(const PQ& pq, int k) const;
    std::vector<Complex> lambdas(const PQ& pq) const;
    bool subhorocyclic() const { return preset != SchedulePreset::Tangential; }
};

enum class Verdict { BoundedThm1, UnboundedThm2_Bp, UnboundedThm2_SpNotBp, Inconclusive };

const char* verdict_name(Verdict v);

struct ModulusCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    std::string case_tag;  // "1a", "1b", "2a", "2b"
};

struct WireLanding {
    std::vector<Complex> points;  // one per wire of the cycle
    int period = 0;               // 1 (fixed point) or q
    Complex eigenvalue;
};

struct SequenceStep {
    int k = 0;
    Complex lambda;
    Complex sigma;
    Complex A;
    double residual = 0.0;
    bool in_relatedness = false;
    std::optional<Complex> landing_eigenvalue;
    std::optional<int> landing_period;
    std::optional<double> r_landing;
    double r_lambda = 0.0;
    std::optional<ModulusCheck> modulus;
    std::string error;  // nonempty when the solve failed at this step
};

struct RescalingFit {
    Complex T;
    std::vector<Complex> T_k;
    std::vector<double> sup_error_trace;  // sup |G_k^q - G_T| on the test circle
    double stability = 0.0;               // |T| change when doubling test points
    std::vector<double> intermediate_min; // min |G_k^l| over the circle, 0 < l < q
};

struct SequenceReport {
    PQ pq{1, 2};
    Complex x;
    SectorVerdict x_sector = SectorVerdict::OutOfScope;
    double M = 1.0;
    Schedule schedule;
    std::vector<SequenceStep> steps;
    Verdict verdict = Verdict::Inconclusive;
    bool cauchy_tail_decreasing = false;
    std::optional<Complex> sigma_limit;
    bool sigma_limit_in_R = false;
    std::optional<RescalingFit> fit;
    std::vector<double> rho_gap;  // |rho_k - (1 - T^2)| on the unbounded branch
    std::string notes;
};

struct RunOptions {
    double solve_tol = kSolveTol;
    double divergence_cap = 1e6;
    int cauchy_window = 8;
    bool trace_wires = false;
    std::optional<SectorVerdict> declared_sector;  // overrides OutOfScope
};

// Solve sigma_k = Phi^{lambda_k}(x) along the schedule with continuation and
// classify the outcome.
SequenceReport run_sequence(const FatouAtlas& atlas, Complex x, const Schedule& schedule,
                            double M, const RunOptions& opts = {});

// Rescaling limit of the q-th iterates: T_k averaged over a 16-point test
// circle offset from the critical points, tail-extrapolated.
RescalingFit fit_rescaling_limit(const std::vector<std::pair<Complex, Complex>>& lambda_A,
                                 const PQ& pq, int circle_points = 16);

// Follow the wire of strip j toward the Julia set and snap the landing cycle.
WireLanding trace_wire_landing(const Representative& rep, const KoenigsChart& chart,
                               const StarGeometry& geo, long wire_index);

// The applicable modulus inequality for a landing of the given period.
ModulusCheck modulus_inequality_check(const StarGeometry& geo, Complex eigenvalue,
                                      int period);

// All q-cycles of g = G_{lambda,A} from the deflated numerator polynomial of
// g^q(z) - z; each entry is (cycle representative, eigenvalue of g^q).
std::vector<std::pair<Complex, Complex>> q_cycles(Complex lambda, Complex A, int q);

struct LimitCheckReport {
    double conjugacy_residual_sup = 0.0;
    double critical_match = 1e308;
    std::vector<double> psi_errors_minus;  // |Psi_k(P^{q-1} x) - G_T(-1)| trace
    std::vector<double> psi_errors_plus;   // |Psi_k(P^q(-omega/2)) - G_T(1)| trace
    bool both_critical_same_component = false;
    std::optional<long> zero_hit_iterate;
    double zero_hit_min = 1e308;
    double gt_of_minus_one = 1e308;  // |G_T(-1)|, the literal n = 1 reading
    std::string notes;
};

// Limit checks behind the sequence verdicts: the parabolic transfer for the
// bounded branch, the rescaled conjugacy and basin position of G_T for the
// unbounded one.
LimitCheckReport limit_conjugacy_check(const FatouAtlas& atlas, const SequenceReport& report,
                                       int samples = 50);

}  // namespace cantorlocus

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "exzone/analytics.hpp"

namespace exzone::optimizer {

using analytics::ExclusionDesign;
using analytics::NetworkConfig;

// Problem instance for  max f(X) s.t. g(X) <= I_d2d  over X = (Re, C) with
// box bounds Re in [re_min, re_max], C in (1, c_max].
struct ObjectiveContext {
    NetworkConfig cfg{};
    double r_ref = 0.2;   // reference cellular user distance, < re_min
    double d = 0.95;      // reference D2D receiver distance to the BS, > re_max
    double r0 = 1.0;      // minimum D2D interferer range in g(X)
    double i_d2d = 15.0;  // interference budget, W
    double re_min = 0.4;
    double re_max = 0.9;
    double c_max = 10.0;

    void validate() const;
};

// Gradient order: [d/dRe, d/dC].
using Grad2 = std::array<double, 2>;
using Hess2 = std::array<std::array<double, 2>, 2>;

struct ObjectiveEval {
    double psi = 0.0;  // log f
    double f = 0.0;
    Grad2 grad_psi{};
    Hess2 hess_psi{};
    Grad2 grad_f{};
};

struct ConstraintEval {
    double g = 0.0;  // W
    Grad2 grad{};
};

struct KktResiduals {
    double stationarity_rel_f = 0.0;    // ||grad f - beta grad g - mu*e|| / ||grad f||
    double stationarity_rel_psi = 0.0;  // same system scaled to grad Psi
    double primal_slack = 0.0;          // max(0, g - I)
    double comp_slack = 0.0;            // |beta (g - I)|
};

enum class SolveStatus { Interior, ConstraintActive, BoundActive, Infeasible };

struct OptimizationResult {
    ExclusionDesign x_star{};
    double f_value = 0.0;
    double g_value = 0.0;
    double beta = 0.0;      // multiplier for grad f = beta grad g (+ bound terms)
    double beta_psi = 0.0;  // = beta / f, the log-objective multiplier
    double mu_c = 0.0;      // multiplier of the C <= c_max bound
    double mu_re = 0.0;     // multiplier of the active Re bound (signed toward interior)
    KktResiduals kkt{};
    SolveStatus status = SolveStatus::Infeasible;
    int iterations = 0;
};

struct OracleResult {
    ExclusionDesign x{};
    double f = 0.0;
    double g = 0.0;
};

struct GridViolation {
    double re = 0.0;
    double c = 0.0;
    double max_eigenvalue = 0.0;
};

struct QuasiConcavityReport {
    int grid_resolution = 0;
    double max_eigenvalue = 0.0;  // over the grid
    std::vector<GridViolation> violations;   // eigenvalue > tolerance
    int sign_claim_disagreements = 0;        // pointwise second-derivative sign claims
    double max_printed_a_mismatch_rel = 0.0; // printed A term vs derived d2D/dRe2
};

// Psi(X) = log f(X) with the closed-form gradient and Hessian; f is the active
// average cellular SINR at r_ref.  Throws on Re <= 0 (domain singularity).
ObjectiveEval log_objective(const ObjectiveContext& ctx, const ExclusionDesign& x);

// g(X) and its gradient (includes the d lambda_c / d Re chain terms).
ConstraintEval constraint_g(const ObjectiveContext& ctx, const ExclusionDesign& x);

// The unique C with dg/dRe = 0 at this Re (dg/dRe is affine in C); +inf when
// the C-coefficient degenerates.
double c_min(const ObjectiveContext& ctx, double re);

QuasiConcavityReport verify_quasiconcavity(const ObjectiveContext& ctx, int grid_resolution);

OptimizationResult solve(const ObjectiveContext& ctx);

// Exhaustive feasibility scan over the box; ties broken toward lowest Re then
// lowest C.  Empty when no grid point is feasible.
std::optional<OracleResult> brute_force_oracle(const ObjectiveContext& ctx, int resolution);

// Audit values transcribed verbatim from the published derivation, reported
// for cross-checking (not used by the solver).
struct PaperCrossCheck {
    double lemma_residual_c = 0.0;   // first printed stationarity equation
    double lemma_residual_re = 0.0;  // second printed stationarity equation
    double printed_a = 0.0;          // printed d2D/dRe2 term
    double derived_a = 0.0;          // our d2D/dRe2
    double printed_e = 0.0;          // printed dD/dRe term (matches ours)
    double derived_e = 0.0;
};
PaperCrossCheck paper_crosscheck(const ObjectiveContext& ctx, const ExclusionDesign& x,
                                 double beta);

}  // namespace exzone::optimizer

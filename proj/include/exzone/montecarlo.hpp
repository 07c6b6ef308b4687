#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "exzone/analytics.hpp"
#include "exzone/geometry.hpp"

namespace exzone::montecarlo {

using analytics::ExclusionDesign;
using analytics::NetworkConfig;
using analytics::TrainingMode;
using geometry::Point2D;

// Drop protocol.  `Model` realizes the point processes the closed forms
// integrate (co-pilot interferers as a PPP of density lambda_b beyond the
// (2R_c - Re) floor, D2D users thinned by PPP base-station holes); `Hex`
// realizes the 31-hexagonal-cell network with per-cell pilot scheduling and is
// used to audit the floor assumption (realized minimum co-pilot distance).
enum class DropModel { Model, Hex };

struct SimParams {
    DropModel drop_model = DropModel::Model;
    int cell_count = 31;
    double r_ref = 0.2;          // pinned reference-user distance, km
    double link_dist = 0.05;     // D2D pair separation, km
    double sim_outer = 12.0;     // interferer sampling radius, km
    bool include_noise = false;  // add sigma2_bs to reported BS interference
    int threads = 0;             // 0 = hardware concurrency
};

struct ScheduledUser {
    Point2D pos;
    int pilot = 0;  // 1-based
};

struct DropRealization {
    std::vector<Point2D> bs_sites;  // origin first
    Point2D reference_user{};       // pilot 1 in the reference cell
    std::vector<ScheduledUser> reference_cell_users;  // excludes the reference user
    std::vector<Point2D> copilot_users;               // pilot-1 users of other cells
    std::vector<ScheduledUser> other_cell_users;      // hex protocol, pilots >= 2
    std::vector<Point2D> d2d_tx;
    std::vector<Point2D> d2d_rx;
    double min_copilot_distance = 0.0;  // realized, from the reference BS
    std::uint64_t seed = 0;
    DropModel model = DropModel::Model;
};

DropRealization generate_drop(const NetworkConfig& cfg, const ExclusionDesign& x,
                              const SimParams& sim, std::uint64_t seed);

// ---- training phase -------------------------------------------------------

enum class SourceClass { Signal, CellOther, CoPilot, D2d };

// One transmitter as seen by the reference BS, with its drawn fading vector.
struct FadedSource {
    SourceClass cls{};
    double amp = 0.0;                       // sqrt(P) r^(-alpha/2)
    std::complex<double> train_weight{};    // factor multiplying amp*h inside h_hat
    std::vector<std::complex<double>> h;    // CN(0, I_M)
};

struct TrainingOutput {
    std::vector<FadedSource> sources;
    std::vector<std::complex<double>> h_hat;     // channel estimate of the reference user
    std::vector<std::complex<double>> noise_eff; // N_c^p q_k, CN(0, sigma2_bs I_M)
    int antennas = 0;
    // ||h_hat/sqrt(P_c) - r_ref^(-alpha/2) h_ref||^2 / M for this fading draw
    double mse_per_antenna_realized = 0.0;
};

// Draws fading and forms h_hat = sum amp_s w_s h_s + noise.  With muted
// training the D2D sources carry zero train_weight.  Pilots are orthonormal,
// so same-cell users on other pilots contribute exactly nothing.
TrainingOutput training_phase(const DropRealization& drop, const NetworkConfig& cfg,
                              const ExclusionDesign& x, std::uint64_t fading_seed,
                              int antennas_override = 0);

// ---- uplink data phase ----------------------------------------------------

// Per-class decomposition of s = (1/M) h_hat^* Y_c.  `comp_*` are the complex
// contributions under one drawn symbol/noise realization and sum to
// `total_direct` (computed independently from the assembled Y_c).  `pw_*_tot`
// are symbol-averaged powers sum_s |(1/M) h_hat^* h_s|^2 amp_s^2; `pw_*_coh`
// keep only the channel-matched (persistent, M->inf) part of each inner
// product, which is what the closed-form SINR describes.
struct MrcDecomposition {
    std::complex<double> total_direct{};
    std::complex<double> comp_signal{}, comp_cellother{}, comp_copilot{}, comp_d2d{},
        comp_noise{};
    double pw_signal_tot = 0.0, pw_cellother_tot = 0.0, pw_copilot_tot = 0.0,
           pw_d2d_tot = 0.0, pw_noise = 0.0;
    double pw_signal_coh = 0.0, pw_copilot_coh = 0.0, pw_d2d_coh = 0.0;
};

MrcDecomposition uplink_mrc(const TrainingOutput& training, const NetworkConfig& cfg,
                            std::uint64_t symbol_seed);

// ---- geometry-exact measurements (fading integrated out exactly) ----------

// Realized interference power in the large-M MRC statistic, conditioned on the
// drop geometry: sum_copilot P_c^2 r^(-2a) (+ sum_d2d P_d^2 r^(-2a) under
// active training) (+ sigma2_bs when sim.include_noise).
double measure_bs_interference(const DropRealization& drop, const NetworkConfig& cfg,
                               const ExclusionDesign& x, const SimParams& sim);

// Conditional per-antenna channel-estimation MSE for the drop geometry:
// sigma2_bs/P_c + sum_copilot r^(-a) (+ sum_d2d (P_d/P_c) r^(-a) when active).
double measure_mse_conditional(const DropRealization& drop, const NetworkConfig& cfg,
                               const ExclusionDesign& x);

// ---- sweeps ----------------------------------------------------------------

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_drops = 0;
    bool se_valid = false;  // false when n_drops < 2
};

enum class SweepQuantity { BsInterference, Mse, CellSinr };

struct SweepPoint {
    double re = 0.0;
    double analytic = 0.0;            // full closed form (integrated to infinity)
    double analytic_truncated = 0.0;  // closed form matched to sim_outer
    MonteCarloEstimate empirical{};
    // CellSinr extras: mean coherent component powers and the vanishing parts
    double mean_signal_power = 0.0;
    double mean_interference_power = 0.0;
    double mean_cross_power = 0.0;  // finite-M leakage, decays as 1/M
    double mean_noise_power = 0.0;
};

struct SweepResult {
    SweepQuantity quantity{};
    std::vector<SweepPoint> points;
};

// Per-Re Monte Carlo sweep.  Deterministic for a fixed seed and independent of
// the worker count (per-drop seeds, index-ordered reduction).
SweepResult run_sweep(const NetworkConfig& cfg, const ExclusionDesign& x_template,
                      const SimParams& sim, SweepQuantity quantity,
                      const std::vector<double>& re_values, long n_drops,
                      std::uint64_t seed);

// Empirical D2D density of the thinned process, from retained-user counting.
MonteCarloEstimate d2d_density_estimate(const NetworkConfig& cfg, const ExclusionDesign& x,
                                        const SimParams& sim, long n_drops,
                                        std::uint64_t seed);

// Unbiased far-tail estimate of the first-moment shot noise
// E[sum P r^(-alpha)] over [r_from, r_far), via an importance-weighted point
// process with intensity proportional to r^(1-alpha) (unit-weight estimator).
// Used to extend truncated MSE measurements to the full closed form without
// silently substituting the analytic tail.
MonteCarloEstimate mse_tail_estimate(const NetworkConfig& cfg, const ExclusionDesign& x,
                                     double r_from, double r_far, long n_reps,
                                     std::uint64_t seed);

// Mean realized minimum co-pilot distance (floor audit, hex protocol).
MonteCarloEstimate copilot_floor_audit(const NetworkConfig& cfg, const ExclusionDesign& x,
                                       const SimParams& sim, long n_drops,
                                       std::uint64_t seed);

}  // namespace exzone::montecarlo

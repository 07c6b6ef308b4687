#pragma once

#include <numbers>

namespace exzone::analytics {

enum class TrainingMode { MutedD2D, ActiveD2D };

// Scenario parameters.  Lengths in km, powers in watts, densities per km^2.
// Defaults mirror the baseline scenario: alpha=3, R_c=1 km, lambda_b=1/(pi R_c^2),
// lambda=150 lambda_b, P_d=16 dBm, sigma^2_D2D=1e-3.  BS training noise is
// unit variance, matching the normalized channel-estimation error model.
struct NetworkConfig {
    double cell_radius = 1.0;                              // R_c, km
    double alpha = 3.0;                                    // pathloss exponent, > 2
    double lambda_b = 1.0 / std::numbers::pi;              // BS density, per km^2
    double density_ratio = 150.0;                          // a, lambda = a*lambda_b
    double p_d = 0.039810717055349734;                     // D2D power, W (16 dBm)
    int antennas = 128;                                    // M
    double sigma2_bs = 1.0;                                // BS noise, W
    double sigma2_d2d = 1e-3;                              // D2D receiver noise, W
    TrainingMode training = TrainingMode::ActiveD2D;
    int pilot_len = 10;                                    // T_p

    double lambda() const { return density_ratio * lambda_b; }
    void validate() const;  // throws std::invalid_argument on any broken invariant
};

// Optimization vector X = (Re, C) with P_c = C * P_d.
struct ExclusionDesign {
    double re = 0.5;       // km
    double power_ratio = 10.0;  // C

    double p_c(const NetworkConfig& cfg) const { return power_ratio * cfg.p_d; }
    // strict design invariants: 0 < Re < R_c, C > 1
    void validate(const NetworkConfig& cfg) const;
};

struct DerivedDensities {
    double lambda = 0.0;    // per km^2
    double lambda_d = 0.0;  // D2D (hole-process thinned)
    double lambda_c = 0.0;  // cellular interferers seen by a D2D receiver
};

struct AnalyticReport {
    double lambda_d = 0.0;
    double lambda_c = 0.0;
    double mse_per_antenna = 0.0;
    double mse_total = 0.0;
    double avg_bs_interference = 0.0;  // cellular-SINR denominator
    double avg_cell_sinr = 0.0;
    double d2d_interference = 0.0;     // g(X), W
    double avg_d2d_sinr = 0.0;
};

// lambda_d = lambda exp(-pi lambda_b Re^2); lambda_c = lambda - lambda_d.
DerivedDensities derived_densities(const NetworkConfig& cfg, double re);

// Normalized channel-estimation MSE (per antenna).  Muted training:
// sigma2_bs/P_c + 2 pi lambda_b (2R_c-Re)^(2-alpha)/(alpha-2); active training
// adds P_d 2 pi lambda_d Re^(2-alpha)/((alpha-2) P_c).
double mse_per_antenna(const NetworkConfig& cfg, const ExclusionDesign& x);
double mse_total(const NetworkConfig& cfg, const ExclusionDesign& x);
// Finite-region variant (interferers integrated only out to r_outer).
double mse_per_antenna_truncated(const NetworkConfig& cfg, const ExclusionDesign& x,
                                 double r_outer);

// Average interference power at the reference BS in the large-M limit:
// P_c^2 2 pi lambda_b (2R_c-Re)^(2-2alpha)/(2alpha-2), plus the D2D term
// P_d^2 2 pi lambda_d Re^(2-2alpha)/(2alpha-2) when training is active.
double avg_bs_interference(const NetworkConfig& cfg, const ExclusionDesign& x);
double avg_bs_interference_truncated(const NetworkConfig& cfg, const ExclusionDesign& x,
                                     double r_outer);

// P_c^2 r_ref^(-2alpha) / avg_bs_interference; noise-free (vanishes as M->inf).
double avg_cell_sinr(const NetworkConfig& cfg, const ExclusionDesign& x, double r_ref);

// g(X) = P_c 2 pi lambda_c (d-Re)^(2-alpha)/(alpha-2)
//      + P_d 2 pi lambda_d r0^(2-alpha)/(alpha-2)
double d2d_interference(const NetworkConfig& cfg, const ExclusionDesign& x, double d,
                        double r0);

// P_d link_dist^(-alpha) / (sigma2_d2d + g-style denominator).
double avg_d2d_sinr(const NetworkConfig& cfg, const ExclusionDesign& x, double link_dist,
                    double d, double r0);

AnalyticReport analytic_report(const NetworkConfig& cfg, const ExclusionDesign& x,
                               double r_ref, double d, double r0, double link_dist);

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

}  // namespace exzone::analytics

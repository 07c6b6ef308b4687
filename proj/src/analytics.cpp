#include "exzone/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "exzone/geometry.hpp"

namespace exzone::analytics {

using geometry::campbell_moment;
using geometry::campbell_moment_truncated;

void NetworkConfig::validate() const {
    if (!(alpha > 2.0)) throw std::invalid_argument("alpha must be > 2");
    if (!(cell_radius > 0.0)) throw std::invalid_argument("cell_radius must be > 0");
    if (!(lambda_b > 0.0)) throw std::invalid_argument("lambda_b must be > 0");
    if (density_ratio < 0.0) throw std::invalid_argument("density ratio a must be >= 0");
    if (!(p_d > 0.0)) throw std::invalid_argument("p_d must be > 0");
    if (antennas < 1) throw std::invalid_argument("antennas must be >= 1");
    if (pilot_len < 1) throw std::invalid_argument("pilot_len must be >= 1");
    if (sigma2_bs < 0.0 || sigma2_d2d < 0.0)
        throw std::invalid_argument("noise powers must be >= 0");
}

void ExclusionDesign::validate(const NetworkConfig& cfg) const {
    if (!(re > 0.0) || !(re < cfg.cell_radius))
        throw std::invalid_argument("design requires 0 < Re < R_c");
    if (!(power_ratio > 1.0)) throw std::invalid_argument("design requires C > 1");
}

DerivedDensities derived_densities(const NetworkConfig& cfg, double re) {
    if (re < 0.0 || re > cfg.cell_radius)
        throw std::invalid_argument("derived_densities: Re outside [0, R_c]");
    DerivedDensities d;
    d.lambda = cfg.lambda();
    const double keep = std::exp(-std::numbers::pi * cfg.lambda_b * re * re);
    d.lambda_d = d.lambda * keep;
    d.lambda_c = d.lambda - d.lambda_d;
    return d;
}

double mse_per_antenna(const NetworkConfig& cfg, const ExclusionDesign& x) {
    const double p_c = x.p_c(cfg);
    double mse = cfg.sigma2_bs / p_c +
                 campbell_moment(cfg.lambda_b, 2.0 * cfg.cell_radius - x.re, cfg.alpha);
    if (cfg.training == TrainingMode::ActiveD2D) {
        if (!(x.re > 0.0))
            throw std::invalid_argument("mse: Re=0 diverges with active D2D training");
        const auto dens = derived_densities(cfg, x.re);
        mse += cfg.p_d * campbell_moment(dens.lambda_d, x.re, cfg.alpha) / p_c;
    }
    return mse;
}

double mse_total(const NetworkConfig& cfg, const ExclusionDesign& x) {
    return cfg.antennas * mse_per_antenna(cfg, x);
}

double mse_per_antenna_truncated(const NetworkConfig& cfg, const ExclusionDesign& x,
                                 double r_outer) {
    const double p_c = x.p_c(cfg);
    double mse = cfg.sigma2_bs / p_c +
                 campbell_moment_truncated(cfg.lambda_b, 2.0 * cfg.cell_radius - x.re,
                                           cfg.alpha, r_outer);
    if (cfg.training == TrainingMode::ActiveD2D) {
        if (!(x.re > 0.0))
            throw std::invalid_argument("mse: Re=0 diverges with active D2D training");
        const auto dens = derived_densities(cfg, x.re);
        mse += cfg.p_d *
               campbell_moment_truncated(dens.lambda_d, x.re, cfg.alpha, r_outer) / p_c;
    }
    return mse;
}

double avg_bs_interference(const NetworkConfig& cfg, const ExclusionDesign& x) {
    const double p_c = x.p_c(cfg);
    double denom = p_c * p_c *
                   campbell_moment(cfg.lambda_b, 2.0 * cfg.cell_radius - x.re, 2.0 * cfg.alpha);
    if (cfg.training == TrainingMode::ActiveD2D) {
        if (!(x.re > 0.0))
            throw std::invalid_argument("avg_bs_interference: Re=0 diverges with active D2D");
        const auto dens = derived_densities(cfg, x.re);
        if (dens.lambda_d > 0.0)
            denom += cfg.p_d * cfg.p_d * campbell_moment(dens.lambda_d, x.re, 2.0 * cfg.alpha);
    }
    return denom;
}

double avg_bs_interference_truncated(const NetworkConfig& cfg, const ExclusionDesign& x,
                                     double r_outer) {
    const double p_c = x.p_c(cfg);
    double denom = p_c * p_c *
                   campbell_moment_truncated(cfg.lambda_b, 2.0 * cfg.cell_radius - x.re,
                                             2.0 * cfg.alpha, r_outer);
    if (cfg.training == TrainingMode::ActiveD2D && x.re > 0.0) {
        const auto dens = derived_densities(cfg, x.re);
        if (dens.lambda_d > 0.0)
            denom += cfg.p_d * cfg.p_d *
                     campbell_moment_truncated(dens.lambda_d, x.re, 2.0 * cfg.alpha, r_outer);
    }
    return denom;
}

double avg_cell_sinr(const NetworkConfig& cfg, const ExclusionDesign& x, double r_ref) {
    if (!(r_ref > 0.0) || !(r_ref < x.re))
        throw std::invalid_argument("avg_cell_sinr: reference user must satisfy 0 < r_ref < Re");
    const double p_c = x.p_c(cfg);
    const double signal = p_c * p_c * std::pow(r_ref, -2.0 * cfg.alpha);
    return signal / avg_bs_interference(cfg, x);
}

double d2d_interference(const NetworkConfig& cfg, const ExclusionDesign& x, double d,
                        double r0) {
    if (!(d > x.re))
        throw std::invalid_argument("d2d_interference: receiver must lie outside the exclusion zone (d > Re)");
    if (!(r0 > 0.0)) throw std::invalid_argument("d2d_interference: r0 must be > 0");
    const auto dens = derived_densities(cfg, x.re);
    double g = 0.0;
    if (dens.lambda_c > 0.0)
        g += x.p_c(cfg) * campbell_moment(dens.lambda_c, d - x.re, cfg.alpha);
    if (dens.lambda_d > 0.0)
        g += cfg.p_d * campbell_moment(dens.lambda_d, r0, cfg.alpha);
    return g;
}

double avg_d2d_sinr(const NetworkConfig& cfg, const ExclusionDesign& x, double link_dist,
                    double d, double r0) {
    if (!(link_dist > 0.0)) throw std::invalid_argument("avg_d2d_sinr: link_dist must be > 0");
    const double denom = cfg.sigma2_d2d + d2d_interference(cfg, x, d, r0);
    if (!(denom > 0.0))
        throw std::invalid_argument("avg_d2d_sinr: zero noise and zero interference densities");
    return cfg.p_d * std::pow(link_dist, -cfg.alpha) / denom;
}

AnalyticReport analytic_report(const NetworkConfig& cfg, const ExclusionDesign& x,
                               double r_ref, double d, double r0, double link_dist) {
    AnalyticReport rep;
    const auto dens = derived_densities(cfg, x.re);
    rep.lambda_d = dens.lambda_d;
    rep.lambda_c = dens.lambda_c;
    rep.mse_per_antenna = mse_per_antenna(cfg, x);
    rep.mse_total = cfg.antennas * rep.mse_per_antenna;
    rep.avg_bs_interference = avg_bs_interference(cfg, x);
    rep.avg_cell_sinr = avg_cell_sinr(cfg, x, r_ref);
    rep.d2d_interference = d2d_interference(cfg, x, d, r0);
    rep.avg_d2d_sinr = avg_d2d_sinr(cfg, x, link_dist, d, r0);
    return rep;
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

}  // namespace exzone::analytics

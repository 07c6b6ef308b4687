#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "exzone/montecarlo.hpp"
#include "exzone/rng.hpp"

using namespace exzone;
using namespace exzone::montecarlo;
using analytics::ExclusionDesign;
using analytics::NetworkConfig;
using analytics::TrainingMode;

namespace {

constexpr double kPi = std::numbers::pi;

NetworkConfig base_cfg(TrainingMode mode = TrainingMode::ActiveD2D) {
    NetworkConfig cfg;
    cfg.training = mode;
    return cfg;
}

SimParams small_sim() {
    SimParams sim;
    sim.sim_outer = 6.0;
    sim.threads = 2;
    return sim;
}

// a bare single-cell drop for controlled MRC experiments
DropRealization manual_drop(double r_ref) {
    DropRealization drop;
    drop.bs_sites.push_back({0.0, 0.0});
    drop.reference_user = {r_ref, 0.0};
    drop.model = DropModel::Model;
    return drop;
}

}  // namespace

TEST_CASE("generate_drop determinism and structure") {
    const auto cfg = base_cfg();
    const ExclusionDesign x{0.5, 10.0};
    auto sim = small_sim();

    SUBCASE("same seed reproduces the drop exactly") {
        for (DropModel model : {DropModel::Model, DropModel::Hex}) {
            sim.drop_model = model;
            const auto a = generate_drop(cfg, x, sim, 314);
            const auto b = generate_drop(cfg, x, sim, 314);
            REQUIRE(a.d2d_tx.size() == b.d2d_tx.size());
            REQUIRE(a.copilot_users.size() == b.copilot_users.size());
            for (std::size_t i = 0; i < a.d2d_tx.size(); ++i) {
                CHECK(a.d2d_tx[i].x == b.d2d_tx[i].x);
                CHECK(a.d2d_tx[i].y == b.d2d_tx[i].y);
            }
            const auto c = generate_drop(cfg, x, sim, 315);
            CHECK(a.d2d_tx.size() != c.d2d_tx.size());
        }
    }

    SUBCASE("reference user pinned at r_ref on pilot 1") {
        const auto drop = generate_drop(cfg, x, sim, 99);
        CHECK(geometry::norm(drop.reference_user) == doctest::Approx(sim.r_ref).epsilon(1e-12));
        for (const auto& u : drop.reference_cell_users) CHECK(u.pilot >= 2);
    }

    SUBCASE("reference distance >= Re is rejected") {
        auto bad = sim;
        bad.r_ref = 0.5;
        CHECK_THROWS_AS(generate_drop(cfg, x, bad, 1), std::invalid_argument);
    }

    SUBCASE("D2D transmitters lie outside every exclusion disk") {
        const auto drop = generate_drop(cfg, x, sim, 7);
        REQUIRE(!drop.d2d_tx.empty());
        for (std::size_t i = 0; i < drop.d2d_tx.size(); i += 37)
            CHECK(geometry::nearest_site_distance(drop.bs_sites, drop.d2d_tx[i]) > x.re);
    }

    SUBCASE("receivers are paired at the link distance, outside exclusion disks") {
        const auto drop = generate_drop(cfg, x, sim, 8);
        REQUIRE(drop.d2d_rx.size() == drop.d2d_tx.size());
        for (std::size_t i = 0; i < drop.d2d_rx.size(); i += 53) {
            CHECK(geometry::distance(drop.d2d_tx[i], drop.d2d_rx[i]) ==
                  doctest::Approx(sim.link_dist).epsilon(1e-12));
        }
    }

    SUBCASE("model protocol respects the co-pilot floor") {
        const auto drop = generate_drop(cfg, x, sim, 11);
        CHECK(drop.min_copilot_distance >= 2.0 * cfg.cell_radius - x.re);
    }
}

TEST_CASE("hex protocol scheduling") {
    NetworkConfig cfg = base_cfg();
    cfg.density_ratio = 300.0;  // every cell has more candidates than pilots
    const ExclusionDesign x{0.9, 10.0};
    SimParams sim = small_sim();
    sim.drop_model = DropModel::Hex;
    sim.cell_count = 7;

    const auto drop = generate_drop(cfg, x, sim, 5);

    SUBCASE("scheduling caps at T_p per cell") {
        CHECK(drop.reference_cell_users.size() == static_cast<std::size_t>(cfg.pilot_len - 1));
        CHECK(drop.copilot_users.size() == 6);  // one pilot-1 user per other cell
        CHECK(drop.other_cell_users.size() == static_cast<std::size_t>(6 * (cfg.pilot_len - 1)));
    }

    SUBCASE("pilots within a cell are distinct") {
        std::vector<int> seen(static_cast<std::size_t>(cfg.pilot_len + 1), 0);
        for (const auto& u : drop.reference_cell_users) ++seen[static_cast<std::size_t>(u.pilot)];
        for (int p = 2; p <= cfg.pilot_len; ++p) CHECK(seen[static_cast<std::size_t>(p)] == 1);
    }

    SUBCASE("realized co-pilot floor sits below the model's (2R_c - Re)") {
        // hex neighbours are sqrt(3) R_c away, so the realized minimum lives in
        // [sqrt(3) R_c - Re, ...); the analytic floor 2 R_c - Re is optimistic
        const auto audit = copilot_floor_audit(cfg, x, sim, 60, 17);
        CHECK(audit.mean >= std::sqrt(3.0) * cfg.cell_radius - x.re);
        CHECK(audit.mean < 2.0 * cfg.cell_radius - x.re);
    }
}

TEST_CASE("D2D mode fraction reproduces the hole-process thinning") {
    const auto cfg = base_cfg();
    const ExclusionDesign x{0.5, 10.0};
    SimParams sim = small_sim();
    sim.sim_outer = 3.0;
    const auto est = d2d_density_estimate(cfg, x, sim, 2000, 4242);
    const double target = analytics::derived_densities(cfg, x.re).lambda_d;
    INFO("estimate ", est.mean, " +- ", est.std_error, " target ", target);
    CHECK(std::abs(est.mean - target) <= 3.0 * est.std_error);
}

TEST_CASE("training phase") {
    SUBCASE("single cell, muted, zero noise: estimate is proportional to the channel") {
        NetworkConfig cfg = base_cfg(TrainingMode::MutedD2D);
        cfg.sigma2_bs = 0.0;
        cfg.antennas = 16;
        const ExclusionDesign x{0.5, 10.0};
        auto drop = manual_drop(0.2);
        const auto tr = training_phase(drop, cfg, x, 123);
        const double amp = std::sqrt(x.p_c(cfg)) * std::pow(0.2, -cfg.alpha / 2.0);
        for (int i = 0; i < tr.antennas; ++i) {
            CHECK(tr.h_hat[static_cast<std::size_t>(i)].real() ==
                  doctest::Approx(amp * tr.sources[0].h[static_cast<std::size_t>(i)].real())
                      .epsilon(1e-12));
            CHECK(tr.h_hat[static_cast<std::size_t>(i)].imag() ==
                  doctest::Approx(amp * tr.sources[0].h[static_cast<std::size_t>(i)].imag())
                      .epsilon(1e-12));
        }
        CHECK(tr.mse_per_antenna_realized == doctest::Approx(0.0).epsilon(1e-20));
    }

    SUBCASE("realized MSE agrees with the conditional expectation over fading") {
        NetworkConfig cfg = base_cfg(TrainingMode::ActiveD2D);
        cfg.antennas = 32;
        const ExclusionDesign x{0.5, 10.0};
        SimParams sim = small_sim();
        sim.sim_outer = 3.0;
        const auto drop = generate_drop(cfg, x, sim, 2024);
        const double conditional = measure_mse_conditional(drop, cfg, x);
        double sum = 0.0, sumsq = 0.0;
        const int reps = 400;
        for (int r = 0; r < reps; ++r) {
            const double v =
                training_phase(drop, cfg, x, derive_seed(55, static_cast<std::uint64_t>(r)))
                    .mse_per_antenna_realized;
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / reps;
        const double se = std::sqrt((sumsq / reps - mean * mean) / (reps - 1.0));
        INFO("fading mean ", mean, " +- ", se, " conditional ", conditional);
        CHECK(std::abs(mean - conditional) <= 4.0 * se);
    }

    SUBCASE("per-drop active MSE strictly exceeds muted (same geometry)") {
        const ExclusionDesign x{0.5, 10.0};
        SimParams sim = small_sim();
        sim.sim_outer = 3.0;
        const auto active_cfg = base_cfg(TrainingMode::ActiveD2D);
        const auto muted_cfg = base_cfg(TrainingMode::MutedD2D);
        for (std::uint64_t seed : {10u, 11u, 12u, 13u}) {
            const auto drop = generate_drop(active_cfg, x, sim, seed);
            CHECK(measure_mse_conditional(drop, active_cfg, x) >
                  measure_mse_conditional(drop, muted_cfg, x));
        }
    }
}

TEST_CASE("MRC decomposition") {
    NetworkConfig cfg = base_cfg(TrainingMode::ActiveD2D);
    cfg.antennas = 64;
    const ExclusionDesign x{0.5, 10.0};

    SUBCASE("complex components sum to the directly assembled statistic") {
        SimParams sim = small_sim();
        sim.sim_outer = 2.5;
        const auto drop = generate_drop(cfg, x, sim, 77);
        const auto tr = training_phase(drop, cfg, x, 78);
        const auto dec = uplink_mrc(tr, cfg, 79);
        const auto sum = dec.comp_signal + dec.comp_cellother + dec.comp_copilot +
                         dec.comp_d2d + dec.comp_noise;
        CHECK(std::abs(sum - dec.total_direct) <= 1e-9 * std::abs(dec.total_direct));
    }

    SUBCASE("noise-to-signal power ratio decays like 1/M") {
        NetworkConfig c1 = base_cfg(TrainingMode::MutedD2D);
        const auto drop = manual_drop(0.2);
        double log_m[5], log_ratio[5];
        int idx = 0;
        for (int m : {4, 16, 64, 256, 1024}) {
            c1.antennas = m;
            double noise = 0.0, signal = 0.0;
            const int reps = 64;
            for (int r = 0; r < reps; ++r) {
                const auto tr = training_phase(drop, c1, x,
                                               derive_seed(900, static_cast<std::uint64_t>(m),
                                                           static_cast<std::uint64_t>(r)));
                const auto dec = uplink_mrc(tr, c1,
                                            derive_seed(901, static_cast<std::uint64_t>(m),
                                                        static_cast<std::uint64_t>(r)));
                noise += dec.pw_noise;
                signal += dec.pw_signal_coh;
            }
            log_m[idx] = std::log(static_cast<double>(m));
            log_ratio[idx] = std::log(noise / signal);
            ++idx;
        }
        // least-squares slope of log ratio vs log M
        double mx = 0, my = 0;
        for (int i = 0; i < 5; ++i) {
            mx += log_m[i] / 5.0;
            my += log_ratio[i] / 5.0;
        }
        double num = 0, den = 0;
        for (int i = 0; i < 5; ++i) {
            num += (log_m[i] - mx) * (log_ratio[i] - my);
            den += (log_m[i] - mx) * (log_m[i] - mx);
        }
        const double slope = num / den;
        INFO("slope ", slope);
        CHECK(slope == doctest::Approx(-1.0).epsilon(0.12));
        // amplitude ratio between M=4 and M=1024 shrinks by ~sqrt(256)
        const double power_shrink = std::exp(log_ratio[0] - log_ratio[4]);
        CHECK(std::sqrt(power_shrink) == doctest::Approx(16.0).epsilon(0.35));
    }

    SUBCASE("single user, no interference: pure MRC array gain") {
        NetworkConfig c1 = base_cfg(TrainingMode::MutedD2D);
        c1.antennas = 256;
        const auto drop = manual_drop(0.2);
        double noise = 0.0, signal = 0.0;
        for (int r = 0; r < 200; ++r) {
            const auto tr =
                training_phase(drop, c1, x, derive_seed(77, static_cast<std::uint64_t>(r)));
            const auto dec =
                uplink_mrc(tr, c1, derive_seed(78, static_cast<std::uint64_t>(r)));
            noise += dec.pw_noise;
            signal += dec.pw_signal_coh;
        }
        const double p_rx = x.p_c(c1) * std::pow(0.2, -c1.alpha);
        const double expected = p_rx * 256.0 / c1.sigma2_bs;
        const double measured = signal / noise;
        INFO("measured ", measured, " expected ", expected);
        CHECK(measured == doctest::Approx(expected).epsilon(0.10));
    }
}

TEST_CASE("geometry-exact interference measurement") {
    const ExclusionDesign x{0.5, 10.0};

    SUBCASE("no interferers means zero interference") {
        const auto cfg = base_cfg(TrainingMode::MutedD2D);
        const auto drop = manual_drop(0.2);
        SimParams sim;
        CHECK(measure_bs_interference(drop, cfg, x, sim) == 0.0);
        sim.include_noise = true;
        CHECK(measure_bs_interference(drop, cfg, x, sim) == cfg.sigma2_bs);
    }

    SUBCASE("co-pilot power scales as P_c^2") {
        const auto cfg = base_cfg(TrainingMode::MutedD2D);
        SimParams sim = small_sim();
        const auto drop = generate_drop(cfg, x, sim, 2121);
        const double base = measure_bs_interference(drop, cfg, x, sim);
        const ExclusionDesign doubled{0.5, 20.0};
        CHECK(measure_bs_interference(drop, cfg, doubled, sim) ==
              doctest::Approx(4.0 * base).epsilon(1e-12));
    }

    SUBCASE("agreement with the closed form at one design point") {
        const auto cfg = base_cfg(TrainingMode::ActiveD2D);
        SimParams sim = small_sim();
        sim.sim_outer = 8.0;
        const auto sweep = run_sweep(cfg, x, sim, SweepQuantity::BsInterference, {0.5},
                                     1500, 31415);
        const auto& pt = sweep.points[0];
        INFO("empirical ", pt.empirical.mean, " truncated ", pt.analytic_truncated,
             " full ", pt.analytic);
        CHECK(std::abs(pt.empirical.mean - pt.analytic_truncated) <=
              3.0 * pt.empirical.std_error);
        CHECK(std::abs(pt.empirical.mean - pt.analytic) <= 0.05 * pt.analytic);
    }
}

TEST_CASE("run_sweep contract") {
    const auto cfg = base_cfg(TrainingMode::ActiveD2D);
    const ExclusionDesign x{0.5, 10.0};
    SimParams sim = small_sim();
    sim.sim_outer = 4.0;

    SUBCASE("invalid grid rejected before any work") {
        CHECK_THROWS_AS(run_sweep(cfg, x, sim, SweepQuantity::Mse, {0.5, 1.5}, 10, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(run_sweep(cfg, x, sim, SweepQuantity::Mse, {}, 10, 1),
                        std::invalid_argument);
        CHECK_THROWS_AS(run_sweep(cfg, x, sim, SweepQuantity::Mse, {0.1}, 10, 1),
                        std::invalid_argument);  // r_ref >= Re
    }

    SUBCASE("single drop flags the standard error as unavailable") {
        const auto sweep = run_sweep(cfg, x, sim, SweepQuantity::Mse, {0.5}, 1, 5);
        CHECK_FALSE(sweep.points[0].empirical.se_valid);
        CHECK(sweep.points[0].empirical.std_error == 0.0);
        CHECK(sweep.points[0].empirical.n_drops == 1);
    }

    SUBCASE("bit-identical results across worker counts") {
        auto sim1 = sim, sim4 = sim;
        sim1.threads = 1;
        sim4.threads = 4;
        for (SweepQuantity q :
             {SweepQuantity::BsInterference, SweepQuantity::Mse, SweepQuantity::CellSinr}) {
            NetworkConfig c = cfg;
            c.antennas = 16;
            const auto a = run_sweep(c, x, sim1, q, {0.45, 0.6}, 40, 777);
            const auto b = run_sweep(c, x, sim4, q, {0.45, 0.6}, 40, 777);
            for (std::size_t i = 0; i < a.points.size(); ++i) {
                CHECK(a.points[i].empirical.mean == b.points[i].empirical.mean);
                CHECK(a.points[i].empirical.std_error == b.points[i].empirical.std_error);
            }
        }
    }

    SUBCASE("MSE sweep is monotone in Re") {
        const auto sweep =
            run_sweep(cfg, x, sim, SweepQuantity::Mse, {0.45, 0.6, 0.75, 0.9}, 600, 99);
        for (std::size_t i = 1; i < sweep.points.size(); ++i) {
            CHECK(sweep.points[i].analytic > sweep.points[i - 1].analytic);
            CHECK(sweep.points[i].empirical.mean + sweep.points[i].empirical.std_error >
                  sweep.points[i - 1].empirical.mean -
                      sweep.points[i - 1].empirical.std_error);
        }
    }
}

TEST_CASE("cell SINR sweep orders the modes and densities") {
    const ExclusionDesign x{0.5, 10.0};
    SimParams sim = small_sim();
    sim.sim_outer = 3.0;
    NetworkConfig active = base_cfg(TrainingMode::ActiveD2D);
    NetworkConfig muted = base_cfg(TrainingMode::MutedD2D);
    active.antennas = muted.antennas = 32;

    const std::vector<double> grid{0.45, 0.7};
    const long drops = 250;
    const auto sa = run_sweep(active, x, sim, SweepQuantity::CellSinr, grid, drops, 2718);
    const auto sm = run_sweep(muted, x, sim, SweepQuantity::CellSinr, grid, drops, 2718);

    NetworkConfig low = active;
    low.density_ratio = 50.0;
    const auto sl = run_sweep(low, x, sim, SweepQuantity::CellSinr, grid, drops, 2718);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(sm.points[i].empirical.mean > sa.points[i].empirical.mean);
        CHECK(sm.points[i].analytic > sa.points[i].analytic);
        // lower density -> higher active-mode SINR
        CHECK(sl.points[i].empirical.mean > sa.points[i].empirical.mean);
        CHECK(sl.points[i].analytic > sa.points[i].analytic);
        // empirical ratio-of-means tracks the truncation-matched closed form
        CHECK(std::abs(sa.points[i].empirical.mean - sa.points[i].analytic_truncated) <=
              0.15 * sa.points[i].analytic_truncated);
    }
}

TEST_CASE("importance-sampled tail estimate matches the truncated Campbell integral") {
    const auto cfg = base_cfg(TrainingMode::MutedD2D);
    const ExclusionDesign x{0.5, 10.0};
    const auto est = mse_tail_estimate(cfg, x, 6.0, 5000.0, 4000, 515);
    const double target =
        geometry::campbell_moment_truncated(cfg.lambda_b, 6.0, cfg.alpha, 5000.0);
    INFO("tail estimate ", est.mean, " +- ", est.std_error, " target ", target);
    CHECK(std::abs(est.mean - target) <= 3.0 * est.std_error);

    const auto active_cfg = base_cfg(TrainingMode::ActiveD2D);
    const auto est2 = mse_tail_estimate(active_cfg, x, 6.0, 5000.0, 4000, 516);
    const double lam_d = analytics::derived_densities(active_cfg, x.re).lambda_d;
    const double target2 =
        target + active_cfg.p_d / x.p_c(active_cfg) *
                     geometry::campbell_moment_truncated(lam_d, 6.0, active_cfg.alpha, 5000.0);
    CHECK(std::abs(est2.mean - target2) <= 3.0 * est2.std_error);
}

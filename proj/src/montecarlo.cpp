#include "exzone/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "exzone/rng.hpp"

namespace exzone::montecarlo {

namespace {

constexpr double kPi = std::numbers::pi;

// Seed salts, one per independent component stream.  Skipping a component must
// not shift any other component's draws.
enum : std::uint64_t {
    kSaltHoles = 1,
    kSaltRefCell = 2,
    kSaltCoPilot = 3,
    kSaltD2d = 4,
    kSaltPairing = 5,
    kSaltRefAngle = 6,
    kSaltFading = 7,
    kSaltSymbols = 8,
};

struct DropNeeds {
    bool cells = true;
    bool d2d = true;
    bool pairing = true;
};

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Fn>
void parallel_for(long n, int threads, const Fn& fn) {
    threads = std::min<long>(resolve_threads(threads), std::max<long>(1, n));
    if (threads <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const long lo = n * t / threads;
        const long hi = n * (t + 1) / threads;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

double kahan_sum(const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

MonteCarloEstimate estimate_from_slots(const std::vector<double>& slots) {
    MonteCarloEstimate est;
    est.n_drops = static_cast<long>(slots.size());
    if (est.n_drops == 0) return est;
    est.mean = kahan_sum(slots) / static_cast<double>(est.n_drops);
    if (est.n_drops >= 2) {
        double ss = 0.0;
        for (double x : slots) ss += (x - est.mean) * (x - est.mean);
        est.std_error = std::sqrt(ss / (est.n_drops - 1.0) / est.n_drops);
        est.se_valid = true;
    }
    return est;
}

// Uniform-grid point index for radius queries; cell size equals the query
// radius so a 3x3 neighborhood covers every candidate.
class NeighborGrid {
  public:
    NeighborGrid(std::span<const Point2D> pts, double cell) : pts_(pts), cell_(cell) {
        if (!(cell_ > 0.0)) cell_ = 1.0;
        buckets_.reserve(pts.size() * 2);
        for (std::size_t i = 0; i < pts.size(); ++i)
            buckets_[key(pts[i].x, pts[i].y)].push_back(static_cast<int>(i));
    }

    bool any_within(const Point2D& p, double radius) const {
        const double r2 = radius * radius;
        const long cx = coord(p.x), cy = coord(p.y);
        for (long ix = cx - 1; ix <= cx + 1; ++ix) {
            for (long iy = cy - 1; iy <= cy + 1; ++iy) {
                const auto it = buckets_.find((ix << 32) ^ (iy & 0xffffffffll));
                if (it == buckets_.end()) continue;
                for (int idx : it->second) {
                    const double dx = pts_[static_cast<std::size_t>(idx)].x - p.x;
                    const double dy = pts_[static_cast<std::size_t>(idx)].y - p.y;
                    if (dx * dx + dy * dy <= r2) return true;
                }
            }
        }
        return false;
    }

  private:
    long coord(double v) const { return static_cast<long>(std::floor(v / cell_)); }
    long long key(double x, double y) const { return (coord(x) << 32) ^ (coord(y) & 0xffffffffll); }

    std::span<const Point2D> pts_;
    double cell_;
    std::unordered_map<long long, std::vector<int>> buckets_;
};

void pair_receivers(DropRealization& drop, double link_dist, double re,
                    std::uint64_t seed) {
    const NeighborGrid grid(drop.bs_sites, std::max(re, 1e-9));
    Rng rng(seed);
    drop.d2d_rx.reserve(drop.d2d_tx.size());
    for (const auto& tx : drop.d2d_tx) {
        const double phi0 = 2.0 * kPi * rng.uniform();
        Point2D rx{};
        bool placed = false;
        for (int k = 0; k < 16 && !placed; ++k) {
            const double phi = phi0 + 2.0 * kPi * k / 16.0;
            rx = {tx.x + link_dist * std::cos(phi), tx.y + link_dist * std::sin(phi)};
            placed = !grid.any_within(rx, re);
        }
        if (!placed) {
            // fall back to stepping radially away from the nearest site
            const int ns = geometry::nearest_site_index(drop.bs_sites, tx);
            const auto& s = drop.bs_sites[static_cast<std::size_t>(ns)];
            const double d = std::max(geometry::distance(s, tx), 1e-12);
            rx = {tx.x + link_dist * (tx.x - s.x) / d, tx.y + link_dist * (tx.y - s.y) / d};
        }
        drop.d2d_rx.push_back(rx);
    }
}

DropRealization generate_drop_impl(const NetworkConfig& cfg, const ExclusionDesign& x,
                                   const SimParams& sim, std::uint64_t seed,
                                   const DropNeeds& needs) {
    cfg.validate();
    if (!(x.re > 0.0) || !(x.re <= cfg.cell_radius))
        throw std::invalid_argument("generate_drop: Re must lie in (0, R_c]");
    if (!(x.power_ratio > 1.0)) throw std::invalid_argument("generate_drop: C must be > 1");
    if (!(sim.r_ref < x.re))
        throw std::invalid_argument("generate_drop: reference distance >= Re, cannot pin reference user");

    DropRealization drop;
    drop.seed = seed;
    drop.model = sim.drop_model;
    const double lambda = cfg.lambda();

    if (sim.drop_model == DropModel::Model) {
        // Reference BS at the origin; the remaining hole centers form a PPP of
        // density lambda_b, extended one hole radius beyond the sampled region.
        drop.bs_sites.push_back({0.0, 0.0});
        if (needs.d2d || needs.pairing) {
            auto holes = geometry::sample_ppp(geometry::make_disk(sim.sim_outer + x.re),
                                              cfg.lambda_b, derive_seed(seed, kSaltHoles));
            drop.bs_sites.insert(drop.bs_sites.end(), holes.points.begin(),
                                 holes.points.end());
        }

        {
            Rng rng(derive_seed(seed, kSaltRefAngle));
            const double phi = 2.0 * kPi * rng.uniform();
            drop.reference_user = {sim.r_ref * std::cos(phi), sim.r_ref * std::sin(phi)};
        }

        if (needs.cells) {
            auto cand = geometry::sample_ppp(geometry::make_disk(x.re), lambda,
                                             derive_seed(seed, kSaltRefCell));
            int pilot = 2;
            for (const auto& p : cand.points) {
                if (pilot > cfg.pilot_len) break;
                if (geometry::nearest_site_index(drop.bs_sites, p) != 0) continue;
                drop.reference_cell_users.push_back({p, pilot++});
            }
        }

        {
            const double floor = 2.0 * cfg.cell_radius - x.re;
            if (floor < sim.sim_outer) {
                auto cop = geometry::sample_ppp(geometry::make_annulus(floor, sim.sim_outer),
                                                cfg.lambda_b, derive_seed(seed, kSaltCoPilot));
                drop.copilot_users = std::move(cop.points);
            }
        }

        if (needs.d2d) {
            auto cand = geometry::sample_ppp(geometry::make_disk(sim.sim_outer), lambda,
                                             derive_seed(seed, kSaltD2d));
            const NeighborGrid grid(drop.bs_sites, x.re);
            drop.d2d_tx.reserve(cand.points.size());
            for (const auto& p : cand.points)
                if (!grid.any_within(p, x.re)) drop.d2d_tx.push_back(p);
        }
    } else {
        const auto layout = geometry::hex_layout(cfg.cell_radius, sim.cell_count);
        drop.bs_sites = layout.sites;
        double far = 0.0;
        for (const auto& s : drop.bs_sites) far = std::max(far, geometry::norm(s));
        const double region = far + cfg.cell_radius + 2.0 * cfg.cell_radius;

        {
            Rng rng(derive_seed(seed, kSaltRefAngle));
            const double phi = 2.0 * kPi * rng.uniform();
            drop.reference_user = {sim.r_ref * std::cos(phi), sim.r_ref * std::sin(phi)};
        }

        auto users = geometry::sample_ppp(geometry::make_disk(region), lambda,
                                          derive_seed(seed, kSaltRefCell));
        std::vector<int> pilots_used(drop.bs_sites.size(), 0);
        pilots_used[0] = 1;  // reference user holds pilot 1
        for (const auto& p : users.points) {
            const int site = geometry::nearest_site_index(drop.bs_sites, p);
            const double dist = geometry::distance(drop.bs_sites[static_cast<std::size_t>(site)], p);
            if (dist < x.re) {
                int& used = pilots_used[static_cast<std::size_t>(site)];
                if (used >= cfg.pilot_len) continue;  // scheduling cap
                const int pilot = ++used;
                if (site == 0) {
                    drop.reference_cell_users.push_back({p, pilot});
                } else if (pilot == 1) {
                    drop.copilot_users.push_back(p);
                } else {
                    drop.other_cell_users.push_back({p, pilot});
                }
            } else if (needs.d2d) {
                drop.d2d_tx.push_back(p);
            }
        }
    }

    drop.min_copilot_distance = std::numeric_limits<double>::infinity();
    for (const auto& p : drop.copilot_users)
        drop.min_copilot_distance = std::min(drop.min_copilot_distance, geometry::norm(p));

    if (needs.pairing && needs.d2d)
        pair_receivers(drop, sim.link_dist, x.re, derive_seed(seed, kSaltPairing));
    return drop;
}

}  // namespace

DropRealization generate_drop(const NetworkConfig& cfg, const ExclusionDesign& x,
                              const SimParams& sim, std::uint64_t seed) {
    return generate_drop_impl(cfg, x, sim, seed, DropNeeds{});
}

TrainingOutput training_phase(const DropRealization& drop, const NetworkConfig& cfg,
                              const ExclusionDesign& x, std::uint64_t fading_seed,
                              int antennas_override) {
    const int m = antennas_override > 0 ? antennas_override : cfg.antennas;
    const double p_c = x.p_c(cfg);
    const double half_alpha = 0.5 * cfg.alpha;
    const bool active = cfg.training == TrainingMode::ActiveD2D;

    TrainingOutput out;
    out.antennas = m;
    out.sources.reserve(1 + drop.reference_cell_users.size() + drop.copilot_users.size() +
                        drop.other_cell_users.size() + drop.d2d_tx.size());

    const auto add = [&](SourceClass cls, double dist, double power,
                         std::complex<double> weight) {
        FadedSource s;
        s.cls = cls;
        s.amp = std::sqrt(power) * std::pow(dist, -half_alpha);
        s.train_weight = weight;
        out.sources.push_back(std::move(s));
    };

    add(SourceClass::Signal, geometry::norm(drop.reference_user), p_c, {1.0, 0.0});
    for (const auto& u : drop.reference_cell_users)
        add(SourceClass::CellOther, geometry::norm(u.pos), p_c, {0.0, 0.0});
    for (const auto& u : drop.other_cell_users)
        add(SourceClass::CellOther, geometry::norm(u.pos), p_c, {0.0, 0.0});
    for (const auto& p : drop.copilot_users)
        add(SourceClass::CoPilot, geometry::norm(p), p_c, {1.0, 0.0});

    Rng rng(fading_seed);
    // D2D training weights xi* = (u_i^p)* q_k ~ CN(0,1); drawn in both modes so
    // muted/active runs with the same seed share every fading draw.
    for (const auto& p : drop.d2d_tx) {
        const std::complex<double> xi_conj = std::conj(rng.cnormal());
        add(SourceClass::D2d, geometry::norm(p), cfg.p_d,
            active ? xi_conj : std::complex<double>{0.0, 0.0});
    }

    out.h_hat.assign(static_cast<std::size_t>(m), {0.0, 0.0});
    for (auto& s : out.sources) {
        s.h.resize(static_cast<std::size_t>(m));
        const std::complex<double> w = s.amp * s.train_weight;
        for (int i = 0; i < m; ++i) {
            s.h[static_cast<std::size_t>(i)] = rng.cnormal();
            out.h_hat[static_cast<std::size_t>(i)] += w * s.h[static_cast<std::size_t>(i)];
        }
    }
    out.noise_eff.resize(static_cast<std::size_t>(m));
    const double sigma = std::sqrt(cfg.sigma2_bs);
    for (int i = 0; i < m; ++i) {
        out.noise_eff[static_cast<std::size_t>(i)] = sigma * rng.cnormal();
        out.h_hat[static_cast<std::size_t>(i)] += out.noise_eff[static_cast<std::size_t>(i)];
    }

    const double ref_gain = std::pow(geometry::norm(drop.reference_user), -half_alpha);
    const double sqrt_pc = std::sqrt(p_c);
    double err = 0.0;
    const auto& h_ref = out.sources.front().h;
    for (int i = 0; i < m; ++i) {
        const std::complex<double> e =
            out.h_hat[static_cast<std::size_t>(i)] / sqrt_pc -
            ref_gain * h_ref[static_cast<std::size_t>(i)];
        err += std::norm(e);
    }
    out.mse_per_antenna_realized = err / m;
    return out;
}

MrcDecomposition uplink_mrc(const TrainingOutput& training, const NetworkConfig& cfg,
                            std::uint64_t symbol_seed) {
    const int m = training.antennas;
    const double inv_m = 1.0 / m;
    Rng rng(symbol_seed);
    MrcDecomposition dec;

    std::vector<std::complex<double>> y(static_cast<std::size_t>(m), {0.0, 0.0});
    double hhat_norm2 = 0.0;
    for (int i = 0; i < m; ++i) hhat_norm2 += std::norm(training.h_hat[static_cast<std::size_t>(i)]);

    for (const auto& s : training.sources) {
        const std::complex<double> u = rng.cnormal();
        std::complex<double> inner{0.0, 0.0};
        double h_norm2 = 0.0;
        for (int i = 0; i < m; ++i) {
            const auto& hv = s.h[static_cast<std::size_t>(i)];
            inner += std::conj(training.h_hat[static_cast<std::size_t>(i)]) * hv;
            h_norm2 += std::norm(hv);
            y[static_cast<std::size_t>(i)] += s.amp * u * hv;
        }
        inner *= inv_m;
        const std::complex<double> comp = inner * s.amp * u;
        const double pw_tot = std::norm(inner * s.amp);
        // channel-matched part of the inner product: conj(amp w) ||h||^2 / M
        const std::complex<double> coh_inner =
            std::conj(s.amp * s.train_weight) * (h_norm2 * inv_m);
        const double pw_coh = std::norm(coh_inner * s.amp);
        switch (s.cls) {
            case SourceClass::Signal:
                dec.comp_signal += comp;
                dec.pw_signal_tot += pw_tot;
                dec.pw_signal_coh += pw_coh;
                break;
            case SourceClass::CellOther:
                dec.comp_cellother += comp;
                dec.pw_cellother_tot += pw_tot;
                break;
            case SourceClass::CoPilot:
                dec.comp_copilot += comp;
                dec.pw_copilot_tot += pw_tot;
                dec.pw_copilot_coh += pw_coh;
                break;
            case SourceClass::D2d:
                dec.comp_d2d += comp;
                dec.pw_d2d_tot += pw_tot;
                dec.pw_d2d_coh += pw_coh;
                break;
        }
    }

    const double sigma = std::sqrt(cfg.sigma2_bs);
    std::complex<double> noise_inner{0.0, 0.0};
    for (int i = 0; i < m; ++i) {
        const std::complex<double> n = sigma * rng.cnormal();
        y[static_cast<std::size_t>(i)] += n;
        noise_inner += std::conj(training.h_hat[static_cast<std::size_t>(i)]) * n;
    }
    dec.comp_noise = noise_inner * inv_m;
    dec.pw_noise = cfg.sigma2_bs * hhat_norm2 * inv_m * inv_m;

    std::complex<double> total{0.0, 0.0};
    for (int i = 0; i < m; ++i)
        total += std::conj(training.h_hat[static_cast<std::size_t>(i)]) * y[static_cast<std::size_t>(i)];
    dec.total_direct = total * inv_m;
    return dec;
}

double measure_bs_interference(const DropRealization& drop, const NetworkConfig& cfg,
                               const ExclusionDesign& x, const SimParams& sim) {
    const double p_c = x.p_c(cfg);
    const double two_alpha = 2.0 * cfg.alpha;
    double sum = 0.0;
    for (const auto& p : drop.copilot_users)
        sum += p_c * p_c * std::pow(geometry::norm(p), -two_alpha);
    if (cfg.training == TrainingMode::ActiveD2D) {
        for (const auto& p : drop.d2d_tx)
            sum += cfg.p_d * cfg.p_d * std::pow(geometry::norm(p), -two_alpha);
    }
    if (sim.include_noise) sum += cfg.sigma2_bs;
    return sum;
}

double measure_mse_conditional(const DropRealization& drop, const NetworkConfig& cfg,
                               const ExclusionDesign& x) {
    const double p_c = x.p_c(cfg);
    double sum = cfg.sigma2_bs / p_c;
    for (const auto& p : drop.copilot_users) sum += std::pow(geometry::norm(p), -cfg.alpha);
    if (cfg.training == TrainingMode::ActiveD2D) {
        const double scale = cfg.p_d / p_c;
        for (const auto& p : drop.d2d_tx)
            sum += scale * std::pow(geometry::norm(p), -cfg.alpha);
    }
    return sum;
}

SweepResult run_sweep(const NetworkConfig& cfg, const ExclusionDesign& x_template,
                      const SimParams& sim, SweepQuantity quantity,
                      const std::vector<double>& re_values, long n_drops,
                      std::uint64_t seed) {
    cfg.validate();
    if (n_drops < 1) throw std::invalid_argument("run_sweep: n_drops must be >= 1");
    if (re_values.empty()) throw std::invalid_argument("run_sweep: empty Re grid");
    for (double re : re_values) {
        if (!(re > 0.0) || !(re <= cfg.cell_radius))
            throw std::invalid_argument("run_sweep: Re values must lie in (0, R_c]");
        if (!(sim.r_ref < re))
            throw std::invalid_argument("run_sweep: r_ref must be < every Re");
    }

    SweepResult result;
    result.quantity = quantity;
    result.points.resize(re_values.size());
    const std::uint64_t qsalt = 100 + static_cast<std::uint64_t>(quantity);

    DropNeeds needs;
    needs.pairing = false;
    needs.cells = quantity == SweepQuantity::CellSinr;
    needs.d2d = cfg.training == TrainingMode::ActiveD2D || quantity == SweepQuantity::CellSinr;

    for (std::size_t ri = 0; ri < re_values.size(); ++ri) {
        ExclusionDesign x = x_template;
        x.re = re_values[ri];
        SweepPoint& pt = result.points[ri];
        pt.re = x.re;

        if (quantity == SweepQuantity::CellSinr) {
            std::vector<double> sig(static_cast<std::size_t>(n_drops));
            std::vector<double> intf(static_cast<std::size_t>(n_drops));
            std::vector<double> cross(static_cast<std::size_t>(n_drops));
            std::vector<double> noise(static_cast<std::size_t>(n_drops));
            parallel_for(n_drops, sim.threads, [&](long di) {
                const std::uint64_t ds = derive_seed(seed, qsalt, ri, static_cast<std::uint64_t>(di));
                const auto drop = generate_drop_impl(cfg, x, sim, ds, needs);
                const auto tr = training_phase(drop, cfg, x, derive_seed(ds, kSaltFading));
                const auto dec = uplink_mrc(tr, cfg, derive_seed(ds, kSaltSymbols));
                sig[static_cast<std::size_t>(di)] = dec.pw_signal_coh;
                intf[static_cast<std::size_t>(di)] = dec.pw_copilot_coh + dec.pw_d2d_coh;
                cross[static_cast<std::size_t>(di)] =
                    (dec.pw_copilot_tot - dec.pw_copilot_coh) +
                    (dec.pw_d2d_tot - dec.pw_d2d_coh) + dec.pw_cellother_tot;
                noise[static_cast<std::size_t>(di)] = dec.pw_noise;
            });
            const double ms = kahan_sum(sig) / n_drops;
            const double mi = kahan_sum(intf) / n_drops;
            pt.mean_signal_power = ms;
            pt.mean_interference_power = mi;
            pt.mean_cross_power = kahan_sum(cross) / n_drops;
            pt.mean_noise_power = kahan_sum(noise) / n_drops;
            pt.empirical.n_drops = n_drops;
            pt.empirical.mean = ms / mi;
            if (n_drops >= 2) {
                double vs = 0.0, vi = 0.0, cv = 0.0;
                for (long di = 0; di < n_drops; ++di) {
                    const double a = sig[static_cast<std::size_t>(di)] - ms;
                    const double b = intf[static_cast<std::size_t>(di)] - mi;
                    vs += a * a;
                    vi += b * b;
                    cv += a * b;
                }
                const double n1 = (n_drops - 1.0) * n_drops;
                vs /= n1;
                vi /= n1;
                cv /= n1;
                const double r = pt.empirical.mean;
                const double var =
                    r * r * (vs / (ms * ms) + vi / (mi * mi) - 2.0 * cv / (ms * mi));
                pt.empirical.std_error = std::sqrt(std::max(var, 0.0));
                pt.empirical.se_valid = true;
            }
            pt.analytic = analytics::avg_cell_sinr(cfg, x, sim.r_ref);
            const double sig_an = x.p_c(cfg) * x.p_c(cfg) *
                                  std::pow(sim.r_ref, -2.0 * cfg.alpha);
            pt.analytic_truncated =
                sig_an / analytics::avg_bs_interference_truncated(cfg, x, sim.sim_outer);
        } else {
            std::vector<double> slots(static_cast<std::size_t>(n_drops));
            parallel_for(n_drops, sim.threads, [&](long di) {
                const std::uint64_t ds = derive_seed(seed, qsalt, ri, static_cast<std::uint64_t>(di));
                const auto drop = generate_drop_impl(cfg, x, sim, ds, needs);
                slots[static_cast<std::size_t>(di)] =
                    quantity == SweepQuantity::BsInterference
                        ? measure_bs_interference(drop, cfg, x, sim)
                        : measure_mse_conditional(drop, cfg, x);
            });
            pt.empirical = estimate_from_slots(slots);
            if (quantity == SweepQuantity::BsInterference) {
                const double shift = sim.include_noise ? cfg.sigma2_bs : 0.0;
                pt.analytic = analytics::avg_bs_interference(cfg, x) + shift;
                pt.analytic_truncated =
                    analytics::avg_bs_interference_truncated(cfg, x, sim.sim_outer) + shift;
            } else {
                pt.analytic = analytics::mse_per_antenna(cfg, x);
                pt.analytic_truncated = analytics::mse_per_antenna_truncated(cfg, x, sim.sim_outer);
            }
        }
    }
    return result;
}

MonteCarloEstimate d2d_density_estimate(const NetworkConfig& cfg, const ExclusionDesign& x,
                                        const SimParams& sim, long n_drops,
                                        std::uint64_t seed) {
    cfg.validate();
    if (n_drops < 1) throw std::invalid_argument("d2d_density_estimate: n_drops must be >= 1");
    DropNeeds needs;
    needs.cells = false;
    needs.pairing = false;
    const double area = kPi * sim.sim_outer * sim.sim_outer;
    std::vector<double> slots(static_cast<std::size_t>(n_drops));
    parallel_for(n_drops, sim.threads, [&](long di) {
        const std::uint64_t ds = derive_seed(seed, 77, static_cast<std::uint64_t>(di));
        const auto drop = generate_drop_impl(cfg, x, sim, ds, needs);
        slots[static_cast<std::size_t>(di)] = static_cast<double>(drop.d2d_tx.size()) / area;
    });
    return estimate_from_slots(slots);
}

MonteCarloEstimate mse_tail_estimate(const NetworkConfig& cfg, const ExclusionDesign& x,
                                     double r_from, double r_far, long n_reps,
                                     std::uint64_t seed) {
    cfg.validate();
    if (!(r_far > r_from) || !(r_from > 0.0))
        throw std::invalid_argument("mse_tail_estimate: need 0 < r_from < r_far");
    if (n_reps < 1) throw std::invalid_argument("mse_tail_estimate: n_reps must be >= 1");
    // Importance-weighted point process: proposal intensity 2 pi lambda r
    // (r/r_from)^(-alpha) with weight (r/r_from)^alpha per point, so each
    // point's weighted contribution w(r) r^(-alpha) is exactly r_from^(-alpha).
    // The estimator reduces to a Poisson count scaled by r_from^(-alpha); its
    // mean equals the truncated Campbell integral on [r_from, r_far).
    const double p_c = x.p_c(cfg);
    const double mu_cop =
        geometry::campbell_moment_truncated(cfg.lambda_b, r_from, cfg.alpha, r_far) *
        std::pow(r_from, cfg.alpha);
    double mu_d2d = 0.0;
    double d2d_scale = 0.0;
    if (cfg.training == TrainingMode::ActiveD2D) {
        const auto dens = analytics::derived_densities(cfg, x.re);
        if (dens.lambda_d > 0.0) {
            mu_d2d = geometry::campbell_moment_truncated(dens.lambda_d, r_from, cfg.alpha,
                                                         r_far) *
                     std::pow(r_from, cfg.alpha);
            d2d_scale = cfg.p_d / p_c;
        }
    }
    const double unit = std::pow(r_from, -cfg.alpha);
    std::vector<double> slots(static_cast<std::size_t>(n_reps));
    parallel_for(n_reps, 1, [&](long i) {
        Rng rng(derive_seed(seed, 78, static_cast<std::uint64_t>(i)));
        double v = static_cast<double>(rng.poisson(mu_cop)) * unit;
        if (mu_d2d > 0.0) v += d2d_scale * static_cast<double>(rng.poisson(mu_d2d)) * unit;
        slots[static_cast<std::size_t>(i)] = v;
    });
    return estimate_from_slots(slots);
}

MonteCarloEstimate copilot_floor_audit(const NetworkConfig& cfg, const ExclusionDesign& x,
                                       const SimParams& sim, long n_drops,
                                       std::uint64_t seed) {
    cfg.validate();
    if (n_drops < 1) throw std::invalid_argument("copilot_floor_audit: n_drops must be >= 1");
    DropNeeds needs;
    needs.d2d = false;
    needs.pairing = false;
    std::vector<double> slots;
    slots.reserve(static_cast<std::size_t>(n_drops));
    for (long di = 0; di < n_drops; ++di) {
        const auto drop = generate_drop_impl(cfg, x, sim, derive_seed(seed, 79, static_cast<std::uint64_t>(di)), needs);
        if (!drop.copilot_users.empty()) slots.push_back(drop.min_copilot_distance);
    }
    return estimate_from_slots(slots);
}

}  // namespace exzone::montecarlo

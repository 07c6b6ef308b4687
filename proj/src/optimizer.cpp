#include "exzone/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace exzone::optimizer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCFloorEps = 1e-9;  // C is constrained to the open interval (1, c_max]

// Shared pre-computed pieces of D(X) = C^2 (2Rc-Re)^(-p) + a Re^(-p) e^(-k Re^2)
// with p = 2 alpha - 2, k = pi lambda_b, a = lambda/lambda_b.
struct DTerms {
    double p, k, a, w, ex;
    double d, d_c, d_re, d_cc, d_cre, d_rere;
};

DTerms d_terms(const ObjectiveContext& ctx, const ExclusionDesign& x) {
    const auto& cfg = ctx.cfg;
    DTerms t{};
    t.p = 2.0 * cfg.alpha - 2.0;
    t.k = kPi * cfg.lambda_b;
    t.a = cfg.density_ratio;
    t.w = 2.0 * cfg.cell_radius - x.re;
    t.ex = std::exp(-t.k * x.re * x.re);
    const double re = x.re;
    const double c = x.power_ratio;
    const double wp = std::pow(t.w, -t.p);
    const double rep = std::pow(re, -t.p);
    t.d = c * c * wp + t.a * rep * t.ex;
    t.d_c = 2.0 * c * wp;
    t.d_cc = 2.0 * wp;
    t.d_cre = 2.0 * c * t.p * std::pow(t.w, -t.p - 1.0);
    t.d_re = c * c * t.p * std::pow(t.w, -t.p - 1.0) -
             t.a * t.ex * std::pow(re, -t.p - 1.0) * (t.p + 2.0 * t.k * re * re);
    t.d_rere = c * c * t.p * (t.p + 1.0) * std::pow(t.w, -t.p - 2.0) +
               t.a * t.ex *
                   (t.p * (t.p + 1.0) * std::pow(re, -t.p - 2.0) +
                    2.0 * t.k * (2.0 * t.p - 1.0) * rep +
                    4.0 * t.k * t.k * std::pow(re, 2.0 - t.p));
    return t;
}

double golden_max(double lo, double hi, double tol, const auto& fn, int& evals) {
    constexpr double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = fn(x1), f2 = fn(x2);
    evals += 2;
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = fn(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = fn(x1);
        }
        ++evals;
    }
    return 0.5 * (a + b);
}

}  // namespace

void ObjectiveContext::validate() const {
    cfg.validate();
    if (!(re_min > 0.0) || !(re_min < re_max) || !(re_max < cfg.cell_radius + 1e-12))
        throw std::invalid_argument("context requires 0 < re_min < re_max <= R_c");
    if (!(r_ref > 0.0) || !(r_ref < re_min))
        throw std::invalid_argument("context requires 0 < r_ref < re_min");
    if (!(d > re_max)) throw std::invalid_argument("context requires d > re_max");
    if (!(r0 > 0.0)) throw std::invalid_argument("context requires r0 > 0");
    if (!(i_d2d > 0.0)) throw std::invalid_argument("context requires I_d2d > 0");
    if (!(c_max > 1.0)) throw std::invalid_argument("context requires c_max > 1");
}

ObjectiveEval log_objective(const ObjectiveContext& ctx, const ExclusionDesign& x) {
    if (!(x.re > 0.0)) throw std::invalid_argument("log_objective: Re = 0 is a domain singularity");
    const auto& cfg = ctx.cfg;
    const auto t = d_terms(ctx, x);
    const double c = x.power_ratio;

    ObjectiveEval ev;
    ev.psi = std::log(c * c * (cfg.alpha - 1.0) / (kPi * cfg.lambda_b)) -
             2.0 * cfg.alpha * std::log(ctx.r_ref) - std::log(t.d);
    ev.f = c * c * (cfg.alpha - 1.0) * std::pow(ctx.r_ref, -2.0 * cfg.alpha) /
           (kPi * cfg.lambda_b * t.d);
    ev.grad_psi = {-t.d_re / t.d, 2.0 / c - t.d_c / t.d};
    const double d2 = t.d * t.d;
    ev.hess_psi[0][0] = -(t.d_rere * t.d - t.d_re * t.d_re) / d2;
    ev.hess_psi[0][1] = -(t.d_cre * t.d - t.d_c * t.d_re) / d2;
    ev.hess_psi[1][0] = ev.hess_psi[0][1];
    ev.hess_psi[1][1] = -2.0 / (c * c) - (t.d_cc * t.d - t.d_c * t.d_c) / d2;
    ev.grad_f = {ev.f * ev.grad_psi[0], ev.f * ev.grad_psi[1]};
    return ev;
}

ConstraintEval constraint_g(const ObjectiveContext& ctx, const ExclusionDesign& x) {
    if (!(ctx.d > x.re))
        throw std::invalid_argument("constraint_g: requires d > Re");
    const auto& cfg = ctx.cfg;
    const double am2 = cfg.alpha - 2.0;
    const double k = kPi * cfg.lambda_b;
    const double lam = cfg.lambda();
    const double ex = std::exp(-k * x.re * x.re);
    const double lam_c = lam * (1.0 - ex);
    const double lam_d = lam * ex;
    const double dr = ctx.d - x.re;

    ConstraintEval ev;
    ev.g = x.p_c(cfg) * 2.0 * kPi * lam_c * std::pow(dr, 2.0 - cfg.alpha) / am2 +
           cfg.p_d * 2.0 * kPi * lam_d * std::pow(ctx.r0, 2.0 - cfg.alpha) / am2;
    // [d/dRe, d/dC]
    ev.grad[1] = cfg.p_d * 2.0 * kPi * lam_c * std::pow(dr, 2.0 - cfg.alpha) / am2;
    ev.grad[0] = cfg.p_d * 2.0 * kPi * lam / am2 *
                 (x.power_ratio * (2.0 * k * x.re * ex * std::pow(dr, 2.0 - cfg.alpha) +
                                   (1.0 - ex) * am2 * std::pow(dr, 1.0 - cfg.alpha)) -
                  2.0 * k * x.re * ex * std::pow(ctx.r0, 2.0 - cfg.alpha));
    return ev;
}

double c_min(const ObjectiveContext& ctx, double re) {
    if (!(re > 0.0) || !(re < ctx.d)) throw std::invalid_argument("c_min: requires 0 < Re < d");
    const auto& cfg = ctx.cfg;
    const double am2 = cfg.alpha - 2.0;
    const double k = kPi * cfg.lambda_b;
    const double ex = std::exp(-k * re * re);
    const double dr = ctx.d - re;
    // dg/dRe = (P_d 2 pi lambda / (alpha-2)) * (C*K1 - K2); lambda cancels in the ratio.
    const double k1 = 2.0 * k * re * ex * std::pow(dr, 2.0 - cfg.alpha) +
                      (1.0 - ex) * am2 * std::pow(dr, 1.0 - cfg.alpha);
    const double k2 = 2.0 * k * re * ex * std::pow(ctx.r0, 2.0 - cfg.alpha);
    if (!(k1 > 0.0)) return kInf;  // degenerate C-coefficient: dg/dRe < 0 for every C
    return k2 / k1;
}

QuasiConcavityReport verify_quasiconcavity(const ObjectiveContext& ctx, int grid_resolution) {
    if (grid_resolution < 8)
        throw std::invalid_argument("verify_quasiconcavity: grid resolution must be >= 8 per axis");
    QuasiConcavityReport rep;
    rep.grid_resolution = grid_resolution;
    rep.max_eigenvalue = -kInf;
    constexpr double kTol = 1e-9;

    for (int i = 0; i < grid_resolution; ++i) {
        const double re = ctx.re_min + (ctx.re_max - ctx.re_min) * i / (grid_resolution - 1.0);
        for (int j = 0; j < grid_resolution; ++j) {
            const double c = 1.0 + (ctx.c_max - 1.0) * (j + 1.0) / grid_resolution;
            const ExclusionDesign x{re, c};
            const auto ev = log_objective(ctx, x);
            const double h11 = ev.hess_psi[0][0];
            const double h12 = ev.hess_psi[0][1];
            const double h22 = ev.hess_psi[1][1];
            const double tr = h11 + h22;
            const double det = h11 * h22 - h12 * h12;
            const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
            const double emax = 0.5 * (tr + disc);
            rep.max_eigenvalue = std::max(rep.max_eigenvalue, emax);
            if (emax > kTol) rep.violations.push_back({re, c, emax});
            if (!(h22 < 0.0) || !(h11 < 0.0) || !(h12 < 0.0)) ++rep.sign_claim_disagreements;

            const auto pc = paper_crosscheck(ctx, x, 0.0);
            const double mismatch =
                std::abs(pc.printed_a - pc.derived_a) / std::max(1.0, std::abs(pc.derived_a));
            rep.max_printed_a_mismatch_rel = std::max(rep.max_printed_a_mismatch_rel, mismatch);
        }
    }
    return rep;
}

PaperCrossCheck paper_crosscheck(const ObjectiveContext& ctx, const ExclusionDesign& x,
                                 double beta) {
    const auto& cfg = ctx.cfg;
    const auto t = d_terms(ctx, x);
    const double c = x.power_ratio;
    const double re = x.re;
    const double al = cfg.alpha;
    const double k = t.k;

    PaperCrossCheck out;
    out.derived_e = t.d_re;
    out.derived_a = t.d_rere;
    // Printed dD/dRe: (2a-2) C^2 w^(1-2a) + a e^(..) ((2-2a) Re^(1-2a) - 2k Re^(3-2a))
    out.printed_e = (2.0 * al - 2.0) * c * c * std::pow(t.w, 1.0 - 2.0 * al) +
                    t.a * t.ex *
                        ((2.0 - 2.0 * al) * std::pow(re, 1.0 - 2.0 * al) -
                         2.0 * k * std::pow(re, 3.0 - 2.0 * al));
    // Printed d2D/dRe2 carries -4 k^2 Re^(4-2a) where the derivation gives +.
    out.printed_a =
        (2.0 * al - 2.0) * (2.0 * al - 1.0) * c * c * std::pow(t.w, -2.0 * al) +
        t.a * t.ex *
            ((1.0 - 2.0 * al) * (2.0 - 2.0 * al) * std::pow(re, -2.0 * al) -
             (2.0 - 2.0 * al) * 2.0 * k * std::pow(re, 2.0 - 2.0 * al) -
             (3.0 - 2.0 * al) * 2.0 * k * std::pow(re, 2.0 - 2.0 * al) -
             4.0 * k * k * std::pow(re, 4.0 - 2.0 * al));

    // Lemma stationarity system as printed, D scaled by 2 pi lambda_b/(2a-2).
    const double p = 2.0 * al - 2.0;
    const double lam = cfg.lambda();
    const double lam_d = lam * t.ex;
    const double lam_c = lam - lam_d;
    const double d_lemma = c * c * 2.0 * kPi * cfg.lambda_b * std::pow(t.w, -p) / p +
                           2.0 * kPi * lam_d * std::pow(re, -p) / p;
    const double rterm = std::pow(ctx.r_ref, -2.0 * al);
    const double dr = ctx.d - re;
    out.lemma_residual_c =
        4.0 * c * kPi * lam_d * rterm * std::pow(re, -p) / (d_lemma * d_lemma * p) -
        beta * cfg.p_d * 2.0 * kPi * lam_c * std::pow(dr, 2.0 - al) / (al - 2.0);
    out.lemma_residual_re =
        -c * c * 2.0 * kPi / p * rterm *
            (p * cfg.lambda_b * c * c * std::pow(t.w, 1.0 - 2.0 * al) +
             lam * t.ex *
                 ((2.0 - 2.0 * al) * std::pow(re, 1.0 - 2.0 * al) -
                  2.0 * k * std::pow(re, 3.0 - 2.0 * al))) -
        beta * d_lemma * d_lemma *
            (cfg.p_d * 2.0 * kPi / (al - 2.0) *
             (c * ((al - 2.0) * std::pow(dr, 1.0 - al) * lam_c +
                   2.0 * k * re * std::pow(dr, 2.0 - al) * lam * t.ex) -
              lam_d * std::pow(ctx.r0, 2.0 - al) * 2.0 * k * re));
    return out;
}

std::optional<OracleResult> brute_force_oracle(const ObjectiveContext& ctx, int resolution) {
    if (resolution < 50)
        throw std::invalid_argument("brute_force_oracle: resolution must be >= 50 per axis");
    ctx.validate();
    std::optional<OracleResult> best;
    for (int i = 0; i < resolution; ++i) {
        const double re = ctx.re_min + (ctx.re_max - ctx.re_min) * i / (resolution - 1.0);
        for (int j = 0; j < resolution; ++j) {
            const double c = 1.0 + (ctx.c_max - 1.0) * (j + 1.0) / resolution;
            const ExclusionDesign x{re, c};
            const double g = constraint_g(ctx, x).g;
            if (g > ctx.i_d2d) continue;
            const double f = log_objective(ctx, x).f;
            if (!best || f > best->f) best = OracleResult{x, f, g};
        }
    }
    return best;
}

OptimizationResult solve(const ObjectiveContext& ctx) {
    ctx.validate();
    OptimizationResult res;
    int evals = 0;

    const double c_lo = 1.0 + kCFloorEps;
    const auto g_of = [&](double re, double c) {
        ++evals;
        return constraint_g(ctx, ExclusionDesign{re, c}).g;
    };
    const auto f_of = [&](double re, double c) {
        ++evals;
        return log_objective(ctx, ExclusionDesign{re, c}).f;
    };

    // Feasibility: Slater fast path at (re_min, 1+eps), then a coarse grid
    // minimum (g can decrease in Re below c_min, so the single point is not
    // conclusive on its own).
    constexpr int kGrid = 129;
    const auto re_at = [&](int i) {
        return ctx.re_min + (ctx.re_max - ctx.re_min) * i / (kGrid - 1.0);
    };
    bool feasible = g_of(ctx.re_min, c_lo) <= ctx.i_d2d;
    if (!feasible) {
        for (int i = 0; i < kGrid && !feasible; ++i)
            feasible = g_of(re_at(i), c_lo) <= ctx.i_d2d;
    }
    if (!feasible) {
        res.status = SolveStatus::Infeasible;
        res.iterations = evals;
        return res;
    }

    // Largest feasible C at a given Re; g is strictly increasing in C.
    const auto frontier = [&](double re) -> std::optional<double> {
        if (g_of(re, c_lo) > ctx.i_d2d) return std::nullopt;
        if (g_of(re, ctx.c_max) <= ctx.i_d2d) return ctx.c_max;
        double lo = c_lo, hi = ctx.c_max;
        for (int it = 0; it < 80 && (hi - lo) > 1e-13 * ctx.c_max; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g_of(re, mid) <= ctx.i_d2d ? lo : hi) = mid;
        }
        return lo;
    };
    const auto h = [&](double re) {
        const auto c = frontier(re);
        return c ? f_of(re, *c) : -kInf;
    };

    // Candidate set: refined frontier maximum, c_max/constraint corners, and
    // the box endpoints.
    double best_re = ctx.re_min, best_f = -kInf;
    {
        int besti = 0;
        double bestv = -kInf;
        for (int i = 0; i < kGrid; ++i) {
            const double v = h(re_at(i));
            if (v > bestv) {
                bestv = v;
                besti = i;
            }
        }
        const double lo = re_at(std::max(0, besti - 1));
        const double hi = re_at(std::min(kGrid - 1, besti + 1));
        const double re_ref = golden_max(lo, hi, 1e-6, h, evals);
        for (double cand : {re_ref, ctx.re_min, ctx.re_max}) {
            const double v = h(cand);
            if (v > best_f) {
                best_f = v;
                best_re = cand;
            }
        }
        // corner candidates: g(re, c_max) = I crossings
        double prev = g_of(re_at(0), ctx.c_max) - ctx.i_d2d;
        for (int i = 1; i < kGrid; ++i) {
            const double cur = g_of(re_at(i), ctx.c_max) - ctx.i_d2d;
            if ((prev <= 0.0) != (cur <= 0.0)) {
                double lo2 = re_at(i - 1), hi2 = re_at(i);
                for (int it = 0; it < 80 && (hi2 - lo2) > 1e-14; ++it) {
                    const double mid = 0.5 * (lo2 + hi2);
                    const bool mid_feas = g_of(mid, ctx.c_max) <= ctx.i_d2d;
                    const bool lo_feas = g_of(lo2, ctx.c_max) <= ctx.i_d2d;
                    (mid_feas == lo_feas ? lo2 : hi2) = mid;
                }
                const double re_corner = g_of(lo2, ctx.c_max) <= ctx.i_d2d ? lo2 : hi2;
                if (g_of(re_corner, ctx.c_max) <= ctx.i_d2d) {
                    const double v = f_of(re_corner, ctx.c_max);
                    if (v > best_f) {
                        best_f = v;
                        best_re = re_corner;
                    }
                }
            }
            prev = cur;
        }
    }

    const auto c_star_opt = frontier(best_re);
    double c_star = c_star_opt.value_or(c_lo);
    // Snap to exact bound values where the search landed within tolerance.
    if (ctx.c_max - c_star < 1e-7 * ctx.c_max) c_star = ctx.c_max;
    if (best_re - ctx.re_min < 1e-9) best_re = ctx.re_min;
    if (ctx.re_max - best_re < 1e-9) best_re = ctx.re_max;

    res.x_star = ExclusionDesign{best_re, c_star};
    const auto fe = log_objective(ctx, res.x_star);
    const auto ge = constraint_g(ctx, res.x_star);
    res.f_value = fe.f;
    res.g_value = ge.g;

    const double g_tol = 1e-9 * std::max(1.0, ctx.i_d2d);
    const bool act_g = std::abs(ge.g - ctx.i_d2d) <= std::max(g_tol, 1e-7 * ctx.i_d2d);
    const bool act_cmax = c_star == ctx.c_max;
    const bool act_remin = best_re == ctx.re_min;
    const bool act_remax = best_re == ctx.re_max;

    // Stationarity: grad f = beta grad g + mu_c e_C + mu_re (+-e_Re), active
    // multipliers only, solved in least squares.
    std::vector<Grad2> cols;
    if (act_g) cols.push_back(ge.grad);
    if (act_cmax) cols.push_back({0.0, 1.0});
    if (act_remin) cols.push_back({-1.0, 0.0});
    if (act_remax) cols.push_back({1.0, 0.0});
    std::vector<double> mult(cols.size(), 0.0);
    Grad2 resid = fe.grad_f;
    if (cols.size() == 1) {
        const auto& a = cols[0];
        const double denom = a[0] * a[0] + a[1] * a[1];
        mult[0] = (a[0] * fe.grad_f[0] + a[1] * fe.grad_f[1]) / denom;
        resid = {fe.grad_f[0] - mult[0] * a[0], fe.grad_f[1] - mult[0] * a[1]};
    } else if (cols.size() >= 2) {
        // two independent columns span R^2: exact solve with the first two
        const auto& a = cols[0];
        const auto& b = cols[1];
        const double det = a[0] * b[1] - a[1] * b[0];
        if (std::abs(det) > 1e-14) {
            mult[0] = (fe.grad_f[0] * b[1] - fe.grad_f[1] * b[0]) / det;
            mult[1] = (a[0] * fe.grad_f[1] - a[1] * fe.grad_f[0]) / det;
            resid = {0.0, 0.0};
        }
    }
    std::size_t idx = 0;
    if (act_g) res.beta = std::max(0.0, mult[idx++]);
    if (act_cmax) res.mu_c = mult[idx++];
    if (act_remin || act_remax) res.mu_re = mult[idx++];
    res.beta_psi = res.f_value > 0.0 ? res.beta / res.f_value : 0.0;

    const double gf_norm = std::hypot(fe.grad_f[0], fe.grad_f[1]);
    res.kkt.stationarity_rel_f = std::hypot(resid[0], resid[1]) / std::max(1e-300, gf_norm);
    // Independent recomputation on the log-objective scale.
    {
        Grad2 rpsi{fe.grad_psi[0], fe.grad_psi[1]};
        idx = 0;
        if (act_g) {
            const double b = res.beta / std::max(1e-300, res.f_value);
            rpsi[0] -= b * ge.grad[0];
            rpsi[1] -= b * ge.grad[1];
            ++idx;
        }
        if (act_cmax) rpsi[1] -= res.mu_c / std::max(1e-300, res.f_value);
        if (act_remin) rpsi[0] += res.mu_re / std::max(1e-300, res.f_value);
        if (act_remax) rpsi[0] -= res.mu_re / std::max(1e-300, res.f_value);
        const double gp_norm = std::hypot(fe.grad_psi[0], fe.grad_psi[1]);
        res.kkt.stationarity_rel_psi =
            std::hypot(rpsi[0], rpsi[1]) / std::max(1e-300, gp_norm);
    }
    res.kkt.primal_slack = std::max(0.0, ge.g - ctx.i_d2d);
    res.kkt.comp_slack = std::abs(res.beta * (ge.g - ctx.i_d2d));

    if (act_cmax || act_remin || act_remax)
        res.status = SolveStatus::BoundActive;
    else if (act_g)
        res.status = SolveStatus::ConstraintActive;
    else
        res.status = SolveStatus::Interior;
    res.iterations = evals;
    return res;
}

}  // namespace exzone::optimizer

#include "exzone/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "exzone/rng.hpp"

namespace exzone::geometry {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTau = 2.0 * std::numbers::pi;
}  // namespace

double distance(const Point2D& a, const Point2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double norm(const Point2D& p) { return std::hypot(p.x, p.y); }

double Annulus::area() const {
    if (!bounded()) return std::numeric_limits<double>::infinity();
    return kPi * (r_outer * r_outer - r_inner * r_inner);
}

bool Annulus::contains(const Point2D& p) const {
    const double r = distance(p, center);
    return r >= r_inner && r <= r_outer;
}

Annulus make_disk(double radius, Point2D center) {
    return make_annulus(0.0, radius, center);
}

Annulus make_annulus(double r_inner, double r_outer, Point2D center) {
    if (r_inner < 0.0 || !(r_outer > r_inner))
        throw std::invalid_argument("annulus requires 0 <= r_inner < r_outer");
    return Annulus{center, r_inner, r_outer};
}

PointSet sample_ppp(const Annulus& region, double density, std::uint64_t seed) {
    if (density < 0.0) throw std::invalid_argument("sample_ppp: density must be >= 0");
    if (region.r_inner < 0.0 || !(region.r_outer > region.r_inner))
        throw std::invalid_argument("sample_ppp: invalid region");

    PointSet out;
    out.density = density;
    out.region = region;
    if (density == 0.0) return out;
    if (!region.bounded())
        throw std::invalid_argument("sample_ppp: unbounded region with nonzero density");

    Rng rng(seed);
    const long n = rng.poisson(density * region.area());
    out.points.reserve(static_cast<std::size_t>(n));
    const double r0sq = region.r_inner * region.r_inner;
    const double r1sq = region.r_outer * region.r_outer;
    for (long i = 0; i < n; ++i) {
        const double r = std::sqrt(r0sq + rng.uniform() * (r1sq - r0sq));
        const double phi = kTau * rng.uniform();
        out.points.push_back({region.center.x + r * std::cos(phi),
                              region.center.y + r * std::sin(phi)});
    }
    return out;
}

HexLayout hex_layout(double cell_side, int count) {
    if (count < 1) throw std::invalid_argument("hex_layout: count must be >= 1");
    if (!(cell_side > 0.0)) throw std::invalid_argument("hex_layout: cell_side must be > 0");

    const double spacing = std::sqrt(3.0) * cell_side;
    // Enough lattice shells to cover `count` sites.
    int k = 1;
    while ((2 * k + 1) * (2 * k + 1) < 4 * count) ++k;
    k += 2;

    struct Cand {
        Point2D p;
        double r;
        double angle;
    };
    std::vector<Cand> cands;
    cands.reserve(static_cast<std::size_t>((2 * k + 1) * (2 * k + 1)));
    for (int i = -k; i <= k; ++i) {
        for (int j = -k; j <= k; ++j) {
            Point2D p{spacing * (i + 0.5 * j), spacing * (std::sqrt(3.0) / 2.0 * j)};
            double r = norm(p);
            double ang = std::atan2(p.y, p.x);
            if (ang < 0.0) ang += kTau;
            cands.push_back({p, r, ang});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.r != b.r) return a.r < b.r;
        return a.angle < b.angle;
    });

    HexLayout layout;
    layout.cell_side = cell_side;
    layout.count = count;
    layout.sites.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) layout.sites.push_back(cands[static_cast<std::size_t>(i)].p);
    layout.sites[0] = Point2D{0.0, 0.0};  // exact origin, no rounding residue
    return layout;
}

PointSet thin_hole_process(const PointSet& candidates, std::span<const Point2D> holes,
                           double hole_radius) {
    if (hole_radius < 0.0)
        throw std::invalid_argument("thin_hole_process: hole_radius must be >= 0");
    PointSet out;
    out.density = candidates.density;
    out.region = candidates.region;
    if (hole_radius == 0.0) {
        out.points = candidates.points;
        return out;
    }
    const double r2 = hole_radius * hole_radius;
    out.points.reserve(candidates.points.size());
    for (const auto& p : candidates.points) {
        bool keep = true;
        for (const auto& h : holes) {
            const double dx = p.x - h.x;
            const double dy = p.y - h.y;
            if (dx * dx + dy * dy <= r2) {
                keep = false;
                break;
            }
        }
        if (keep) out.points.push_back(p);
    }
    return out;
}

double nearest_site_distance(std::span<const Point2D> sites, const Point2D& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sites) best = std::min(best, distance(s, p));
    return best;
}

int nearest_site_index(std::span<const Point2D> sites, const Point2D& p) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const double d = distance(sites[i], p);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

Mode classify_mode(const Point2D& user, const HexLayout& layout, double re) {
    return classify_mode(user, std::span<const Point2D>(layout.sites), re);
}

Mode classify_mode(const Point2D& user, std::span<const Point2D> sites, double re) {
    if (re < 0.0) throw std::invalid_argument("classify_mode: re must be >= 0");
    return nearest_site_distance(sites, user) < re ? Mode::Cellular : Mode::D2D;
}

double campbell_moment(double density, double r_min, double exponent) {
    if (density < 0.0) throw std::invalid_argument("campbell_moment: density must be >= 0");
    if (!(exponent > 2.0))
        throw std::invalid_argument("campbell_moment: exponent must be > 2 (divergent integral)");
    if (!(r_min > 0.0))
        throw std::invalid_argument("campbell_moment: r_min must be > 0 (singular integral)");
    return kTau * density * std::pow(r_min, 2.0 - exponent) / (exponent - 2.0);
}

double campbell_moment_truncated(double density, double r_min, double exponent,
                                 double r_max) {
    if (!(r_max > r_min)) throw std::invalid_argument("campbell_moment_truncated: r_max <= r_min");
    if (density < 0.0) throw std::invalid_argument("campbell_moment_truncated: density must be >= 0");
    if (!(exponent > 2.0) || !(r_min > 0.0))
        throw std::invalid_argument("campbell_moment_truncated: exponent <= 2 or r_min <= 0");
    return kTau * density *
           (std::pow(r_min, 2.0 - exponent) - std::pow(r_max, 2.0 - exponent)) /
           (exponent - 2.0);
}

}  // namespace exzone::geometry

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace exzone::geometry {

struct Point2D {
    double x = 0.0;  // km
    double y = 0.0;  // km
};

double distance(const Point2D& a, const Point2D& b);
double norm(const Point2D& p);

// Annular sampling region.  r_outer may be infinite for the conceptual
// "everything beyond r_inner" region used by the closed forms.
struct Annulus {
    Point2D center{};
    double r_inner = 0.0;  // km, >= 0
    double r_outer = 0.0;  // km, > r_inner, may be +inf

    bool bounded() const { return r_outer < std::numeric_limits<double>::infinity(); }
    double area() const;
    bool contains(const Point2D& p) const;
};

Annulus make_disk(double radius, Point2D center = {});
Annulus make_annulus(double r_inner, double r_outer, Point2D center = {});

// Base-station sites on a triangular lattice with spacing sqrt(3)*cell_side,
// cropped to the `count` sites nearest the origin.  Origin site first.
struct HexLayout {
    std::vector<Point2D> sites;
    double cell_side = 0.0;  // km (hexagon circumradius R_c)
    int count = 0;
};

struct PointSet {
    std::vector<Point2D> points;
    double density = 0.0;  // per km^2
    Annulus region{};
};

enum class Mode { Cellular, D2D };

// Homogeneous PPP over a bounded annulus.  Deterministic for a fixed seed.
PointSet sample_ppp(const Annulus& region, double density, std::uint64_t seed);

HexLayout hex_layout(double cell_side, int count);

// Remove every candidate within hole_radius of any hole center.
PointSet thin_hole_process(const PointSet& candidates, std::span<const Point2D> holes,
                           double hole_radius);

double nearest_site_distance(std::span<const Point2D> sites, const Point2D& p);
int nearest_site_index(std::span<const Point2D> sites, const Point2D& p);

// Cellular iff strictly inside the exclusion disk of the nearest site; a user
// at distance exactly Re is D2D (the exclusion disk is open).
Mode classify_mode(const Point2D& user, const HexLayout& layout, double re);
Mode classify_mode(const Point2D& user, std::span<const Point2D> sites, double re);

// E[sum_i r_i^(-exponent)] over a PPP of the given density restricted to
// r >= r_min: 2*pi*density*r_min^(2-exponent)/(exponent-2).
double campbell_moment(double density, double r_min, double exponent);

// Same moment with a finite outer limit r_max; used to compare against
// truncated simulations without hiding the truncation.
double campbell_moment_truncated(double density, double r_min, double exponent,
                                 double r_max);

}  // namespace exzone::geometry

// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#include "maxrec/phantoms.hpp"

#include <cmath>

namespace maxrec {

namespace {

double sq(double v) { return v * v; }

// distance in the (x,y) plane from point p to segment a-b
double segment_distance_2d(double px, double py, double ax, double ay, double bx, double by)
{
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = ((px - ax) * dx + (py - ay) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

bool in_box_2d(double x, double y, double x0, double x1, double y0, double y1)
{
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
}

// 'T': horizontal bar [-0.55,0.55] x [0.45,0.7] plus stem [-0.12,0.12] x [-0.7,0.45]
bool glyph_t(double x, double y)
{
    return in_box_2d(x, y, -0.55, 0.55, 0.45, 0.7) || in_box_2d(x, y, -0.12, 0.12, -0.7, 0.45);
}

// 'Y': stem [-0.12,0.12] x [-0.7,0] plus two strokes of half-width 0.12
// from (0,0) to (+-0.5, 0.7)
bool glyph_y(double x, double y)
{
    if (in_box_2d(x, y, -0.12, 0.12, -0.7, 0.0))
        return true;
    if (segment_distance_2d(x, y, 0.0, 0.0, 0.5, 0.7) <= 0.12)
        return true;
    return segment_distance_2d(x, y, 0.0, 0.0, -0.5, 0.7) <= 0.12;
}

struct ContainsVisitor {
    double x, y, z;

    bool operator()(const Ball& b) const
    {
        return sq(x - b.center[0]) + sq(y - b.center[1]) + sq(z - b.center[2]) <
               sq(b.radius);
    }
    bool operator()(const BoxSlab& b) const
    {
        const double p[3] = {x, y, z};
        for (int a = 0; a < 3; ++a)
            if (p[a] <= b.lo[a] || p[a] >= b.hi[a])
                return false;
        return true;
    }
    bool operator()(const CylinderShell& c) const
    {
        const double p[3] = {x, y, z};
        double cr[2];
        int idx = 0;
        for (int a = 0; a < 3; ++a)
            if (a != c.axis)
                cr[idx++] = p[a];
        const double r2 = sq(cr[0] - c.cross_center[0]) + sq(cr[1] - c.cross_center[1]);
        return r2 > sq(c.r_inner) && r2 < sq(c.r_outer) &&
               std::abs(p[c.axis] - c.axis_center) < c.half_len;
    }
    bool operator()(const CappedCylinder& c) const
    {
        const double p[3] = {x, y, z};
        double cr[2];
        int idx = 0;
        for (int a = 0; a < 3; ++a)
            if (a != c.axis)
                cr[idx++] = p[a];
        const double r2 = sq(cr[0] - c.cross_center[0]) + sq(cr[1] - c.cross_center[1]);
        return r2 < sq(c.radius) && std::abs(p[c.axis] - c.axis_center) < c.half_len;
    }
    bool operator()(const GlyphExtrusion& g) const
    {
        if (z < g.z_lo || z > g.z_hi)
            return false;
        return g.letter == 'T' ? glyph_t(x, y) : glyph_y(x, y);
    }
};

// One piecewise branch of a phantom definition; first matching branch wins.
struct Piece {
    int component;
    double amplitude;
    RegionGeometry geometry;
    std::string label;
};

std::vector<Piece> phantom_pieces(PhantomId id)
{
    switch (id.test) {
    case 1:
        return {
            {0, 1.0, Ball{{0.4, 0.0, -0.3}, 0.35}, "sphere"},
            {1, 1.0, CylinderShell{1, {0.0, 0.0}, 0.4, 0.8, 0.0, 0.8}, "shell"},
            // max{0.4 x^2, (y-0.55)^2+(z-0.3)^2} < 0.3^2
            {2, 1.0, CappedCylinder{0, {0.55, 0.3}, 0.3, 0.0, 0.3 / std::sqrt(0.4)},
             "cylinder"},
        };
    case 2:
        return {
            {0, 2.0, Ball{{0.55, 0.3, 0.5}, 0.3}, "upper sphere"},
            {0, 1.0, Ball{{-0.55, 0.0, -0.5}, 0.3}, "lower sphere"},
            {1, 1.0, GlyphExtrusion{'T', -0.75, -0.3}, "letter T"},
            {2, 1.0, GlyphExtrusion{'Y', 0.3, 0.9}, "letter Y"},
        };
    default:
        return {
            // max{5|x+0.55|, |y|} < 0.9 and |z+0.4| < 0.3
            {0, 2.5, BoxSlab{{-0.73, -0.9, -0.7}, {-0.37, 0.9, -0.1}}, "E1 slab"},
            {0, 3.0, Ball{{0.55, 0.0, 0.4}, 0.3}, "E1 sphere"},
            {1, 2.5, BoxSlab{{-0.68, -0.9, -0.7}, {-0.32, 0.9, -0.1}}, "E2 vertical slab"},
            // max{5|x-0.5|, |z|} < 0.9 and |y-0.5| < 0.3
            {1, 3.0, BoxSlab{{0.32, 0.2, -0.9}, {0.68, 0.8, 0.9}}, "E2 horizontal slab"},
            {2, 2.0, Ball{{0.5, 0.4, 0.3}, 0.3}, "E3 sphere"},
        };
    }
}

} // namespace

bool region_contains(const RegionGeometry& geom, double x, double y, double z)
{
    return std::visit(ContainsVisitor{x, y, z}, geom);
}

double mu_profile(double x, double y, double z)
{
    const double r2 = x * x + y * y + z * z;
    if (r2 >= 0.25)
        return 1.0;
    return 1.0 / (1.0 + 0.1 * std::exp(-r2 / (0.25 - r2)));
}

ScalarGrid mu_field(const Grid3& grid)
{
    ScalarGrid out(grid);
    for (int k = 0; k < grid.n[2]; ++k)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int i = 0; i < grid.n[0]; ++i)
                out.at(i, j, k) = mu_profile(grid.coord(0, i), grid.coord(1, j), grid.coord(2, k));
    return out;
}

ScalarGrid eps_field(const Grid3& grid)
{
    return ScalarGrid(grid, 1.0);
}

MediumFields medium_fields(const Grid3& grid)
{
    return {mu_field(grid), eps_field(grid)};
}

VectorGrid phantom(PhantomId id, const Grid3& grid)
{
    const auto pieces = phantom_pieces(id);
    VectorGrid out(grid);
    for (int k = 0; k < grid.n[2]; ++k)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int i = 0; i < grid.n[0]; ++i) {
                const double x = grid.coord(0, i), y = grid.coord(1, j), z = grid.coord(2, k);
                const auto p = grid.index(i, j, k);
                bool seen[3] = {false, false, false};
                for (const Piece& pc : pieces) {
                    if (seen[pc.component])
                        continue;
                    if (region_contains(pc.geometry, x, y, z)) {
                        out.comp[pc.component][p] = pc.amplitude;
                        seen[pc.component] = true;
                    }
                }
            }
    return out;
}

std::vector<RegionSpec> phantom_regions(PhantomId id)
{
    std::vector<RegionSpec> out;
    for (const Piece& pc : phantom_pieces(id))
        out.push_back({pc.geometry, pc.label, pc.component, pc.amplitude});
    return out;
}

PeakError region_peak_error(const VectorGrid& field, const RegionSpec& region)
{
    const Grid3& g = field.grid;
    bool any = false;
    double peak = 0.0;
    for (int k = 0; k < g.n[2]; ++k)
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i) {
                const double x = g.coord(0, i), y = g.coord(1, j), z = g.coord(2, k);
                if (!region_contains(region.geometry, x, y, z))
                    continue;
                const double v = field.comp[region.component][g.index(i, j, k)];
                if (!any || v > peak)
                    peak = v;
                any = true;
            }
    if (!any)
        throw DomainError("region_peak_error: region '" + region.label +
                          "' contains no grid node");
    return {peak, std::abs(peak - region.amplitude) / region.amplitude};
}

} // namespace maxrec

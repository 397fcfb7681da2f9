// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark media and true initial fields (three standard test cases), plus
// the per-region peak error metric used to score reconstructions.

#ifndef MAXREC_PHANTOMS_HPP
#define MAXREC_PHANTOMS_HPP

#include <string>
#include <variant>
#include <vector>

#include "maxrec/grid.hpp"

namespace maxrec {

struct Ball {
    std::array<double, 3> center;
    double radius;
};

// axis-aligned box
struct BoxSlab {
    std::array<double, 3> lo, hi;
};

// hollow tube along `axis`: r_inner < cross-radius < r_outer, |axis coord| < half_len
struct CylinderShell {
    int axis;
    std::array<double, 2> cross_center; // in the two non-axis coordinates, ascending axis order
    double r_inner, r_outer;
    double axis_center, half_len;
};

// solid tube along `axis` capped by an axis interval
struct CappedCylinder {
    int axis;
    std::array<double, 2> cross_center;
    double radius;
    double axis_center, half_len;
};

// letter glyph in the (x,y) plane extruded over a z slab
struct GlyphExtrusion {
    char letter; // 'T' or 'Y'
    double z_lo, z_hi;
};

using RegionGeometry = std::variant<Ball, BoxSlab, CylinderShell, CappedCylinder, GlyphExtrusion>;

struct RegionSpec {
    RegionGeometry geometry;
    std::string label;
    int component;    // which field component this region scores
    double amplitude; // the true value inside
};

bool region_contains(const RegionGeometry& geom, double x, double y, double z);

struct PhantomId {
    int test;
    explicit PhantomId(int t) : test(t)
    {
        if (t < 1 || t > 3)
            throw DomainError("PhantomId: test number must be 1, 2 or 3");
    }
};

// mu(x) = 1/(1 + 0.1 exp(-|x|^2/(0.25 - |x|^2))) inside |x| < 0.5, else 1
double mu_profile(double x, double y, double z);

ScalarGrid mu_field(const Grid3& grid);
ScalarGrid eps_field(const Grid3& grid); // identically 1
MediumFields medium_fields(const Grid3& grid);

// The true initial field, nodal indicator sampling (no anti-aliasing);
// zero outside every region.
VectorGrid phantom(PhantomId id, const Grid3& grid);

// Scoring regions with their amplitudes, in reporting order.
std::vector<RegionSpec> phantom_regions(PhantomId id);

struct PeakError {
    double peak;
    double rel_error;
};

// max of the region's component over grid nodes inside the region,
// and |peak - amplitude| / amplitude
PeakError region_peak_error(const VectorGrid& field, const RegionSpec& region);

} // namespace maxrec

#endif

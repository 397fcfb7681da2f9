// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXREC_GRID_HPP
#define MAXREC_GRID_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "maxrec/errors.hpp"

namespace maxrec {

// Uniform node-centered Cartesian grid; node (i,j,k) sits at lo + i*h.
struct Grid3 {
    std::array<double, 3> lo{};
    std::array<double, 3> hi{};
    std::array<int, 3> n{};
    std::array<double, 3> h{};

    Grid3() = default;
    Grid3(std::array<double, 3> lo_, std::array<double, 3> hi_, std::array<int, 3> n_)
        : lo(lo_), hi(hi_), n(n_)
    {
        for (int a = 0; a < 3; ++a) {
            if (n[a] < 5)
                throw DomainError("Grid3: need at least 5 nodes per axis");
            if (!(hi[a] > lo[a]))
                throw DomainError("Grid3: extent must be positive");
            h[a] = (hi[a] - lo[a]) / (n[a] - 1);
        }
    }

    static Grid3 cube(double lo, double hi, int n)
    {
        return Grid3({lo, lo, lo}, {hi, hi, hi}, {n, n, n});
    }

    std::int64_t size() const
    {
        return static_cast<std::int64_t>(n[0]) * n[1] * n[2];
    }
    // x-fastest linear index
    std::int64_t index(int i, int j, int k) const
    {
        return i + static_cast<std::int64_t>(n[0]) * (j + static_cast<std::int64_t>(n[1]) * k);
    }
    double coord(int axis, int i) const { return lo[axis] + i * h[axis]; }
    double cell_volume() const { return h[0] * h[1] * h[2]; }

    bool same_shape(const Grid3& o) const { return n == o.n; }

    friend bool operator==(const Grid3&, const Grid3&) = default;
};

// Scalar field on a Grid3, x-fastest storage.
struct ScalarGrid {
    Grid3 grid;
    std::vector<double> v;

    ScalarGrid() = default;
    explicit ScalarGrid(const Grid3& g, double fill = 0.0)
        : grid(g), v(static_cast<std::size_t>(g.size()), fill) {}

    double& at(int i, int j, int k) { return v[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return v[grid.index(i, j, k)]; }
};

// Three-component field; components stored as separate scalar arrays.
struct VectorGrid {
    Grid3 grid;
    std::array<std::vector<double>, 3> comp;

    VectorGrid() = default;
    explicit VectorGrid(const Grid3& g, double fill = 0.0) : grid(g)
    {
        for (auto& c : comp)
            c.assign(static_cast<std::size_t>(g.size()), fill);
    }

    double& at(int c, int i, int j, int k) { return comp[c][grid.index(i, j, k)]; }
    double at(int c, int i, int j, int k) const { return comp[c][grid.index(i, j, k)]; }
};

// Scalar permeability and permittivity sampled on the same grid.
struct MediumFields {
    ScalarGrid mu;
    ScalarGrid eps;

    void validate() const
    {
        for (double m : mu.v)
            if (!(m > 0.0))
                throw MediumError("MediumFields: mu must be positive everywhere");
        for (double e : eps.v)
            if (!(e > 0.0))
                throw MediumError("MediumFields: eps must be positive everywhere");
    }
};

// Face identifiers in storage order.
enum class Face : int { XLo = 0, XHi, YLo, YHi, ZLo, ZHi };

inline int face_axis(int f) { return f / 2; }          // normal axis
inline bool face_is_high(int f) { return (f % 2) == 1; }
inline double face_normal_sign(int f) { return face_is_high(f) ? 1.0 : -1.0; }

// In-plane axes of a face, in increasing axis order.
inline std::array<int, 2> face_plane_axes(int f)
{
    switch (face_axis(f)) {
    case 0: return {1, 2};
    case 1: return {0, 2};
    default: return {0, 1};
    }
}

// Per-face value triples on the boundary of a grid. Every face stores all
// of its nodes, so edge and corner nodes appear on each touching face.
// Within a face: first in-plane axis fastest, components minor.
struct BoundaryTrace {
    Grid3 grid; // the volume grid this trace belongs to
    std::array<std::vector<double>, 6> face;

    BoundaryTrace() = default;
    explicit BoundaryTrace(const Grid3& g) : grid(g)
    {
        for (int f = 0; f < 6; ++f) {
            const auto pl = face_plane_axes(f);
            face[f].assign(static_cast<std::size_t>(3) * g.n[pl[0]] * g.n[pl[1]], 0.0);
        }
    }

    std::size_t face_nodes(int f) const
    {
        const auto pl = face_plane_axes(f);
        return static_cast<std::size_t>(grid.n[pl[0]]) * grid.n[pl[1]];
    }
    // index within face f of in-plane node (u,v), component c
    std::size_t face_index(int f, int u, int v, int c) const
    {
        const auto pl = face_plane_axes(f);
        return 3 * (u + static_cast<std::size_t>(grid.n[pl[0]]) * v) + c;
    }
    // total scalars across all faces
    std::size_t total_scalars() const
    {
        std::size_t s = 0;
        for (int f = 0; f < 6; ++f)
            s += face[f].size();
        return s;
    }
};

} // namespace maxrec

#endif

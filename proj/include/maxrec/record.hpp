// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// Boundary measurement records: container, multiplicative noise, projection
// onto the time basis, and the MXTDR1 file format.

#ifndef MAXREC_RECORD_HPP
#define MAXREC_RECORD_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "maxrec/basis.hpp"
#include "maxrec/grid.hpp"

namespace maxrec {

enum class TraceVariant { NormalDerivative, TangentialCurl };

// Time series of Dirichlet (f) and Neumann (g) traces on the observation
// boundary. Flat sample order, used by both noise injection and the file
// format: F block then G block; within each, time-major, face-major,
// node-major, component-minor.
struct BoundaryRecord {
    Grid3 grid;
    TimeGrid time;
    std::vector<BoundaryTrace> f; // one per sample time
    std::vector<BoundaryTrace> g;

    BoundaryRecord() = default;
    BoundaryRecord(const Grid3& grid_, const TimeGrid& time_)
        : grid(grid_), time(time_), f(time_.num_samples, BoundaryTrace(grid_)),
          g(time_.num_samples, BoundaryTrace(grid_))
    {
    }

    std::size_t scalars_per_block() const
    {
        return f.empty() ? 0 : f.size() * f.front().total_scalars();
    }
};

struct NoiseSpec {
    double delta = 0.0;
    std::uint64_t seed = 0;

    NoiseSpec() = default;
    NoiseSpec(double d, std::uint64_t s) : delta(d), seed(s)
    {
        if (d < 0.0)
            throw DomainError("NoiseSpec: noise level must be >= 0");
    }
};

// s -> s * (1 + delta * r) per scalar sample, r uniform on [-1,1), drawn
// in the documented flat order from xoshiro256** seeded with spec.seed.
// delta == 0 returns the record unchanged.
BoundaryRecord add_noise(const BoundaryRecord& record, const NoiseSpec& spec);

// Boundary mode coefficients f_m, g_m for m = 0..N, shaped like one trace.
struct ModeData {
    Grid3 grid;
    int order = 0;
    std::vector<BoundaryTrace> f;
    std::vector<BoundaryTrace> g;
};

// Apply the time projection independently at every boundary node/component.
ModeData project_record(const BoundaryRecord& record, const BasisSet& basis);

// MXTDR1 container: magic "MXTDR1\n", one JSON header line, then raw
// IEEE-754 64-bit little-endian payload in the documented order.
void save_record(const BoundaryRecord& record, const std::filesystem::path& path);
BoundaryRecord load_record(const std::filesystem::path& path);

} // namespace maxrec

#endif

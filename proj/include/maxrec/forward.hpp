// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// Explicit leapfrog solver for eps * E_tt = -curl(mu^{-1} curl E) on a
// padded domain enclosing the observation cube, recording boundary traces
// on the observation grid at the sample times.

#ifndef MAXREC_FORWARD_HPP
#define MAXREC_FORWARD_HPP

#include <optional>

#include "maxrec/grid.hpp"
#include "maxrec/record.hpp"

namespace maxrec {

struct ForwardConfig {
    double padded_half_extent = 2.5; // target; actual extent rounds outward to nodes
    double final_time = 2.5;
    int num_samples = 73;
    int substeps_per_observation = 1;
    TraceVariant trace_variant = TraceVariant::NormalDerivative;
};

// The padded grid G: same spacing as `omega`, extended outward by whole
// node steps so the observation nodes are a subset of G's nodes. Returns
// the grid and the per-axis index offset of omega within it.
struct PaddedGrid {
    Grid3 grid;
    std::array<int, 3> offset;
};
PaddedGrid padded_grid(const Grid3& omega, double half_extent);

// Conservative stability bound h / (c_max * sqrt(3)) with
// c_max = max over nodes of 1/sqrt(mu * eps).
double cfl_max_dt(double h, const MediumFields& medium);

struct WaveState {
    VectorGrid e_prev, e_curr;
    int step_index = 0;
};

// Second-order start with zero initial velocity:
// E^1 = E^0 - dt^2/2 * eps^{-1} curl_curl(E^0).
WaveState bootstrap(const VectorGrid& e0, const MediumFields& medium, double dt_sim);

// One leapfrog step; homogeneous Dirichlet held on the outer boundary.
void step(WaveState& state, const MediumFields& medium, double dt_sim);

// Discrete energy at the state's half step (midpoint discretization of
// eps|E_t|^2 + mu^{-1}|curl E|^2), used by drift checks.
double wave_energy(const WaveState& state, const MediumFields& medium, double dt_sim);

// Run the forward problem from initial data on the padded grid and record
// the Dirichlet and Neumann traces on the observation cube at each sample
// time. `medium` lives on the padded grid.
BoundaryRecord simulate(const VectorGrid& e0_padded, const Grid3& omega,
                        const std::array<int, 3>& offset, const MediumFields& medium,
                        const ForwardConfig& config);

} // namespace maxrec

#endif

// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// Discrete spatial operators on nodal grids: curl, curl-curl with variable
// mu, boundary traces, Sobolev derivative stencils, and exact transposes of
// all of them. Discrete inner products use uniform weight h1*h2*h3 in the
// volume and the face area element on faces; the weighted transposes
// (transpose_apply) are defined relative to those products.

#ifndef MAXREC_OPERATORS_HPP
#define MAXREC_OPERATORS_HPP

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "maxrec/grid.hpp"

namespace maxrec {

// d^order/d(axis)^order of one scalar component; `transpose` applies the
// exact matrix transpose instead.
void axis_derivative(const Grid3& grid, const std::vector<double>& in, std::vector<double>& out,
                     int axis, int order, bool transpose = false);

VectorGrid curl(const VectorGrid& v);
VectorGrid curl_transpose(const VectorGrid& w);

// curl(mu^{-1} curl v)
VectorGrid curl_curl(const VectorGrid& v, const MediumFields& medium);
VectorGrid curl_curl_transpose(const VectorGrid& w, const MediumFields& medium);

BoundaryTrace dirichlet_trace(const VectorGrid& v);
BoundaryTrace neumann_trace(const VectorGrid& v);
// (curl v) x nu, the alternate first-derivative trace
BoundaryTrace tangential_curl_trace(const VectorGrid& v);

// Plain matrix transposes of the traces (scatter face values into the
// volume, no quadrature weights).
VectorGrid dirichlet_trace_scatter(const BoundaryTrace& w);
VectorGrid neumann_trace_scatter(const BoundaryTrace& w);
VectorGrid tangential_curl_trace_scatter(const BoundaryTrace& w);

using Alpha = std::array<int, 3>;

// Multi-indices with |alpha| <= 3, the zero index first.
const std::vector<Alpha>& h3_alphas();

VectorGrid d_alpha(const VectorGrid& v, const Alpha& alpha);
VectorGrid d_alpha_transpose(const VectorGrid& w, const Alpha& alpha);

// h^3-weighted volume product over the three components
double l2_inner(const VectorGrid& u, const VectorGrid& v);
double l2_norm(const VectorGrid& u);
// face-area-weighted product over all six faces
double face_inner(const BoundaryTrace& a, const BoundaryTrace& b);
// discrete H^3 product: sum over |alpha| <= 3 of <D^a u, D^a v>
double h3_inner(const VectorGrid& u, const VectorGrid& v);

// ---- registered weighted transposes -------------------------------------

using OpResult = std::variant<VectorGrid, BoundaryTrace>;

struct RegisteredOperator {
    std::string name;
    std::function<OpResult(const VectorGrid&)> forward;
    // transpose relative to the weighted products above
    std::function<VectorGrid(const OpResult&)> transpose;
};

// curl, curl_curl, both traces, and every D^alpha
std::vector<RegisteredOperator> operator_registry(const MediumFields& medium);

// Weighted transpose lookup by name; unknown names are a configuration error.
VectorGrid transpose_apply(std::string_view op_name, const OpResult& w,
                           const MediumFields& medium);

} // namespace maxrec

#endif

// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// Second-order finite-difference stencils for first, second and third
// derivatives on a uniform line: central rows in the interior, one-sided
// rows at the ends. Transposes are exact by construction (the same row
// table applied as a scatter).

#ifndef MAXREC_STENCIL_HPP
#define MAXREC_STENCIL_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace maxrec {

struct StencilRow {
    int count = 0;
    std::array<int, 5> col{};
    std::array<double, 5> coeff{};
};

// Row i of the order-k derivative operator on an n-point line with spacing h.
StencilRow stencil_row(int n, double h, int order, int i);

// Precomputed row table for one (n, h, order) combination.
class AxisStencil {
public:
    AxisStencil() = default;
    AxisStencil(int n, double h, int order);

    int line_length() const { return n_; }
    int order() const { return order_; }
    const StencilRow& row(int i) const { return rows_[i]; }

    // y[i] = sum_r coeff * x[col], along a strided line
    void apply(const double* x, double* y, std::ptrdiff_t stride) const;
    // y[col] += coeff * x[i] (the exact transpose), y must be zeroed by caller
    void apply_transpose(const double* x, double* y, std::ptrdiff_t stride) const;

private:
    int n_ = 0;
    int order_ = 0;
    std::vector<StencilRow> rows_;
};

} // namespace maxrec

#endif

// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#include "maxrec/stencil.hpp"

#include <string>

#include "maxrec/errors.hpp"

namespace maxrec {

namespace {

StencilRow make_row(std::initializer_list<int> cols, std::initializer_list<double> cfs,
                    double scale)
{
    StencilRow r;
    auto ci = cols.begin();
    auto fi = cfs.begin();
    for (; ci != cols.end(); ++ci, ++fi) {
        r.col[r.count] = *ci;
        r.coeff[r.count] = *fi * scale;
        ++r.count;
    }
    return r;
}

} // namespace

StencilRow stencil_row(int n, double h, int order, int i)
{
    switch (order) {
    case 1: {
        if (n < 3)
            throw ConfigError("stencil_row: first derivative needs n >= 3");
        const double c = 1.0 / (2.0 * h);
        if (i == 0)
            return make_row({0, 1, 2}, {-3.0, 4.0, -1.0}, c);
        if (i == n - 1)
            return make_row({n - 1, n - 2, n - 3}, {3.0, -4.0, 1.0}, c);
        return make_row({i - 1, i + 1}, {-1.0, 1.0}, c);
    }
    case 2: {
        if (n < 4)
            throw ConfigError("stencil_row: second derivative needs n >= 4");
        const double c = 1.0 / (h * h);
        if (i == 0)
            return make_row({0, 1, 2, 3}, {2.0, -5.0, 4.0, -1.0}, c);
        if (i == n - 1)
            return make_row({n - 1, n - 2, n - 3, n - 4}, {2.0, -5.0, 4.0, -1.0}, c);
        return make_row({i - 1, i, i + 1}, {1.0, -2.0, 1.0}, c);
    }
    case 3: {
        if (n < 5)
            throw ConfigError("stencil_row: third derivative needs n >= 5");
        const double c = 1.0 / (h * h * h);
        if (i == 0)
            return make_row({0, 1, 2, 3, 4}, {-2.5, 9.0, -12.0, 7.0, -1.5}, c);
        if (i == 1)
            return make_row({0, 1, 2, 3, 4}, {-1.5, 5.0, -6.0, 3.0, -0.5}, c);
        if (i == n - 1)
            return make_row({n - 1, n - 2, n - 3, n - 4, n - 5}, {2.5, -9.0, 12.0, -7.0, 1.5}, c);
        if (i == n - 2)
            return make_row({n - 1, n - 2, n - 3, n - 4, n - 5}, {1.5, -5.0, 6.0, -3.0, 0.5}, c);
        return make_row({i - 2, i - 1, i + 1, i + 2}, {-0.5, 1.0, -1.0, 0.5}, c);
    }
    default:
        throw ConfigError("stencil_row: unsupported derivative order " + std::to_string(order));
    }
}

AxisStencil::AxisStencil(int n, double h, int order) : n_(n), order_(order)
{
    rows_.reserve(n);
    for (int i = 0; i < n; ++i)
        rows_.push_back(stencil_row(n, h, order, i));
}

void AxisStencil::apply(const double* x, double* y, std::ptrdiff_t stride) const
{
    for (int i = 0; i < n_; ++i) {
        const StencilRow& r = rows_[i];
        double acc = 0.0;
        for (int k = 0; k < r.count; ++k)
            acc += r.coeff[k] * x[r.col[k] * stride];
        y[i * stride] = acc;
    }
}

void AxisStencil::apply_transpose(const double* x, double* y, std::ptrdiff_t stride) const
{
    for (int i = 0; i < n_; ++i) {
        const StencilRow& r = rows_[i];
        const double xi = x[i * stride];
        for (int k = 0; k < r.count; ++k)
            y[r.col[k] * stride] += r.coeff[k] * xi;
    }
}

} // namespace maxrec

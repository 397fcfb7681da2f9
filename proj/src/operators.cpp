// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#include "maxrec/operators.hpp"

#include <algorithm>
#include <cmath>

#include "maxrec/stencil.hpp"

namespace maxrec {

namespace {

void check_medium(const VectorGrid& v, const MediumFields& medium)
{
    if (!v.grid.same_shape(medium.mu.grid))
        throw ShapeError("curl_curl: medium grid does not match field grid");
    for (double m : medium.mu.v)
        if (!(m > 0.0))
            throw MediumError("curl_curl: mu must be positive everywhere");
}

// Visit every line of `grid` along `axis`: calls fn(base_index, stride).
template <typename Fn>
void for_each_line(const Grid3& grid, int axis, Fn&& fn)
{
    const int n0 = grid.n[0], n1 = grid.n[1], n2 = grid.n[2];
    const std::int64_t sx = 1, sy = n0, sz = static_cast<std::int64_t>(n0) * n1;
    switch (axis) {
    case 0:
        for (int k = 0; k < n2; ++k)
            for (int j = 0; j < n1; ++j)
                fn(j * sy + k * sz, sx);
        break;
    case 1:
        for (int k = 0; k < n2; ++k)
            for (int i = 0; i < n0; ++i)
                fn(i + k * sz, sy);
        break;
    default:
        for (int j = 0; j < n1; ++j)
            for (int i = 0; i < n0; ++i)
                fn(i + j * sy, sz);
        break;
    }
}

void axis_apply(const Grid3& grid, const double* in, double* out, int axis, int order,
                bool transpose)
{
    const AxisStencil st(grid.n[axis], grid.h[axis], order);
    if (!transpose) {
        for_each_line(grid, axis, [&](std::int64_t base, std::int64_t stride) {
            st.apply(in + base, out + base, stride);
        });
    } else {
        for_each_line(grid, axis, [&](std::int64_t base, std::int64_t stride) {
            st.apply_transpose(in + base, out + base, stride);
        });
    }
}

} // namespace

void axis_derivative(const Grid3& grid, const std::vector<double>& in, std::vector<double>& out,
                     int axis, int order, bool transpose)
{
    if (static_cast<std::int64_t>(in.size()) != grid.size())
        throw ShapeError("axis_derivative: input size does not match grid");
    out.assign(in.size(), 0.0);
    axis_apply(grid, in.data(), out.data(), axis, order, transpose);
}

VectorGrid curl(const VectorGrid& v)
{
    const Grid3& g = v.grid;
    VectorGrid out(g);
    std::vector<double> d(static_cast<std::size_t>(g.size()));

    auto add = [&](int out_c, int axis, const std::vector<double>& src, double sign) {
        std::fill(d.begin(), d.end(), 0.0);
        axis_apply(g, src.data(), d.data(), axis, 1, false);
        double* o = out.comp[out_c].data();
        for (std::size_t p = 0; p < d.size(); ++p)
            o[p] += sign * d[p];
    };
    add(0, 1, v.comp[2], 1.0);  // dy vz
    add(0, 2, v.comp[1], -1.0); // -dz vy
    add(1, 2, v.comp[0], 1.0);  // dz vx
    add(1, 0, v.comp[2], -1.0); // -dx vz
    add(2, 0, v.comp[1], 1.0);  // dx vy
    add(2, 1, v.comp[0], -1.0); // -dy vx
    return out;
}

VectorGrid curl_transpose(const VectorGrid& w)
{
    const Grid3& g = w.grid;
    VectorGrid out(g);
    std::vector<double> d(static_cast<std::size_t>(g.size()));

    auto add = [&](int out_c, int axis, const std::vector<double>& src, double sign) {
        std::fill(d.begin(), d.end(), 0.0);
        axis_apply(g, src.data(), d.data(), axis, 1, true);
        double* o = out.comp[out_c].data();
        for (std::size_t p = 0; p < d.size(); ++p)
            o[p] += sign * d[p];
    };
    // rows of curl read component pairs; the transpose scatters them back
    add(0, 2, w.comp[1], 1.0);  // DzT wy
    add(0, 1, w.comp[2], -1.0); // -DyT wz
    add(1, 0, w.comp[2], 1.0);  // DxT wz
    add(1, 2, w.comp[0], -1.0); // -DzT wx
    add(2, 1, w.comp[0], 1.0);  // DyT wx
    add(2, 0, w.comp[1], -1.0); // -DxT wy
    return out;
}

VectorGrid curl_curl(const VectorGrid& v, const MediumFields& medium)
{
    check_medium(v, medium);
    VectorGrid c = curl(v);
    const double* mu = medium.mu.v.data();
    for (int comp = 0; comp < 3; ++comp) {
        double* p = c.comp[comp].data();
        for (std::int64_t q = 0; q < v.grid.size(); ++q)
            p[q] /= mu[q];
    }
    return curl(c);
}

VectorGrid curl_curl_transpose(const VectorGrid& w, const MediumFields& medium)
{
    check_medium(w, medium);
    VectorGrid c = curl_transpose(w);
    const double* mu = medium.mu.v.data();
    for (int comp = 0; comp < 3; ++comp) {
        double* p = c.comp[comp].data();
        for (std::int64_t q = 0; q < w.grid.size(); ++q)
            p[q] /= mu[q];
    }
    return curl_transpose(c);
}

namespace {

// Iterate all nodes of face f: fn(u, v, i, j, k).
template <typename Fn>
void for_each_face_node(const Grid3& g, int f, Fn&& fn)
{
    const int axis = face_axis(f);
    const auto pl = face_plane_axes(f);
    const int fixed = face_is_high(f) ? g.n[axis] - 1 : 0;
    int ijk[3];
    ijk[axis] = fixed;
    for (int vv = 0; vv < g.n[pl[1]]; ++vv) {
        ijk[pl[1]] = vv;
        for (int uu = 0; uu < g.n[pl[0]]; ++uu) {
            ijk[pl[0]] = uu;
            fn(uu, vv, ijk[0], ijk[1], ijk[2]);
        }
    }
}

} // namespace

BoundaryTrace dirichlet_trace(const VectorGrid& v)
{
    BoundaryTrace out(v.grid);
    for (int f = 0; f < 6; ++f) {
        for_each_face_node(v.grid, f, [&](int u, int w, int i, int j, int k) {
            const auto p = v.grid.index(i, j, k);
            for (int c = 0; c < 3; ++c)
                out.face[f][out.face_index(f, u, w, c)] = v.comp[c][p];
        });
    }
    return out;
}

VectorGrid dirichlet_trace_scatter(const BoundaryTrace& w)
{
    VectorGrid out(w.grid);
    for (int f = 0; f < 6; ++f) {
        for_each_face_node(w.grid, f, [&](int u, int vv, int i, int j, int k) {
            const auto p = w.grid.index(i, j, k);
            for (int c = 0; c < 3; ++c)
                out.comp[c][p] += w.face[f][w.face_index(f, u, vv, c)];
        });
    }
    return out;
}

namespace {

// one-sided 3-point outward normal derivative coefficients at depths 0,1,2
constexpr double kNeumann0 = 3.0, kNeumann1 = -4.0, kNeumann2 = 1.0;

} // namespace

BoundaryTrace neumann_trace(const VectorGrid& v)
{
    const Grid3& g = v.grid;
    BoundaryTrace out(g);
    for (int f = 0; f < 6; ++f) {
        const int axis = face_axis(f);
        if (g.n[axis] < 3)
            throw ShapeError("neumann_trace: need at least 3 nodes along the normal axis");
        const double c = 1.0 / (2.0 * g.h[axis]);
        // inward step in the linear index
        std::int64_t stride = 1;
        if (axis == 1) stride = g.n[0];
        if (axis == 2) stride = static_cast<std::int64_t>(g.n[0]) * g.n[1];
        if (face_is_high(f)) stride = -stride;
        for_each_face_node(g, f, [&](int u, int w, int i, int j, int k) {
            const auto p = g.index(i, j, k);
            for (int comp = 0; comp < 3; ++comp) {
                const double* x = v.comp[comp].data();
                out.face[f][out.face_index(f, u, w, comp)] =
                    c * (kNeumann0 * x[p] + kNeumann1 * x[p + stride] + kNeumann2 * x[p + 2 * stride]);
            }
        });
    }
    return out;
}

VectorGrid neumann_trace_scatter(const BoundaryTrace& w)
{
    const Grid3& g = w.grid;
    VectorGrid out(g);
    for (int f = 0; f < 6; ++f) {
        const int axis = face_axis(f);
        const double c = 1.0 / (2.0 * g.h[axis]);
        std::int64_t stride = 1;
        if (axis == 1) stride = g.n[0];
        if (axis == 2) stride = static_cast<std::int64_t>(g.n[0]) * g.n[1];
        if (face_is_high(f)) stride = -stride;
        for_each_face_node(g, f, [&](int u, int vv, int i, int j, int k) {
            const auto p = g.index(i, j, k);
            for (int comp = 0; comp < 3; ++comp) {
                const double wv = w.face[f][w.face_index(f, u, vv, comp)];
                double* x = out.comp[comp].data();
                x[p] += c * kNeumann0 * wv;
                x[p + stride] += c * kNeumann1 * wv;
                x[p + 2 * stride] += c * kNeumann2 * wv;
            }
        });
    }
    return out;
}

BoundaryTrace tangential_curl_trace(const VectorGrid& v)
{
    const VectorGrid c = curl(v);
    BoundaryTrace out(v.grid);
    for (int f = 0; f < 6; ++f) {
        const int axis = face_axis(f);
        const double sign = face_normal_sign(f);
        for_each_face_node(v.grid, f, [&](int u, int w, int i, int j, int k) {
            const auto p = v.grid.index(i, j, k);
            const double cv[3] = {c.comp[0][p], c.comp[1][p], c.comp[2][p]};
            // (c x nu) with nu = sign * e_axis
            double r[3] = {0.0, 0.0, 0.0};
            const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
            r[a1] = sign * cv[a2];
            r[a2] = -sign * cv[a1];
            for (int comp = 0; comp < 3; ++comp)
                out.face[f][out.face_index(f, u, w, comp)] = r[comp];
        });
    }
    return out;
}

VectorGrid tangential_curl_trace_scatter(const BoundaryTrace& w)
{
    // transpose of (x -> (tau curl x) x nu) is curl^T tau^T (nu x w)
    BoundaryTrace crossed(w.grid);
    for (int f = 0; f < 6; ++f) {
        const int axis = face_axis(f);
        const double sign = face_normal_sign(f);
        const std::size_t nodes = w.face_nodes(f);
        for (std::size_t q = 0; q < nodes; ++q) {
            const double wv[3] = {w.face[f][3 * q + 0], w.face[f][3 * q + 1],
                                  w.face[f][3 * q + 2]};
            double r[3] = {0.0, 0.0, 0.0};
            const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
            // nu x w with nu = sign * e_axis
            r[a1] = -sign * wv[a2];
            r[a2] = sign * wv[a1];
            crossed.face[f][3 * q + 0] = r[0];
            crossed.face[f][3 * q + 1] = r[1];
            crossed.face[f][3 * q + 2] = r[2];
        }
    }
    return curl_transpose(dirichlet_trace_scatter(crossed));
}

const std::vector<Alpha>& h3_alphas()
{
    static const std::vector<Alpha> alphas = [] {
        std::vector<Alpha> out;
        out.push_back({0, 0, 0});
        for (int total = 1; total <= 3; ++total)
            for (int a0 = total; a0 >= 0; --a0)
                for (int a1 = total - a0; a1 >= 0; --a1)
                    out.push_back({a0, a1, total - a0 - a1});
        return out;
    }();
    return alphas;
}

VectorGrid d_alpha(const VectorGrid& v, const Alpha& alpha)
{
    VectorGrid out = v;
    std::vector<double> tmp;
    for (int axis = 0; axis < 3; ++axis) {
        if (alpha[axis] == 0)
            continue;
        for (int c = 0; c < 3; ++c) {
            axis_derivative(out.grid, out.comp[c], tmp, axis, alpha[axis], false);
            out.comp[c].swap(tmp);
        }
    }
    return out;
}

VectorGrid d_alpha_transpose(const VectorGrid& w, const Alpha& alpha)
{
    VectorGrid out = w;
    std::vector<double> tmp;
    for (int axis = 2; axis >= 0; --axis) {
        if (alpha[axis] == 0)
            continue;
        for (int c = 0; c < 3; ++c) {
            axis_derivative(out.grid, out.comp[c], tmp, axis, alpha[axis], true);
            out.comp[c].swap(tmp);
        }
    }
    return out;
}

double l2_inner(const VectorGrid& u, const VectorGrid& v)
{
    if (!u.grid.same_shape(v.grid))
        throw ShapeError("l2_inner: grid shapes differ");
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
        const double* a = u.comp[c].data();
        const double* b = v.comp[c].data();
        for (std::int64_t p = 0; p < u.grid.size(); ++p)
            acc += a[p] * b[p];
    }
    return acc * u.grid.cell_volume();
}

double l2_norm(const VectorGrid& u)
{
    return std::sqrt(l2_inner(u, u));
}

double face_inner(const BoundaryTrace& a, const BoundaryTrace& b)
{
    if (!a.grid.same_shape(b.grid))
        throw ShapeError("face_inner: grid shapes differ");
    double acc = 0.0;
    for (int f = 0; f < 6; ++f) {
        const auto pl = face_plane_axes(f);
        const double area = a.grid.h[pl[0]] * a.grid.h[pl[1]];
        double s = 0.0;
        for (std::size_t q = 0; q < a.face[f].size(); ++q)
            s += a.face[f][q] * b.face[f][q];
        acc += area * s;
    }
    return acc;
}

double h3_inner(const VectorGrid& u, const VectorGrid& v)
{
    if (!u.grid.same_shape(v.grid))
        throw ShapeError("h3_inner: grid shapes differ");
    double acc = 0.0;
    for (const Alpha& a : h3_alphas()) {
        if (a == Alpha{0, 0, 0}) {
            acc += l2_inner(u, v);
            continue;
        }
        acc += l2_inner(d_alpha(u, a), d_alpha(v, a));
    }
    return acc;
}

std::vector<RegisteredOperator> operator_registry(const MediumFields& medium)
{
    std::vector<RegisteredOperator> ops;

    auto as_field = [](const OpResult& r) -> const VectorGrid& {
        if (!std::holds_alternative<VectorGrid>(r))
            throw ShapeError("transpose_apply: operator expects a volume field");
        return std::get<VectorGrid>(r);
    };
    auto as_trace = [](const OpResult& r) -> const BoundaryTrace& {
        if (!std::holds_alternative<BoundaryTrace>(r))
            throw ShapeError("transpose_apply: operator expects a boundary trace");
        return std::get<BoundaryTrace>(r);
    };

    ops.push_back({"curl", [](const VectorGrid& v) { return OpResult{curl(v)}; },
                   [as_field](const OpResult& w) { return curl_transpose(as_field(w)); }});
    ops.push_back({"curl_curl",
                   [&medium](const VectorGrid& v) { return OpResult{curl_curl(v, medium)}; },
                   [as_field, &medium](const OpResult& w) {
                       return curl_curl_transpose(as_field(w), medium);
                   }});

    // weighted trace transposes carry the face-to-volume quadrature ratio
    ops.push_back({"dirichlet_trace",
                   [](const VectorGrid& v) { return OpResult{dirichlet_trace(v)}; },
                   [as_trace](const OpResult& w) {
                       const BoundaryTrace& t = as_trace(w);
                       BoundaryTrace scaled = t;
                       for (int f = 0; f < 6; ++f) {
                           const int axis = face_axis(f);
                           const double s = 1.0 / t.grid.h[axis];
                           for (double& x : scaled.face[f])
                               x *= s;
                       }
                       return dirichlet_trace_scatter(scaled);
                   }});
    ops.push_back({"neumann_trace",
                   [](const VectorGrid& v) { return OpResult{neumann_trace(v)}; },
                   [as_trace](const OpResult& w) {
                       const BoundaryTrace& t = as_trace(w);
                       BoundaryTrace scaled = t;
                       for (int f = 0; f < 6; ++f) {
                           const int axis = face_axis(f);
                           const double s = 1.0 / t.grid.h[axis];
                           for (double& x : scaled.face[f])
                               x *= s;
                       }
                       return neumann_trace_scatter(scaled);
                   }});
    ops.push_back({"tangential_curl_trace",
                   [](const VectorGrid& v) { return OpResult{tangential_curl_trace(v)}; },
                   [as_trace](const OpResult& w) {
                       const BoundaryTrace& t = as_trace(w);
                       BoundaryTrace scaled = t;
                       for (int f = 0; f < 6; ++f) {
                           const int axis = face_axis(f);
                           const double s = 1.0 / t.grid.h[axis];
                           for (double& x : scaled.face[f])
                               x *= s;
                       }
                       return tangential_curl_trace_scatter(scaled);
                   }});

    for (const Alpha& a : h3_alphas()) {
        if (a == Alpha{0, 0, 0})
            continue;
        const std::string name =
            "d_" + std::to_string(a[0]) + std::to_string(a[1]) + std::to_string(a[2]);
        ops.push_back({name, [a](const VectorGrid& v) { return OpResult{d_alpha(v, a)}; },
                       [a, as_field](const OpResult& w) {
                           return d_alpha_transpose(as_field(w), a);
                       }});
    }
    return ops;
}

VectorGrid transpose_apply(std::string_view op_name, const OpResult& w,
                           const MediumFields& medium)
{
    for (const auto& op : operator_registry(medium))
        if (op.name == op_name)
            return op.transpose(w);
    throw ConfigError("transpose_apply: no registered operator named '" +
                      std::string(op_name) + "'");
}

} // namespace maxrec

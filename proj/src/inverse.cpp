// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#include "maxrec/inverse.hpp"

#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "maxrec/operators.hpp"
#include "maxrec/stencil.hpp"

namespace maxrec {

double stack_dot(const ModeStack& a, const ModeStack& b)
{
    double acc = 0.0;
    for (int m = 0; m < a.count(); ++m)
        for (int c = 0; c < 3; ++c) {
            const double* x = a.modes[m].comp[c].data();
            const double* y = b.modes[m].comp[c].data();
            const std::size_t n = a.modes[m].comp[c].size();
            for (std::size_t p = 0; p < n; ++p)
                acc += x[p] * y[p];
        }
    return acc;
}

void stack_axpy(double alpha, const ModeStack& x, ModeStack& y)
{
    for (int m = 0; m < x.count(); ++m)
        for (int c = 0; c < 3; ++c) {
            const double* xs = x.modes[m].comp[c].data();
            double* ys = y.modes[m].comp[c].data();
            const std::size_t n = x.modes[m].comp[c].size();
            for (std::size_t p = 0; p < n; ++p)
                ys[p] += alpha * xs[p];
        }
}

void stack_scale(ModeStack& x, double alpha)
{
    for (auto& m : x.modes)
        for (auto& c : m.comp)
            for (double& v : c)
                v *= alpha;
}

double ResidualBundle::squared_norm() const
{
    double acc = 0.0;
    for (const auto& v : interior)
        for (const auto& c : v.comp)
            for (double x : c)
                acc += x * x;
    for (const auto* block : {&dirichlet, &neumann})
        for (const auto& t : *block)
            for (const auto& f : t.face)
                for (double x : f)
                    acc += x * x;
    return acc;
}

NormalOperator::NormalOperator(const MediumFields& medium, const BasisSet& basis,
                               const QRConfig& config)
    : medium_(medium), basis_(basis), config_(config), s_(stiffness(basis))
{
    config_.validate();
    medium_.validate();
    if (basis.order() != config.order)
        throw ConfigError("NormalOperator: basis order does not match config order");
}

BoundaryTrace NormalOperator::first_derivative_trace(const VectorGrid& v) const
{
    return config_.trace_variant == TraceVariant::NormalDerivative
               ? neumann_trace(v)
               : tangential_curl_trace(v);
}

VectorGrid NormalOperator::first_derivative_trace_scatter(const BoundaryTrace& w) const
{
    return config_.trace_variant == TraceVariant::NormalDerivative
               ? neumann_trace_scatter(w)
               : tangential_curl_trace_scatter(w);
}

namespace {

// sqrt of the face area element, per face
double face_weight(const Grid3& g, int f)
{
    const auto pl = face_plane_axes(f);
    return std::sqrt(g.h[pl[0]] * g.h[pl[1]]);
}

void scale_trace(BoundaryTrace& t, const Grid3& g)
{
    for (int f = 0; f < 6; ++f) {
        const double w = face_weight(g, f);
        for (double& x : t.face[f])
            x *= w;
    }
}

} // namespace

ModeStack NormalOperator::apply_data_part(const ModeStack& v, bool transpose) const
{
    // interior block: sqrt(h^3) (CC v_m + eps(x) sum_n s_mn v_n); the
    // transpose uses CC^T and s_nm.
    const int np1 = v.count();
    const Grid3& g = v.grid;
    const double wv = std::sqrt(g.cell_volume());
    ModeStack out(g, np1);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int m = 0; m < np1; ++m) {
        VectorGrid cc = transpose ? curl_curl_transpose(v.modes[m], medium_)
                                  : curl_curl(v.modes[m], medium_);
        // mode coupling
        for (int c = 0; c < 3; ++c) {
            double* o = out.modes[m].comp[c].data();
            const double* ccp = cc.comp[c].data();
            const double* eps = medium_.eps.v.data();
            for (std::int64_t p = 0; p < g.size(); ++p)
                o[p] = ccp[p];
            for (int n = 0; n < np1; ++n) {
                const double smn = transpose ? s_(n, m) : s_(m, n);
                if (smn == 0.0)
                    continue;
                const double* src = v.modes[n].comp[c].data();
                for (std::int64_t p = 0; p < g.size(); ++p)
                    o[p] += smn * eps[p] * src[p];
            }
            for (std::int64_t p = 0; p < g.size(); ++p)
                o[p] *= wv;
        }
    }
    return out;
}

ResidualBundle NormalOperator::bundle(const ModeStack& v, const ModeData& modes) const
{
    const int np1 = v.count();
    if (modes.order + 1 != np1)
        throw ShapeError("residual_bundle: mode data order does not match the stack");
    if (!v.grid.same_shape(modes.grid))
        throw ShapeError("residual_bundle: grids differ");

    const Grid3& g = v.grid;
    ResidualBundle out;
    out.interior = apply_data_part(v, false).modes;
    out.dirichlet.reserve(np1);
    out.neumann.reserve(np1);
    for (int m = 0; m < np1; ++m) {
        BoundaryTrace d = dirichlet_trace(v.modes[m]);
        BoundaryTrace n = first_derivative_trace(v.modes[m]);
        for (int f = 0; f < 6; ++f)
            for (std::size_t q = 0; q < d.face[f].size(); ++q) {
                d.face[f][q] -= modes.f[m].face[f][q];
                n.face[f][q] -= modes.g[m].face[f][q];
            }
        scale_trace(d, g);
        scale_trace(n, g);
        out.dirichlet.push_back(std::move(d));
        out.neumann.push_back(std::move(n));
    }
    return out;
}

double NormalOperator::functional(const ModeStack& v, const ModeData& modes) const
{
    double j = bundle(v, modes).squared_norm();
    for (int m = 0; m < v.count(); ++m)
        j += config_.epsilon_reg * h3_inner(v.modes[m], v.modes[m]);
    return j;
}

ModeStack NormalOperator::apply(const ModeStack& v) const
{
    const int np1 = v.count();
    const Grid3& g = v.grid;

    // A^T A, interior part
    ModeStack out = apply_data_part(apply_data_part(v, false), true);

    // traces and regularization, independent per mode
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int m = 0; m < np1; ++m) {
        BoundaryTrace d = dirichlet_trace(v.modes[m]);
        scale_trace(d, g);
        scale_trace(d, g); // weight applied on both A and A^T sides
        VectorGrid dsc = dirichlet_trace_scatter(d);

        BoundaryTrace n = first_derivative_trace(v.modes[m]);
        scale_trace(n, g);
        scale_trace(n, g);
        VectorGrid nsc = first_derivative_trace_scatter(n);

        // eps_reg * h^3 * (v + sum_alpha D^aT D^a v)
        VectorGrid reg = v.modes[m];
        for (const Alpha& a : h3_alphas()) {
            if (a == Alpha{0, 0, 0})
                continue;
            VectorGrid da = d_alpha(v.modes[m], a);
            VectorGrid dat = d_alpha_transpose(da, a);
            for (int c = 0; c < 3; ++c)
                for (std::int64_t p = 0; p < g.size(); ++p)
                    reg.comp[c][p] += dat.comp[c][p];
        }
        const double er = config_.epsilon_reg * g.cell_volume();
        for (int c = 0; c < 3; ++c) {
            double* o = out.modes[m].comp[c].data();
            for (std::int64_t p = 0; p < g.size(); ++p)
                o[p] += dsc.comp[c][p] + nsc.comp[c][p] + er * reg.comp[c][p];
        }
    }
    return out;
}

ModeStack NormalOperator::rhs(const ModeData& modes) const
{
    const int np1 = modes.order + 1;
    const Grid3& g = modes.grid;
    ModeStack out(g, np1);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int m = 0; m < np1; ++m) {
        BoundaryTrace f = modes.f[m];
        scale_trace(f, g);
        scale_trace(f, g);
        VectorGrid fd = dirichlet_trace_scatter(f);

        BoundaryTrace gg = modes.g[m];
        scale_trace(gg, g);
        scale_trace(gg, g);
        VectorGrid gn = first_derivative_trace_scatter(gg);

        for (int c = 0; c < 3; ++c)
            for (std::int64_t p = 0; p < g.size(); ++p)
                out.modes[m].comp[c][p] = fd.comp[c][p] + gn.comp[c][p];
    }
    return out;
}

namespace {

// Iterate the nodes at inward `depth` behind face f.
template <typename Fn>
void for_each_depth(const Grid3& g, int f, int depth, Fn&& fn)
{
    const int axis = face_axis(f);
    const auto pl = face_plane_axes(f);
    const int fixed = face_is_high(f) ? g.n[axis] - 1 - depth : depth;
    int ijk[3];
    ijk[axis] = fixed;
    for (int v = 0; v < g.n[pl[1]]; ++v) {
        ijk[pl[1]] = v;
        for (int u = 0; u < g.n[pl[0]]; ++u) {
            ijk[pl[0]] = u;
            fn(g.index(ijk[0], ijk[1], ijk[2]));
        }
    }
}

} // namespace

const ModeStack& NormalOperator::jacobi_diagonal() const
{
    if (diag_ready_)
        return diag_;

    const int np1 = basis_.order() + 1;
    const Grid3& g = medium_.mu.grid;
    const double h3 = g.cell_volume();

    // 1) regularization diagonal: tensor products of 1D column squares
    std::array<std::array<std::vector<double>, 3>, 4> colsq1d;
    for (int axis = 0; axis < 3; ++axis) {
        colsq1d[0][axis].assign(g.n[axis], 1.0); // order 0 = identity
        for (int order = 1; order <= 3; ++order) {
            std::vector<double> d(g.n[axis], 0.0);
            for (int i = 0; i < g.n[axis]; ++i) {
                const StencilRow r = stencil_row(g.n[axis], g.h[axis], order, i);
                for (int k = 0; k < r.count; ++k)
                    d[r.col[k]] += r.coeff[k] * r.coeff[k];
            }
            colsq1d[order][axis] = std::move(d);
        }
    }
    ScalarGrid reg_diag(g);
    for (const Alpha& a : h3_alphas()) {
        for (int k = 0; k < g.n[2]; ++k)
            for (int j = 0; j < g.n[1]; ++j)
                for (int i = 0; i < g.n[0]; ++i)
                    reg_diag.at(i, j, k) += colsq1d[a[0]][0][i] * colsq1d[a[1]][1][j] *
                                            colsq1d[a[2]][2][k];
    }

    // 2) closed-form trace diagonals: Dirichlet rows always; Neumann rows
    //    for the normal-derivative variant (tangential rows are probed below)
    ScalarGrid trace_diag(g);
    for (int f = 0; f < 6; ++f) {
        const int axis = face_axis(f);
        const auto pl = face_plane_axes(f);
        const double area = g.h[pl[0]] * g.h[pl[1]];
        for_each_depth(g, f, 0, [&](std::int64_t p) { trace_diag.v[p] += area; });
        if (config_.trace_variant == TraceVariant::NormalDerivative) {
            const double c = 1.0 / (2.0 * g.h[axis]);
            const double cf[3] = {3.0 * c, -4.0 * c, 1.0 * c};
            for (int depth = 0; depth < 3; ++depth)
                for_each_depth(g, f, depth, [&](std::int64_t p) {
                    trace_diag.v[p] += area * cf[depth] * cf[depth];
                });
        }
    }

    // 3) curl-curl diagonal and column squares by impulse-train probing on a
    //    coarse lattice (stride exceeds twice the composed stencil radius, so
    //    impulse responses cannot overlap); tangential trace rows fold into
    //    the same probes
    VectorGrid probe_colsq(g), probe_diag_cc(g), probe_tang(g);
    const int stride = 9;
    const bool tangential = config_.trace_variant == TraceVariant::TangentialCurl;
    const int s0 = std::min(stride, g.n[0]), s1 = std::min(stride, g.n[1]),
              s2 = std::min(stride, g.n[2]);
    const int total_probes = 3 * s0 * s1 * s2;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int probe = 0; probe < total_probes; ++probe) {
        const int c = probe / (s0 * s1 * s2);
        const int rem = probe % (s0 * s1 * s2);
        const int o0 = rem % s0, o1 = (rem / s0) % s1, o2 = rem / (s0 * s1);
        VectorGrid e(g);
        for (int k = o2; k < g.n[2]; k += stride)
            for (int j = o1; j < g.n[1]; j += stride)
                for (int i = o0; i < g.n[0]; i += stride)
                    e.comp[c][g.index(i, j, k)] = 1.0;
        const VectorGrid cc = curl_curl(e, medium_);
        const VectorGrid ctc = curl_curl_transpose(cc, medium_);
        VectorGrid tt(g);
        if (tangential) {
            BoundaryTrace t = tangential_curl_trace(e);
            scale_trace(t, g);
            scale_trace(t, g);
            tt = tangential_curl_trace_scatter(t);
        }
        for (int k = o2; k < g.n[2]; k += stride)
            for (int j = o1; j < g.n[1]; j += stride)
                for (int i = o0; i < g.n[0]; i += stride) {
                    const auto p = g.index(i, j, k);
                    probe_diag_cc.comp[c][p] = cc.comp[c][p];
                    probe_colsq.comp[c][p] = ctc.comp[c][p];
                    if (tangential)
                        probe_tang.comp[c][p] = tt.comp[c][p];
                }
    }

    // 4) assemble per mode: interior columns give
    //    h^3 (colsq_CC + 2 s_mm eps diag_CC + eps^2 (S^T S)_mm)
    Mat sts(np1, np1);
    for (int a = 0; a < np1; ++a)
        for (int b = 0; b < np1; ++b) {
            double acc = 0.0;
            for (int k = 0; k < np1; ++k)
                acc += s_(k, a) * s_(k, b);
            sts(a, b) = acc;
        }

    diag_ = ModeStack(g, np1);
    for (int m = 0; m < np1; ++m)
        for (int c = 0; c < 3; ++c)
            for (std::int64_t p = 0; p < g.size(); ++p) {
                const double eps = medium_.eps.v[p];
                double d = h3 * (probe_colsq.comp[c][p] +
                                 2.0 * s_(m, m) * eps * probe_diag_cc.comp[c][p] +
                                 eps * eps * sts(m, m));
                d += trace_diag.v[p];
                if (tangential)
                    d += probe_tang.comp[c][p];
                d += config_.epsilon_reg * h3 * reg_diag.v[p];
                diag_.modes[m].comp[c][p] = d;
            }
    diag_ready_ = true;
    return diag_;
}

ResidualBundle residual_bundle(const ModeStack& v, const ModeData& modes,
                               const MediumFields& medium, const BasisSet& basis,
                               const QRConfig& config)
{
    return NormalOperator(medium, basis, config).bundle(v, modes);
}

double functional_value(const ModeStack& v, const ModeData& modes, const MediumFields& medium,
                        const BasisSet& basis, const QRConfig& config)
{
    return NormalOperator(medium, basis, config).functional(v, modes);
}

ModeStack normal_apply(const ModeStack& v, const MediumFields& medium, const BasisSet& basis,
                       const QRConfig& config)
{
    return NormalOperator(medium, basis, config).apply(v);
}

ModeStack rhs_assemble(const ModeData& modes, const MediumFields& medium,
                       const BasisSet& basis, const QRConfig& config)
{
    return NormalOperator(medium, basis, config).rhs(modes);
}

std::pair<ModeStack, SolveReport> cg_solve(
    const std::function<ModeStack(const ModeStack&)>& op, const ModeStack& b,
    const QRConfig& config, const ModeStack* diag)
{
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport report;

    ModeStack x(b.grid, b.count());
    ModeStack r = b;
    const double bnorm = std::sqrt(stack_dot(b, b));
    if (bnorm == 0.0) {
        report.converged = true;
        return {x, report};
    }

    auto precondition = [&](const ModeStack& res) {
        if (!diag)
            return res;
        ModeStack z = res;
        for (int m = 0; m < z.count(); ++m)
            for (int c = 0; c < 3; ++c) {
                double* zp = z.modes[m].comp[c].data();
                const double* dp = diag->modes[m].comp[c].data();
                for (std::size_t p = 0; p < z.modes[m].comp[c].size(); ++p)
                    zp[p] /= dp[p];
            }
        return z;
    };

    ModeStack z = precondition(r);
    ModeStack p = z;
    double rz = stack_dot(r, z);

    for (int it = 1; it <= config.cg_max_iter; ++it) {
        const ModeStack ap = op(p);
        const double p_ap = stack_dot(p, ap);
        if (!(p_ap > 0.0))
            throw ConfigError("cg_solve: operator is not positive definite");
        const double alpha = rz / p_ap;
        stack_axpy(alpha, p, x);
        stack_axpy(-alpha, ap, r);

        const double rel = std::sqrt(stack_dot(r, r)) / bnorm;
        report.residual_history.push_back(rel);
        report.iterations = it;
        if (rel <= config.cg_tol) {
            report.converged = true;
            break;
        }
        z = precondition(r);
        const double rz_new = stack_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        stack_scale(p, beta);
        stack_axpy(1.0, z, p);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {x, report};
}

VectorGrid reconstruct_initial(const ModeStack& v, const BasisSet& basis)
{
    VectorGrid out(v.grid);
    for (int n = 0; n < v.count(); ++n) {
        const double w = basis.psi_at_zero(n);
        for (int c = 0; c < 3; ++c) {
            double* o = out.comp[c].data();
            const double* src = v.modes[n].comp[c].data();
            for (std::int64_t p = 0; p < v.grid.size(); ++p)
                o[p] += w * src[p];
        }
    }
    return out;
}

std::pair<VectorGrid, SolveReport> invert(const ModeData& modes, const MediumFields& medium,
                                          const BasisSet& basis, const QRConfig& config)
{
    NormalOperator normal(medium, basis, config);
    const ModeStack b = normal.rhs(modes);
    const ModeStack* diag = nullptr;
    if (config.preconditioner == Preconditioner::Jacobi)
        diag = &normal.jacobi_diagonal();

    auto [v, report] =
        cg_solve([&](const ModeStack& p) { return normal.apply(p); }, b, config, diag);
    report.final_functional = normal.functional(v, modes);
    return {reconstruct_initial(v, basis), report};
}

} // namespace maxrec

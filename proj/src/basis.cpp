// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#include "maxrec/basis.hpp"

#include <cmath>
#include <string>

#include "maxrec/errors.hpp"

namespace maxrec {

LegendreTriplet legendre_triplet(int n, double x)
{
    if (n < 0)
        throw DomainError("legendre_triplet: order must be >= 0");
    if (std::abs(x) > 1.0)
        throw DomainError("legendre_triplet: abscissa " + std::to_string(x) +
                          " outside [-1,1]");

    double p0 = 1.0, dp0 = 0.0, d2p0 = 0.0;
    if (n == 0)
        return {p0, dp0, d2p0};
    double p1 = x, dp1 = 1.0, d2p1 = 0.0;
    for (int k = 1; k < n; ++k) {
        const double a = 2.0 * k + 1.0, b = static_cast<double>(k), c = k + 1.0;
        const double p2 = (a * x * p1 - b * p0) / c;
        const double dp2 = (a * (p1 + x * dp1) - b * dp0) / c;
        const double d2p2 = (a * (2.0 * dp1 + x * d2p1) - b * d2p0) / c;
        p0 = p1; dp0 = dp1; d2p0 = d2p1;
        p1 = p2; dp1 = dp2; d2p1 = d2p2;
    }
    return {p1, dp1, d2p1};
}

PsiTriplet psi_triplet(int n, double t, double final_time)
{
    if (t < 0.0 || t > final_time)
        throw DomainError("psi_triplet: t = " + std::to_string(t) + " outside [0," +
                          std::to_string(final_time) + "]");

    const double x = 2.0 * t / final_time - 1.0;
    const auto leg = legendre_triplet(n, x);
    const double scale = std::sqrt((2.0 * n + 1.0) / final_time);
    const double cr = 2.0 / final_time; // chain-rule factor per derivative
    const double q = scale * leg.p;
    const double dq = scale * cr * leg.dp;
    const double d2q = scale * cr * cr * leg.d2p;
    const double e = std::exp(t);
    return {e * q, e * (q + dq), e * (q + 2.0 * dq + d2q)};
}

QuadRule gauss_legendre(int num_nodes)
{
    if (num_nodes < 1)
        throw DomainError("gauss_legendre: need at least one node");

    QuadRule rule;
    rule.nodes.resize(num_nodes);
    rule.weights.resize(num_nodes);
    const int n = num_nodes;
    // Newton iteration from the Chebyshev-like initial guess; roots come in
    // +/- pairs so only the lower half is solved.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = -std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto lt = legendre_triplet(n, x);
            const double dx = lt.p / lt.dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        const auto lt = legendre_triplet(n, x);
        const double w = 2.0 / ((1.0 - x * x) * lt.dp * lt.dp);
        rule.nodes[i] = x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = -x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
        const auto lt = legendre_triplet(n, 0.0);
        rule.weights[n / 2] = 2.0 / (lt.dp * lt.dp);
    }
    return rule;
}

TimeGrid::TimeGrid(double T, int samples) : final_time(T), num_samples(samples)
{
    if (T <= 0.0)
        throw DomainError("TimeGrid: final time must be positive");
    if (samples < 2)
        throw DomainError("TimeGrid: need at least two samples");
}

std::vector<double> TimeGrid::times() const
{
    std::vector<double> out(num_samples);
    for (int k = 0; k < num_samples; ++k)
        out[k] = time_at(k);
    return out;
}

BasisSet::BasisSet(int order, double final_time, int quad_nodes)
    : order_(order), final_time_(final_time)
{
    if (order < 0)
        throw DomainError("BasisSet: order must be >= 0");
    if (final_time <= 0.0)
        throw DomainError("BasisSet: final time must be positive");
    if (quad_nodes == 0)
        quad_nodes = 2 * order + 2;

    const QuadRule rule = gauss_legendre(quad_nodes);
    t_.resize(quad_nodes);
    w_.resize(quad_nodes);
    we_.resize(quad_nodes);
    for (int q = 0; q < quad_nodes; ++q) {
        t_[q] = final_time * (rule.nodes[q] + 1.0) / 2.0;
        w_[q] = rule.weights[q] * final_time / 2.0;
        we_[q] = w_[q] * std::exp(-2.0 * t_[q]);
    }

    const std::size_t sz = static_cast<std::size_t>(order + 1) * quad_nodes;
    psi_.resize(sz);
    dpsi_.resize(sz);
    d2psi_.resize(sz);
    for (int n = 0; n <= order; ++n) {
        for (int q = 0; q < quad_nodes; ++q) {
            const auto v = psi_triplet(n, t_[q], final_time);
            psi_[idx(n, q)] = v.psi;
            dpsi_[idx(n, q)] = v.dpsi;
            d2psi_[idx(n, q)] = v.d2psi;
        }
    }
}

Mat weighted_gram(const BasisSet& basis)
{
    const int np1 = basis.order() + 1;
    if (basis.num_nodes() < 2 * basis.order() + 2)
        throw ConfigError("weighted_gram: quadrature rule too small for exact products");

    Mat g(np1, np1);
    for (int m = 0; m < np1; ++m)
        for (int n = 0; n < np1; ++n) {
            double acc = 0.0;
            for (int q = 0; q < basis.num_nodes(); ++q)
                acc += basis.weighted(q) * basis.psi(m, q) * basis.psi(n, q);
            g(m, n) = acc;
        }
    return g;
}

Mat stiffness(const BasisSet& basis)
{
    const int np1 = basis.order() + 1;
    if (basis.num_nodes() < 2 * basis.order() + 2)
        throw ConfigError("stiffness: quadrature rule too small for exact products");

    Mat s(np1, np1);
    for (int m = 0; m < np1; ++m)
        for (int n = 0; n < np1; ++n) {
            double acc = 0.0;
            for (int q = 0; q < basis.num_nodes(); ++q)
                acc += basis.weighted(q) * basis.d2psi(n, q) * basis.psi(m, q);
            s(m, n) = acc;
        }
    return s;
}

Mat projection_weights(const TimeGrid& time, const BasisSet& basis)
{
    if (std::abs(time.final_time - basis.final_time()) >
        1e-12 * std::max(1.0, basis.final_time()))
        throw ShapeError("projection_weights: TimeGrid and basis disagree on T");

    const int np1 = basis.order() + 1;
    const int ns = time.num_samples;
    const double dt = time.dt_obs();
    // per-interval Gauss rule; the integrand is smooth there
    static constexpr int kGaussPts = 6;
    const QuadRule rule = gauss_legendre(kGaussPts);

    Mat w(np1, ns);
    for (int k = 0; k + 1 < ns; ++k) {
        const double a = time.time_at(k);
        for (int q = 0; q < kGaussPts; ++q) {
            const double tq = a + (rule.nodes[q] + 1.0) * dt / 2.0;
            const double wq = rule.weights[q] * dt / 2.0;
            const double lam = (tq - a) / dt; // hat weight of sample k+1
            const double core = wq * std::exp(-2.0 * tq);
            for (int n = 0; n < np1; ++n) {
                const double p = core * psi_triplet(n, tq, basis.final_time()).psi;
                w(n, k) += p * (1.0 - lam);
                w(n, k + 1) += p * lam;
            }
        }
    }
    return w;
}

std::vector<double> project_samples(std::span<const double> samples, const TimeGrid& time,
                                    const BasisSet& basis)
{
    if (static_cast<int>(samples.size()) != time.num_samples)
        throw ShapeError("project_samples: " + std::to_string(samples.size()) +
                         " samples vs TimeGrid with " + std::to_string(time.num_samples));

    const Mat w = projection_weights(time, basis);
    const int np1 = basis.order() + 1;
    std::vector<double> coeffs(np1, 0.0);
    for (int n = 0; n < np1; ++n) {
        double acc = 0.0;
        for (int k = 0; k < time.num_samples; ++k)
            acc += w(n, k) * samples[k];
        coeffs[n] = acc;
    }
    return coeffs;
}

double synthesize(std::span<const double> coeffs, double t, const BasisSet& basis)
{
    if (t < 0.0 || t > basis.final_time())
        throw DomainError("synthesize: t outside [0,T]");
    double acc = 0.0;
    for (std::size_t n = 0; n < coeffs.size(); ++n)
        acc += coeffs[n] * psi_triplet(static_cast<int>(n), t, basis.final_time()).psi;
    return acc;
}

std::vector<double> projection_residual(const std::function<double(double)>& u,
                                        const std::function<double(double)>& u_tt,
                                        const BasisSet& basis)
{
    const int np1 = basis.order() + 1;
    const int nq = basis.num_nodes();

    // u_n and the target integrals, both with the basis rule
    std::vector<double> un(np1, 0.0), tgt(np1, 0.0);
    for (int q = 0; q < nq; ++q) {
        const double uw = basis.weighted(q) * u(basis.node(q));
        const double tw = basis.weighted(q) * u_tt(basis.node(q));
        for (int n = 0; n < np1; ++n) {
            un[n] += uw * basis.psi(n, q);
            tgt[n] += tw * basis.psi(n, q);
        }
    }

    const Mat s = stiffness(basis);
    std::vector<double> r(np1, 0.0);
    for (int m = 0; m < np1; ++m) {
        double acc = 0.0;
        for (int n = 0; n < np1; ++n)
            acc += s(m, n) * un[n];
        r[m] = acc - tgt[m];
    }
    return r;
}

} // namespace maxrec

// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// Legendre polynomial-exponential time basis.
//
// Psi_n(t) = e^t * Q_n(t) with Q_n(t) = sqrt((2n+1)/T) * P_n(2t/T - 1);
// the family {Psi_n} is orthonormal in the weighted product
// <u,v> = integral_0^T e^{-2t} u v dt. Products of the form
// e^{-2t} Psi_m Psi_n and e^{-2t} Psi_n'' Psi_m reduce to polynomials of
// degree m+n, so a Gauss-Legendre rule with 2N+2 nodes integrates every
// inner product among the first N+1 members exactly.

#ifndef MAXREC_BASIS_HPP
#define MAXREC_BASIS_HPP

#include <functional>
#include <span>
#include <vector>

#include "maxrec/mat.hpp"

namespace maxrec {

struct LegendreTriplet {
    double p, dp, d2p;
};

// P_n and its first two derivatives at x in [-1,1], by the three-term
// recurrence and its differentiated forms.
LegendreTriplet legendre_triplet(int n, double x);

struct PsiTriplet {
    double psi, dpsi, d2psi;
};

// Psi_n, Psi_n', Psi_n'' at t in [0,T].
PsiTriplet psi_triplet(int n, double t, double final_time);

struct QuadRule {
    std::vector<double> nodes;   // ascending, in (-1,1)
    std::vector<double> weights; // sum to 2
};

// Gauss-Legendre rule on [-1,1]; exact for polynomials of degree
// <= 2*num_nodes - 1.
QuadRule gauss_legendre(int num_nodes);

// Uniform observation times on [0,T], endpoints included.
struct TimeGrid {
    double final_time = 0.0;
    int num_samples = 0;

    TimeGrid() = default;
    TimeGrid(double T, int samples);

    double dt_obs() const { return final_time / (num_samples - 1); }
    double time_at(int k) const { return final_time * k / (num_samples - 1); }
    std::vector<double> times() const;
};

// The first N+1 basis members with their quadrature rule mapped to [0,T]
// and cached value tables at the quadrature nodes.
class BasisSet {
public:
    // quad_nodes == 0 selects the default 2N+2.
    BasisSet(int order, double final_time, int quad_nodes = 0);

    int order() const { return order_; }
    double final_time() const { return final_time_; }
    int num_nodes() const { return static_cast<int>(t_.size()); }

    double node(int q) const { return t_[q]; }
    double weight(int q) const { return w_[q]; }
    // e^{-2t_q} * w_q, the weight appearing in every weighted product
    double weighted(int q) const { return we_[q]; }

    double psi(int n, int q) const { return psi_[idx(n, q)]; }
    double dpsi(int n, int q) const { return dpsi_[idx(n, q)]; }
    double d2psi(int n, int q) const { return d2psi_[idx(n, q)]; }

    // Psi_n(0), the synthesis weights used at reconstruction time
    double psi_at_zero(int n) const { return psi_triplet(n, 0.0, final_time_).psi; }

private:
    std::size_t idx(int n, int q) const { return static_cast<std::size_t>(n) * t_.size() + q; }

    int order_;
    double final_time_;
    std::vector<double> t_, w_, we_;
    std::vector<double> psi_, dpsi_, d2psi_;
};

// Gram matrix <Psi_m, Psi_n>; identity to roundoff with the default rule.
Mat weighted_gram(const BasisSet& basis);

// s_{mn} = <Psi_n'', Psi_m>. Not symmetric.
Mat stiffness(const BasisSet& basis);

// Projection weights W (order+1 rows, num_samples columns) such that
// u_n = sum_k W(n,k) u(t_k) equals the integral of e^{-2t} Psi_n against
// the piecewise-linear interpolant of the samples (product integration:
// the analytic weight is integrated exactly, only the data are
// interpolated, so the error is O(dt_obs^2) uniformly in n).
Mat projection_weights(const TimeGrid& time, const BasisSet& basis);

// Weighted Fourier coefficients of a sampled time series,
// u_n ~ integral e^{-2t} u Psi_n dt via the product-integration weights.
std::vector<double> project_samples(std::span<const double> samples, const TimeGrid& time,
                                    const BasisSet& basis);

// sum_n coeffs[n] * Psi_n(t)
double synthesize(std::span<const double> coeffs, double t, const BasisSet& basis);

// Per-mode residuals r_m = sum_n s_mn u_n - integral e^{-2t} u'' Psi_m dt
// for a closed-form u with known u''. Integrals use the basis rule, so u
// should be smooth on [0,T].
std::vector<double> projection_residual(const std::function<double(double)>& u,
                                        const std::function<double(double)>& u_tt,
                                        const BasisSet& basis);

} // namespace maxrec

#endif

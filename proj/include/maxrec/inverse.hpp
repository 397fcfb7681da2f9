// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0
//
// Quasi-reversibility inversion: weighted residual blocks of the Tikhonov
// functional, the matrix-free normal operator N = A^T A + eps_reg L^T L,
// conjugate gradients, and synthesis of the initial field.

#ifndef MAXREC_INVERSE_HPP
#define MAXREC_INVERSE_HPP

#include <functional>
#include <utility>

#include "maxrec/basis.hpp"
#include "maxrec/grid.hpp"
#include "maxrec/record.hpp"

namespace maxrec {

enum class Preconditioner { Identity, Jacobi };

struct QRConfig {
    int order = 15;              // N, modes 0..N
    double epsilon_reg = 1e-6;   // regularization weight (not the permittivity)
    double cg_tol = 1e-8;        // relative residual
    int cg_max_iter = 5000;
    Preconditioner preconditioner = Preconditioner::Identity;
    TraceVariant trace_variant = TraceVariant::NormalDerivative;

    void validate() const
    {
        if (order < 0)
            throw ConfigError("QRConfig: order must be >= 0");
        if (!(epsilon_reg > 0.0))
            throw ConfigError("QRConfig: epsilon_reg must be positive");
        if (!(cg_tol > 0.0 && cg_tol < 1.0))
            throw ConfigError("QRConfig: cg_tol must lie in (0,1)");
        if (cg_max_iter < 1)
            throw ConfigError("QRConfig: cg_max_iter must be >= 1");
    }
};

// N+1 spatial coefficient fields v_0..v_N on one grid.
struct ModeStack {
    Grid3 grid;
    std::vector<VectorGrid> modes;

    ModeStack() = default;
    ModeStack(const Grid3& g, int count) : grid(g), modes(count, VectorGrid(g)) {}

    int count() const { return static_cast<int>(modes.size()); }
    void fill(double v)
    {
        for (auto& m : modes)
            for (auto& c : m.comp)
                std::fill(c.begin(), c.end(), v);
    }
};

// plain Euclidean dot over every stored coefficient
double stack_dot(const ModeStack& a, const ModeStack& b);
void stack_axpy(double alpha, const ModeStack& x, ModeStack& y); // y += alpha x
void stack_scale(ModeStack& x, double alpha);

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history; // relative residual per iteration
    double final_functional = 0.0;
    double wall_seconds = 0.0;
};

struct ResidualBundle {
    std::vector<VectorGrid> interior;     // sqrt(cell volume) * (CC v_m + eps sum s_mn v_n)
    std::vector<BoundaryTrace> dirichlet; // sqrt(face area) * (v_m|bnd - f_m)
    std::vector<BoundaryTrace> neumann;   // sqrt(face area) * (trace v_m - g_m)

    double squared_norm() const;
};

// Matrix-free context: caches the stiffness matrix, weights, and (for the
// Jacobi preconditioner) the probed diagonal of the normal operator.
class NormalOperator {
public:
    NormalOperator(const MediumFields& medium, const BasisSet& basis, const QRConfig& config);

    ModeStack apply(const ModeStack& v) const;      // N v
    ModeStack rhs(const ModeData& modes) const;     // b = A^T (data blocks)
    ResidualBundle bundle(const ModeStack& v, const ModeData& modes) const;
    double functional(const ModeStack& v, const ModeData& modes) const; // J(v)

    const Mat& stiffness_matrix() const { return s_; }
    const QRConfig& config() const { return config_; }

    // diagonal of N, built on demand for the Jacobi preconditioner
    const ModeStack& jacobi_diagonal() const;

private:
    ModeStack apply_data_part(const ModeStack& v, bool transpose) const;
    BoundaryTrace first_derivative_trace(const VectorGrid& v) const;
    VectorGrid first_derivative_trace_scatter(const BoundaryTrace& w) const;

    const MediumFields& medium_;
    const BasisSet& basis_;
    QRConfig config_;
    Mat s_;
    mutable ModeStack diag_;      // lazily probed
    mutable bool diag_ready_ = false;
};

// Free-function forms of the spec operations (each builds a context).
ResidualBundle residual_bundle(const ModeStack& v, const ModeData& modes,
                               const MediumFields& medium, const BasisSet& basis,
                               const QRConfig& config);
double functional_value(const ModeStack& v, const ModeData& modes, const MediumFields& medium,
                        const BasisSet& basis, const QRConfig& config);
ModeStack normal_apply(const ModeStack& v, const MediumFields& medium, const BasisSet& basis,
                       const QRConfig& config);
ModeStack rhs_assemble(const ModeData& modes, const MediumFields& medium,
                       const BasisSet& basis, const QRConfig& config);

// Conjugate gradients on an SPD operator with optional diagonal
// preconditioner. Exhausting cg_max_iter returns the current iterate with
// converged = false rather than throwing.
std::pair<ModeStack, SolveReport> cg_solve(
    const std::function<ModeStack(const ModeStack&)>& op, const ModeStack& b,
    const QRConfig& config, const ModeStack* diag = nullptr);

// E_comp(x) = sum_n v_n(x) Psi_n(0)
VectorGrid reconstruct_initial(const ModeStack& v, const BasisSet& basis);

// rhs_assemble -> cg_solve -> reconstruct_initial
std::pair<VectorGrid, SolveReport> invert(const ModeData& modes, const MediumFields& medium,
                                          const BasisSet& basis, const QRConfig& config);

} // namespace maxrec

#endif

#pragma once

// Newton iteration for the stationary truncated model, written as S f = P(f) with
// P(f) = p(f, f). Each step solves the linearization
//
//   V_{f^n}(df) := S df - 2 p(f^n, df) = -S f^n + P(f^n) =: H_n
//
// on rows 1..N-1. V maps into the mass-orthogonal complement, so row N is replaced by
// the mass constraint sum_i i df_i = 0, which keeps every iterate at the initial mass.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "coagfrag/grid.hpp"

namespace coagfrag {

struct NewtonSystem {
    /// Rows 1..N-1: V_{f^n}. Row N: (i/N)_i, the mass constraint scaled to O(1) entries.
    Eigen::MatrixXd matrix;
    /// H_n on rows 1..N-1, zero on row N.
    Eigen::VectorXd rhs;
};

struct NewtonStepResult {
    RateVector next;  ///< f^n + df; may carry small negative entries mid-iteration
    double increment_norm;
};

struct NewtonOptions {
    int max_iter = 5;
    double tol_residual = 1e-10;
};

struct NewtonReport {
    int iterations = 0;
    double residual_norm = 0.0;   ///< max |S f - P(f)| at exit
    double increment_norm = 0.0;  ///< max |df| of the last step (0 if no step was taken)
    bool converged = false;
    Distribution solution;
    /// Residual before each step and at exit; size iterations + 1.
    std::vector<double> residual_history;
    std::vector<double> mass_history;
};

/// f_i = m1 exp(-ih) / (h sum_j jh exp(-jh)); mass h sum (ih) f_i = m1.
Distribution exponential_init(double m1, const Grid& grid);

namespace kernels {
NewtonSystem assemble_newton_system(std::span<const double> fn, double h);
/// Full N-row linearized operator V_{f^n}(df), used to check the range property.
std::vector<double> apply_linearization(std::span<const double> fn, std::span<const double> df,
                                        double h);
/// max_i |(S f)_i - (P f)_i|
double stationary_residual(std::span<const double> f, double h);
NewtonStepResult newton_step(const Grid& grid, std::span<const double> fn);
}  // namespace kernels

template <GridFunction F>
NewtonSystem assemble_newton_system(const F& fn) {
    return kernels::assemble_newton_system(fn.values(), fn.grid().h());
}

template <GridFunction F>
double stationary_residual(const F& f) {
    return kernels::stationary_residual(f.values(), f.grid().h());
}

/// One Newton step by dense LU with partial pivoting. Throws SolverError(SingularSystem)
/// when a pivot falls below 1e-13 times the largest matrix entry.
template <GridFunction F>
NewtonStepResult newton_step(const F& fn) {
    return kernels::newton_step(fn.grid(), fn.values());
}

NewtonReport solve_equilibrium(double m1, const Grid& grid, const NewtonOptions& options = {});

/// Same iteration started from a given state instead of exponential_init.
NewtonReport solve_equilibrium_from(const Distribution& initial,
                                    const NewtonOptions& options = {});

}  // namespace coagfrag

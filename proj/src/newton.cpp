#include "coagfrag/newton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coagfrag/error.hpp"
#include "coagfrag/operators.hpp"

namespace coagfrag {

Distribution exponential_init(double m1, const Grid& grid) {
    if (!(m1 > 0.0)) {
        throw ValidationError("mass m1 must be positive");
    }
    const std::size_t N = grid.N();
    const double h = grid.h();
    std::vector<double> values(N);
    double norm = 0.0;
    for (std::size_t j = 1; j <= N; ++j) {
        values[j - 1] = std::exp(-static_cast<double>(j) * h);
        norm += static_cast<double>(j) * h * values[j - 1];
    }
    norm *= h;
    for (double& v : values) {
        v = m1 * v / norm;
    }
    return Distribution(grid, std::move(values));
}

namespace kernels {

NewtonSystem assemble_newton_system(std::span<const double> fn, double h) {
    const std::size_t N = fn.size();
    const auto prefix = prefix_sums(fn);
    const auto n = static_cast<Eigen::Index>(N);
    NewtonSystem system{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
    Eigen::MatrixXd& A = system.matrix;
    const double inv_n = 1.0 / static_cast<double>(N);

    // Column-wise: Eigen storage is column-major and every term is contiguous in i.
    for (std::size_t j = 1; j <= N; ++j) {
        double* col = A.col(static_cast<Eigen::Index>(j - 1)).data();
        const std::size_t operator_rows = N - 1;
        // -2 sum_{j>=i} df_j/(j+1)
        const double frag = -2.0 / static_cast<double>(j + 1);
        for (std::size_t i = 1; i <= std::min(j, operator_rows); ++i) {
            col[i - 1] = frag;
        }
        // -2h sum_{j<i} df_j f_{i-j}
        for (std::size_t i = j + 1; i <= operator_rows; ++i) {
            col[i - 1] = -2.0 * h * fn[i - j - 1];
        }
        // +2 f_i h sum_{j<=N-i} df_j
        for (std::size_t i = 1; i <= std::min(N - j, operator_rows); ++i) {
            col[i - 1] += 2.0 * h * fn[i - 1];
        }
        // (1 + 2h sum_{k<=N-j} f_k) df_j
        if (j <= operator_rows) {
            col[j - 1] += 1.0 + 2.0 * h * prefix[N - j];
        }
        col[N - 1] = static_cast<double>(j) * inv_n;
    }

    const auto S = apply_S(fn);
    const auto P = coagulation(fn, h);
    for (std::size_t i = 0; i + 1 < N; ++i) {
        system.rhs(static_cast<Eigen::Index>(i)) = -S[i] + P[i];
    }
    system.rhs(n - 1) = 0.0;
    return system;
}

std::vector<double> apply_linearization(std::span<const double> fn, std::span<const double> df,
                                        double h) {
    auto out = apply_S(df);
    const auto cross = bilinear_p(fn, df, h);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] -= 2.0 * cross[i];
    }
    return out;
}

double stationary_residual(std::span<const double> f, double h) {
    const auto S = apply_S(f);
    const auto P = coagulation(f, h);
    double worst = 0.0;
    for (std::size_t i = 0; i < S.size(); ++i) {
        worst = std::max(worst, std::abs(S[i] - P[i]));
    }
    return worst;
}

NewtonStepResult newton_step(const Grid& grid, std::span<const double> fn) {
    NewtonSystem system = assemble_newton_system(fn, grid.h());
    const double scale = system.matrix.cwiseAbs().maxCoeff();

    Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu(system.matrix);
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot >= 1e-13 * scale)) {
        std::ostringstream msg;
        msg << "linearization not invertible (min pivot " << min_pivot << ", matrix max-norm "
            << scale << ")";
        throw SolverError(SolverError::Kind::SingularSystem, msg.str());
    }
    const Eigen::VectorXd delta = lu.solve(system.rhs);

    std::vector<double> next(fn.begin(), fn.end());
    double increment = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        const double d = delta(static_cast<Eigen::Index>(i));
        if (!std::isfinite(d)) {
            throw SolverError(SolverError::Kind::BlowUp, "non-finite Newton increment");
        }
        next[i] += d;
        increment = std::max(increment, std::abs(d));
    }
    return NewtonStepResult{RateVector(grid, std::move(next)), increment};
}

}  // namespace kernels

namespace {

Distribution to_solution(const Grid& grid, std::vector<double> values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] < -kNegativeClamp) {
            std::ostringstream msg;
            msg << "Newton solution is negative at i = " << k + 1 << " (" << values[k] << ")";
            throw SolverError(SolverError::Kind::NegativeState, msg.str());
        }
    }
    return Distribution(grid, std::move(values));
}

}  // namespace

NewtonReport solve_equilibrium_from(const Distribution& initial, const NewtonOptions& options) {
    if (options.max_iter < 0) {
        throw ValidationError("iteration limit must be non-negative");
    }
    if (!(options.tol_residual > 0.0)) {
        throw ValidationError("residual tolerance must be positive");
    }
    const Grid grid = initial.grid();
    const double h = grid.h();
    std::vector<double> f(initial.values().begin(), initial.values().end());

    std::vector<double> residuals;
    std::vector<double> masses;
    int iterations = 0;
    int growth_streak = 0;
    double increment = 0.0;
    double previous_increment = 0.0;
    bool converged = false;

    for (;;) {
        const double r = kernels::stationary_residual(f, h);
        residuals.push_back(r);
        masses.push_back(kernels::moment(f, h, 1, MassConvention::ModelDPrime));
        if (r <= options.tol_residual) {
            converged = true;
            break;
        }
        if (iterations >= options.max_iter) {
            break;
        }
        auto step = kernels::newton_step(grid, f);
        ++iterations;
        increment = step.increment_norm;
        growth_streak = (iterations > 1 && increment > previous_increment) ? growth_streak + 1 : 0;
        if (growth_streak >= 3) {
            throw SolverError(SolverError::Kind::Diverged,
                              "Newton diverged: increment grew for 3 consecutive iterations");
        }
        previous_increment = increment;
        f = std::move(step.next).release();
    }

    return NewtonReport{iterations,
                        residuals.back(),
                        increment,
                        converged,
                        to_solution(grid, std::move(f)),
                        std::move(residuals),
                        std::move(masses)};
}

NewtonReport solve_equilibrium(double m1, const Grid& grid, const NewtonOptions& options) {
    return solve_equilibrium_from(exponential_init(m1, grid), options);
}

}  // namespace coagfrag

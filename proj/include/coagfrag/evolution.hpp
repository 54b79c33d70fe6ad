#pragma once

#include <span>
#include <vector>

#include "coagfrag/grid.hpp"
#include "coagfrag/operators.hpp"

namespace coagfrag {

enum class StepMode { Fixed, Adaptive };

/// Adaptive mode: a step is accepted when the candidate stays non-negative and
/// non-increasing in i up to the cut-off kink; then dt <- min(grow dt, dt_max). Otherwise the candidate is
/// discarded, dt <- shrink dt, and the step is retried from the same state.
struct StepPolicy {
    StepMode mode = StepMode::Adaptive;
    double dt0 = 1e-2;
    double dt_fixed = 1.0;
    double dt_max = 1.1;
    double grow = 1.10;
    double shrink = 0.90;

    static StepPolicy fixed(double dt);
    static StepPolicy adaptive();

    void validate() const;
};

struct Snapshot {
    double t;
    Distribution f;
};

struct Trajectory {
    /// t = 0, the requested snapshot times, and t_end; strictly increasing.
    std::vector<Snapshot> snapshots;
    long accepted_steps = 0;
    long rejected_steps = 0;
    double final_dt = 0.0;
    /// Fixed mode only: accepted candidates that were negative / not monotone.
    long flagged_negative = 0;
    long flagged_nonmonotone = 0;

    /// Snapshot recorded at time t (exact match up to 1e-9); throws if absent.
    const Snapshot& at(double t) const;
    /// max_k |mass(snapshot_k) - mass(snapshot_0)| / mass(snapshot_0), model D' convention.
    double mass_drift() const;
};

/// Constant f_i = 2 m1 / (h^2 N (N+1)) with model D' mass m1.
Distribution uniform_init(double m1, const Grid& grid);

struct EulerCandidate {
    RateVector state;  ///< f + dt * full_rhs(f)
    bool nonnegative;
    bool monotone;     ///< kernels::is_monotone_to_cutoff(state)
};

namespace kernels {
/// f_{i+1} <= f_i (1 + 1e-12) + 1e-300 for all i.
bool is_monotone(std::span<const double> f);
/// Non-increasing (same tolerance) up to the smallest entry and non-decreasing after it.
/// The truncated equilibrium turns up over the last points before L, so a strictly
/// non-increasing test would reject the solution itself; a bump or a zigzag still fails.
bool is_monotone_to_cutoff(std::span<const double> f);
EulerCandidate euler_step(const Grid& grid, std::span<const double> f, double dt);
}  // namespace kernels

template <GridFunction F>
EulerCandidate euler_step(const F& f, double dt) {
    return kernels::euler_step(f.grid(), f.values(), dt);
}

Trajectory evolve(const Distribution& f0, double t_end, const StepPolicy& policy,
                  std::span<const double> snapshot_times);

}  // namespace coagfrag

#include "coagfrag/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace {

constexpr double kMinStep = 1e-8;
constexpr double kTimeMatch = 1e-9;

}  // namespace

StepPolicy StepPolicy::fixed(double dt) {
    StepPolicy policy;
    policy.mode = StepMode::Fixed;
    policy.dt_fixed = dt;
    return policy;
}

StepPolicy StepPolicy::adaptive() { return StepPolicy{}; }

void StepPolicy::validate() const {
    if (mode == StepMode::Fixed) {
        if (!(dt_fixed > 0.0) || !std::isfinite(dt_fixed)) {
            throw ValidationError("fixed time step must be positive");
        }
        return;
    }
    if (!(dt0 > 0.0) || !(dt_max > 0.0) || dt0 > dt_max) {
        throw ValidationError("adaptive policy needs 0 < dt0 <= dt_max");
    }
    if (!(shrink > 0.0 && shrink < 1.0 && grow > 1.0)) {
        throw ValidationError("adaptive policy needs 0 < shrink < 1 < grow");
    }
}

const Snapshot& Trajectory::at(double t) const {
    for (const auto& s : snapshots) {
        if (std::abs(s.t - t) <= kTimeMatch * std::max(1.0, std::abs(t))) {
            return s;
        }
    }
    std::ostringstream msg;
    msg << "no snapshot at t = " << t;
    throw ValidationError(msg.str());
}

double Trajectory::mass_drift() const {
    if (snapshots.empty()) {
        return 0.0;
    }
    const double m_ref = moment(snapshots.front().f, 1, MassConvention::ModelDPrime);
    double drift = 0.0;
    for (const auto& s : snapshots) {
        const double m = moment(s.f, 1, MassConvention::ModelDPrime);
        drift = std::max(drift, std::abs(m - m_ref) / m_ref);
    }
    return drift;
}

Distribution uniform_init(double m1, const Grid& grid) {
    if (!(m1 > 0.0)) {
        throw ValidationError("mass m1 must be positive");
    }
    const double h = grid.h();
    const auto N = static_cast<double>(grid.N());
    const double c = 2.0 * m1 / (h * h * N * (N + 1.0));
    return Distribution(grid, std::vector<double>(grid.N(), c));
}

namespace kernels {

bool is_monotone(std::span<const double> f) {
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
        if (f[k + 1] > f[k] * (1.0 + 1e-12) + 1e-300) {
            return false;
        }
    }
    return true;
}

bool is_monotone_to_cutoff(std::span<const double> f) {
    if (f.empty()) {
        return true;
    }
    const auto low = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    for (std::size_t k = 0; k < low; ++k) {
        if (f[k + 1] > f[k] * (1.0 + 1e-12) + 1e-300) {
            return false;
        }
    }
    for (std::size_t k = low; k + 1 < f.size(); ++k) {
        if (f[k] > f[k + 1] * (1.0 + 1e-12) + 1e-300) {
            return false;
        }
    }
    return true;
}

EulerCandidate euler_step(const Grid& grid, std::span<const double> f, double dt) {
    if (!(dt > 0.0)) {
        throw ValidationError("time step must be positive");
    }
    auto next = full_rhs(f, grid.h());
    bool nonnegative = true;
    for (std::size_t k = 0; k < next.size(); ++k) {
        next[k] = f[k] + dt * next[k];
        nonnegative = nonnegative && next[k] >= 0.0;
    }
    const bool monotone = is_monotone_to_cutoff(next);
    return EulerCandidate{RateVector(grid, std::move(next)), nonnegative, monotone};
}

}  // namespace kernels

namespace {

Distribution snapshot_of(const Grid& grid, const std::vector<double>& state, double t) {
    for (std::size_t k = 0; k < state.size(); ++k) {
        if (state[k] < -kNegativeClamp) {
            std::ostringstream msg;
            msg << "state is negative at i = " << k + 1 << ", t = " << t << " (" << state[k] << ")";
            throw SolverError(SolverError::Kind::NegativeState, msg.str());
        }
    }
    return Distribution(grid, state);
}

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

Trajectory evolve(const Distribution& f0, double t_end, const StepPolicy& policy,
                  std::span<const double> snapshot_times) {
    policy.validate();
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw ValidationError("end time must be non-negative");
    }
    std::vector<double> targets;
    for (double t : snapshot_times) {
        if (!(t > 0.0) || t > t_end * (1.0 + kTimeMatch)) {
            std::ostringstream msg;
            msg << "snapshot time " << t << " outside (0, " << t_end << "]";
            throw ValidationError(msg.str());
        }
        if (!targets.empty() && !(t > targets.back())) {
            throw ValidationError("snapshot times must be strictly increasing");
        }
        targets.push_back(std::min(t, t_end));
    }
    if (t_end > 0.0 && (targets.empty() || targets.back() < t_end)) {
        targets.push_back(t_end);
    }

    const Grid grid = f0.grid();
    Trajectory traj;
    traj.snapshots.push_back(Snapshot{0.0, f0});

    std::vector<double> state(f0.values().begin(), f0.values().end());
    const bool adaptive = policy.mode == StepMode::Adaptive;
    double dt = adaptive ? policy.dt0 : policy.dt_fixed;
    double t = 0.0;

    for (double target : targets) {
        while (t < target) {
            const double remaining = target - t;
            const bool landing = remaining <= dt * (1.0 + kTimeMatch);
            const double step = landing ? remaining : dt;

            EulerCandidate cand = kernels::euler_step(grid, state, step);
            if (!all_finite(cand.state.values())) {
                std::ostringstream msg;
                msg << "numerical blow-up at t = " << t << " (dt = " << step << ")";
                throw SolverError(SolverError::Kind::BlowUp, msg.str());
            }

            if (adaptive && !(cand.nonnegative && cand.monotone)) {
                ++traj.rejected_steps;
                dt = policy.shrink * step;
                if (dt < kMinStep) {
                    std::ostringstream msg;
                    msg << "step collapse at t = " << t << " (dt = " << dt << ")";
                    throw SolverError(SolverError::Kind::StepCollapse, msg.str());
                }
                continue;
            }

            if (!adaptive) {
                traj.flagged_negative += cand.nonnegative ? 0 : 1;
                traj.flagged_nonmonotone += cand.monotone ? 0 : 1;
            }
            state = std::move(cand.state).release();
            t = landing ? target : t + step;
            ++traj.accepted_steps;
            if (adaptive) {
                dt = std::min(policy.grow * dt, policy.dt_max);
            }
        }
        traj.snapshots.push_back(Snapshot{target, snapshot_of(grid, state, target)});
    }
    traj.final_dt = dt;
    return traj;
}

}  // namespace coagfrag

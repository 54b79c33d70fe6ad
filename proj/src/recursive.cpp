#include "coagfrag/recursive.hpp"

#include <cmath>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace {

constexpr double kBreakdown = -1e-13;

template <typename Real>
EquilibriumSequence run_recursion(double m0_in, double h, std::size_t M) {
    const Real m0 = m0_in;
    const Real denom = Real(1) + Real(2) * m0;

    std::vector<Real> f(M);
    std::vector<Real> b(M + 1);
    b[0] = (m0 - m0 * m0) / Real(2);

    for (std::size_t i = 1; i <= M; ++i) {
        const Real bi = b[i - 1];
        if (static_cast<double>(bi) < kBreakdown) {
            std::ostringstream msg;
            msg << "recursion breakdown: b_" << i << " = " << static_cast<double>(bi);
            throw SolverError(SolverError::Kind::Breakdown, msg.str());
        }
        Real conv = 0;
        for (std::size_t j = 1; j < i; ++j) {
            conv += f[j - 1] * f[i - j - 1];
        }
        Real fi = (Real(2) * bi + conv) / denom;
        if (fi < Real(0)) {
            if (static_cast<double>(fi) < kBreakdown) {
                std::ostringstream msg;
                msg << "recursion breakdown: f_" << i << " = " << static_cast<double>(fi);
                throw SolverError(SolverError::Kind::Breakdown, msg.str());
            }
            fi = 0;
        }
        f[i - 1] = fi;
        b[i] = bi - fi / static_cast<Real>(i + 1);
    }

    EquilibriumSequence seq;
    seq.h = h;
    seq.m0 = m0_in;
    seq.m1 = mass_from_m0(m0_in, h);
    seq.values.reserve(M);
    for (const Real& v : f) {
        seq.values.push_back(static_cast<double>(v));
    }
    seq.b.reserve(M + 1);
    for (const Real& v : b) {
        seq.b.push_back(static_cast<double>(v));
    }
    return seq;
}

std::optional<std::size_t> find_cancellation_onset(const EquilibriumSequence& seq) {
    // b_i = sum_{j>=i} f_j/(j+1), re-summed backwards from j = M without the tracked tail:
    // starting from b_{M+1} would just undo the same subtractions. The dropped tail is
    // below the rounding floor once M runs well past the decay of f.
    const std::size_t M = seq.values.size();
    std::vector<double> resummed(M);
    double acc = 0.0;
    for (std::size_t j = M; j >= 1; --j) {
        acc += seq.values[j - 1] / static_cast<double>(j + 1);
        resummed[j - 1] = acc;
    }
    for (std::size_t i = 0; i < M; ++i) {
        const double scale = std::abs(resummed[i]);
        if (scale == 0.0) {
            continue;
        }
        if (std::abs(seq.b[i] - resummed[i]) > 1e-8 * scale) {
            return i + 1;
        }
    }
    return std::nullopt;
}

}  // namespace

Distribution EquilibriumSequence::as_density(std::size_t N) const {
    if (N == 0 || N > values.size()) {
        throw ValidationError("cannot embed " + std::to_string(N) + " terms of a sequence of length " +
                              std::to_string(values.size()));
    }
    std::vector<double> density(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(N));
    for (double& v : density) {
        v /= h;
    }
    return Distribution(Grid::from_points(h, N), std::move(density));
}

double solve_m0(double m1, double h) {
    if (!(m1 > 0.0) || !std::isfinite(m1)) {
        throw ValidationError("mass m1 must be positive");
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("grid spacing h must be positive");
    }
    const double ratio = m1 / h;
    double lo = 0.0;
    double hi = 1.0;
    // m/(1-m)^3 is increasing on (0,1); compare without the division.
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gap = 1.0 - mid;
        if (mid < ratio * gap * gap * gap) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mass_from_m0(double m0, double h) {
    const double gap = 1.0 - m0;
    return h * m0 / (gap * gap * gap);
}

EquilibriumSequence equilibrium_sequence(double m0, double h, std::size_t M,
                                         const RecursionOptions& options) {
    if (!(m0 > 0.0 && m0 < 1.0)) {
        throw ValidationError("number m0 must lie in (0,1)");
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("grid spacing h must be positive");
    }
    if (M == 0) {
        throw ValidationError("number of terms must be positive");
    }
    EquilibriumSequence seq = options.precision == RecursionPrecision::Quad
                                  ? run_recursion<__float128>(m0, h, M)
                                  : run_recursion<double>(m0, h, M);
    if (options.monitor_cancellation) {
        seq.cancellation_onset = find_cancellation_onset(seq);
    }
    return seq;
}

EquilibriumSequence equilibrium_for_mass(double m1, double h, std::size_t M,
                                         const RecursionOptions& options) {
    return equilibrium_sequence(solve_m0(m1, h), h, M, options);
}

double moment(const EquilibriumSequence& seq, int k) {
    if (k != 0 && k != 1) {
        throw ValidationError("moment order must be 0 or 1");
    }
    double sum = 0.0;
    for (std::size_t i = 1; i <= seq.values.size(); ++i) {
        const double weight = k == 0 ? 1.0 : static_cast<double>(i) * seq.h;
        sum += weight * seq.values[i - 1];
    }
    return sum;
}

SmallSizeIndicator small_size_indicator(double h, double m1) {
    const double m0 = solve_m0(m1, h);
    return SmallSizeIndicator{m0 * (1.0 - m0) / (1.0 + 2.0 * m0), std::cbrt(h / m1) / 3.0};
}

}  // namespace coagfrag

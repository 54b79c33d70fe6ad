#include "coagfrag/operators.hpp"

#include <cmath>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace kernels {

double moment(std::span<const double> f, double h, int k, MassConvention convention) {
    if (k != 0 && k != 1) {
        throw ValidationError("moment order must be 0 or 1");
    }
    double sum = 0.0;
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        const double weight = (k == 0) ? 1.0 : static_cast<double>(idx + 1) * h;
        sum += weight * f[idx];
    }
    return convention == MassConvention::ModelDPrime ? h * sum : sum;
}

std::vector<double> prefix_sums(std::span<const double> f) {
    std::vector<double> prefix(f.size() + 1, 0.0);
    for (std::size_t j = 0; j < f.size(); ++j) {
        prefix[j + 1] = prefix[j] + f[j];
    }
    return prefix;
}

std::vector<double> fragmentation_tail(std::span<const double> f) {
    const std::size_t N = f.size();
    std::vector<double> tail(N, 0.0);
    double acc = 0.0;
    for (std::size_t j = N; j-- > 0;) {
        acc += f[j] / static_cast<double>(j + 2);  // j is 0-based: 1/(j_1based + 1)
        tail[j] = acc;
    }
    return tail;
}

std::vector<double> coagulation(std::span<const double> f, double h) {
    const std::size_t N = f.size();
    const auto prefix = prefix_sums(f);
    std::vector<double> out(N, 0.0);
    for (std::size_t i = 1; i <= N; ++i) {
        double gain = 0.0;
        for (std::size_t j = 1; j < i; ++j) {
            gain += f[i - j - 1] * f[j - 1];
        }
        out[i - 1] = h * gain - 2.0 * h * f[i - 1] * prefix[N - i];
    }
    return out;
}

std::vector<double> fragmentation(std::span<const double> f) {
    auto out = fragmentation_tail(f);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = -f[k] + 2.0 * out[k];
    }
    return out;
}

std::vector<double> full_rhs(std::span<const double> f, double h) {
    auto out = coagulation(f, h);
    const auto frag = fragmentation(f);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += frag[k];
    }
    return out;
}

std::vector<double> apply_S(std::span<const double> f) {
    auto out = fragmentation_tail(f);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = f[k] - 2.0 * out[k];
    }
    return out;
}

std::vector<double> bilinear_p(std::span<const double> f, std::span<const double> g, double h) {
    const std::size_t N = f.size();
    if (g.size() != N) {
        throw ValidationError("bilinear form arguments have different lengths");
    }
    const auto F = prefix_sums(f);
    const auto G = prefix_sums(g);
    std::vector<double> out(N, 0.0);
    for (std::size_t i = 1; i <= N; ++i) {
        double conv = 0.0;
        for (std::size_t j = 1; j < i; ++j) {
            conv += f[j - 1] * g[i - j - 1];
        }
        out[i - 1] = h * conv - f[i - 1] * h * G[N - i] - g[i - 1] * h * F[N - i];
    }
    return out;
}

}  // namespace kernels

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) {
        throw ValidationError("grid mismatch between operands");
    }
}

namespace {

struct Scales {
    double size;
    double amplitude;
    double time;
};

Scales scales_for(const ModelRates& rates, double m1) {
    rates.validate();
    if (!(m1 > 0.0)) {
        throw ValidationError("mass m1 must be positive");
    }
    const double p = rates.p;
    const double q = rates.q;
    return Scales{m1 * q / p, p * p / (m1 * q * q), p * p * p / (m1 * m1 * q * q)};
}

RescaledSolution map_solution(const Distribution& f, double size_scale, double amplitude_scale,
                              double time_scale) {
    const Grid grid = Grid::from_points(f.grid().h() * size_scale, f.grid().N());
    std::vector<double> values(f.values().begin(), f.values().end());
    for (double& v : values) {
        v *= amplitude_scale;
    }
    return RescaledSolution{Distribution(grid, std::move(values)), size_scale, amplitude_scale,
                            time_scale};
}

}  // namespace

RescaledSolution rescale_solution(const Distribution& f, const ModelRates& rates, double m1) {
    const Scales s = scales_for(rates, m1);
    return map_solution(f, s.size, s.amplitude, s.time);
}

RescaledSolution normalize_solution(const Distribution& f, const ModelRates& rates, double m1) {
    const Scales s = scales_for(rates, m1);
    return map_solution(f, 1.0 / s.size, 1.0 / s.amplitude, 1.0 / s.time);
}

}  // namespace coagfrag

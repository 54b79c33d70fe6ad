#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace coagfrag {

/// Uniform size grid x_i = i*h, i = 1..N, truncated at L = N*h.
class Grid {
public:
    /// Grid from spacing and truncation length. L must be an integer multiple of h
    /// up to a relative slack of 1e-9.
    static Grid from_length(double h, double L);
    static Grid from_points(double h, std::size_t N);

    double h() const noexcept { return h_; }
    double L() const noexcept { return L_; }
    std::size_t N() const noexcept { return N_; }

    /// Size at 1-based index i.
    double x(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }

    /// 1-based index of the grid point nearest to size x; throws if x is not on the grid.
    std::size_t index_of(double x) const;

    bool operator==(const Grid& other) const noexcept;

private:
    Grid(double h, double L, std::size_t N) : h_(h), L_(L), N_(N) {}

    double h_;
    double L_;
    std::size_t N_;
};

/// Non-negative size distribution on a grid; values[i-1] holds f_i ~ f(ih).
class Distribution {
public:
    /// Entries in [-1e-14, 0) are clamped to zero; anything more negative throws.
    Distribution(Grid grid, std::vector<double> values);

    static Distribution zeros(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Signed grid function: time derivatives, Newton increments, unvalidated iterates.
class RateVector {
public:
    RateVector(Grid grid, std::vector<double> values);

    static RateVector zeros(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    std::size_t size() const noexcept { return values_.size(); }

    std::vector<double> release() && { return std::move(values_); }

private:
    Grid grid_;
    std::vector<double> values_;
};

template <typename T>
concept GridFunction = requires(const T& t) {
    { t.grid() } -> std::convertible_to<const Grid&>;
    { t.values() } -> std::convertible_to<std::span<const double>>;
};

/// Coagulation rate parameter q and fragmentation parameter p; the scaled model has p = q = 1.
struct ModelRates {
    double p = 1.0;
    double q = 1.0;

    void validate() const;
};

/// Moment normalization. ModelD: sum_i (ih)^k g_i for a sequence g ~ h f(ih).
/// ModelDPrime: h * sum_i (ih)^k f_i for a distribution f ~ f(ih).
enum class MassConvention { ModelD, ModelDPrime };

/// Clamp threshold shared by every place that turns signed arrays into distributions.
inline constexpr double kNegativeClamp = 1e-14;

}  // namespace coagfrag

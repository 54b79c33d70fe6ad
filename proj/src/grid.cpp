#include "coagfrag/grid.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "coagfrag/error.hpp"

namespace coagfrag {

Grid Grid::from_length(double h, double L) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("grid spacing h must be positive");
    }
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ValidationError("truncation length L must be positive");
    }
    const double ratio = std::round(L / h);
    if (ratio < 1.0) {
        throw ValidationError("truncation length L must be at least h");
    }
    const auto N = static_cast<std::size_t>(ratio);
    if (std::abs(ratio * h - L) > h * 1e-9) {
        std::ostringstream msg;
        msg << "L = " << L << " is not an integer multiple of h = " << h;
        throw ValidationError(msg.str());
    }
    return Grid(h, L, N);
}

Grid Grid::from_points(double h, std::size_t N) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("grid spacing h must be positive");
    }
    if (N == 0) {
        throw ValidationError("grid needs at least one point");
    }
    return Grid(h, static_cast<double>(N) * h, N);
}

std::size_t Grid::index_of(double x) const {
    const double r = std::round(x / h_);
    if (r < 1.0 || r > static_cast<double>(N_) || std::abs(r * h_ - x) > h_ * 1e-6) {
        std::ostringstream msg;
        msg << "size x = " << x << " is not a grid point (h = " << h_ << ", L = " << L_ << ")";
        throw ValidationError(msg.str());
    }
    return static_cast<std::size_t>(r);
}

bool Grid::operator==(const Grid& other) const noexcept {
    return N_ == other.N_ && h_ == other.h_;
}

Distribution::Distribution(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.N()) {
        throw ValidationError("distribution length does not match grid");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        double& v = values_[k];
        if (!std::isfinite(v)) {
            throw ValidationError("distribution entry " + std::to_string(k + 1) + " is not finite");
        }
        if (v < 0.0) {
            if (v < -kNegativeClamp) {
                std::ostringstream msg;
                msg << "distribution entry " << k + 1 << " is negative (" << v << ")";
                throw ValidationError(msg.str());
            }
            v = 0.0;
        }
    }
}

Distribution Distribution::zeros(Grid grid) {
    return Distribution(grid, std::vector<double>(grid.N(), 0.0));
}

RateVector::RateVector(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.N()) {
        throw ValidationError("rate vector length does not match grid");
    }
}

RateVector RateVector::zeros(Grid grid) {
    return RateVector(grid, std::vector<double>(grid.N(), 0.0));
}

void ModelRates::validate() const {
    if (!(p > 0.0) || !(q > 0.0)) {
        throw ValidationError("rate parameters p and q must be positive");
    }
}

}  // namespace coagfrag

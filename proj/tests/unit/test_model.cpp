#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "coagfrag/error.hpp"
#include "coagfrag/grid.hpp"
#include "coagfrag/operators.hpp"

using namespace coagfrag;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Every ordered pair (a, b) with a + b <= N merges at rate h f_a f_b.
std::vector<double> coagulation_by_events(const std::vector<double>& f, double h) {
    const std::size_t N = f.size();
    std::vector<double> out(N, 0.0);
    for (std::size_t a = 1; a <= N; ++a) {
        for (std::size_t b = 1; a + b <= N; ++b) {
            const double r = h * f[a - 1] * f[b - 1];
            out[a + b - 1] += r;
            out[a - 1] -= r;
            out[b - 1] -= r;
        }
    }
    return out;
}

// A cluster of size k splits into each ordered pair (a, k - a) at rate 1/(k + 1).
std::vector<double> fragmentation_by_events(const std::vector<double>& f) {
    const std::size_t N = f.size();
    std::vector<double> out(N, 0.0);
    for (std::size_t k = 2; k <= N; ++k) {
        for (std::size_t a = 1; a < k; ++a) {
            const double r = f[k - 1] / static_cast<double>(k + 1);
            out[k - 1] -= r;
            out[a - 1] += r;
            out[k - a - 1] += r;
        }
    }
    return out;
}

double max_abs_diff(const std::vector<double>& a, std::span<const double> b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

TEST_CASE("grid construction and lookup") {
    const Grid g = Grid::from_length(0.01, 100.0);
    CHECK(g.N() == 10000);
    CHECK(g.x(1) == doctest::Approx(0.01));
    CHECK(g.index_of(35.0) == 3500);
    CHECK(g.index_of(100.0) == 10000);
    CHECK_THROWS_AS(g.index_of(0.005), ValidationError);
    CHECK_THROWS_AS(g.index_of(100.01), ValidationError);
    CHECK_THROWS_AS(Grid::from_length(0.3, 1.0), ValidationError);
    CHECK_THROWS_AS(Grid::from_length(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(Grid::from_length(0.1, 0.0), ValidationError);
    CHECK_THROWS_AS(Grid::from_points(1.0, 0), ValidationError);
    CHECK(Grid::from_length(1.0, 1.0).N() == 1);
    CHECK(Grid::from_points(0.5, 4) == Grid::from_length(0.5, 2.0));
}

TEST_CASE("distribution clamps roundoff negatives and rejects real ones") {
    const Grid g = Grid::from_points(1.0, 3);
    const Distribution d(g, {1.0, -5e-15, 0.5});
    CHECK(d[1] == 0.0);
    CHECK_THROWS_AS(Distribution(g, {1.0, -1e-10, 0.5}), ValidationError);
    CHECK_THROWS_AS(Distribution(g, {1.0, NAN, 0.5}), ValidationError);
    CHECK_THROWS_AS(Distribution(g, {1.0, 0.5}), ValidationError);
}

TEST_CASE("operators agree with event enumeration for N <= 10") {
    std::mt19937_64 rng(7);
    for (std::size_t N = 1; N <= 10; ++N) {
        for (int trial = 0; trial < 20; ++trial) {
            const double h = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
            const auto f = random_vector(rng, N);
            const Distribution d(Grid::from_points(h, N), f);
            CHECK(max_abs_diff(coagulation_by_events(f, h), coagulation_rhs(d).values()) <= 1e-14);
            CHECK(max_abs_diff(fragmentation_by_events(f), fragmentation_rhs(d).values()) <= 1e-14);
        }
    }
}

TEST_CASE("full right-hand side is mass-orthogonal") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> size(1, 50);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t N = size(rng);
        const double h = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
        const auto f = random_vector(rng, N, 0.0, 10.0);
        const auto rhs = kernels::full_rhs(f, h);
        double mass_rate = 0.0;
        double scale = 0.0;
        double total = 0.0;
        for (std::size_t i = 1; i <= N; ++i) {
            mass_rate += static_cast<double>(i) * rhs[i - 1];
            scale += static_cast<double>(i) * std::abs(f[i - 1]);
            total += f[i - 1];
        }
        worst = std::max(worst, std::abs(mass_rate) / (scale * std::max(1.0, total)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("p is bilinear and S is linear") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t N = 1 + trial % 40;
        const double h = 0.1 + 0.01 * trial;
        const auto f = random_vector(rng, N, -1.0, 1.0);
        const auto g = random_vector(rng, N, -1.0, 1.0);
        const auto w = random_vector(rng, N, -1.0, 1.0);
        const double alpha = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        const double beta = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
        std::vector<double> comb(N);
        for (std::size_t k = 0; k < N; ++k) comb[k] = alpha * f[k] + beta * g[k];

        const auto lhs = kernels::bilinear_p(comb, w, h);
        const auto pf = kernels::bilinear_p(f, w, h);
        const auto pg = kernels::bilinear_p(g, w, h);
        const auto s_lhs = kernels::apply_S(comb);
        const auto sf = kernels::apply_S(f);
        const auto sg = kernels::apply_S(g);
        for (std::size_t k = 0; k < N; ++k) {
            CHECK(std::abs(lhs[k] - (alpha * pf[k] + beta * pg[k])) <= 1e-12);
            CHECK(std::abs(s_lhs[k] - (alpha * sf[k] + beta * sg[k])) <= 1e-14);
        }
        const auto pfw = kernels::bilinear_p(f, w, h);
        const auto pwf = kernels::bilinear_p(w, f, h);
        CHECK(max_abs_diff(pfw, pwf) <= 1e-14);
    }
}

TEST_CASE("S and p reproduce the fragmentation and coagulation terms") {
    std::mt19937_64 rng(5);
    const auto f = random_vector(rng, 25);
    const double h = 0.2;
    const Distribution d(Grid::from_points(h, 25), f);
    const auto s = apply_S(d);
    const auto frag = fragmentation_rhs(d);
    const auto p = apply_p(d, d);
    const auto coag = coagulation_rhs(d);
    for (std::size_t k = 0; k < f.size(); ++k) {
        CHECK(s[k] == doctest::Approx(-frag[k]).epsilon(1e-14));
        CHECK(p[k] == doctest::Approx(coag[k]).epsilon(1e-13).scale(1.0));
    }
    CHECK_THROWS_AS(apply_p(d, Distribution::zeros(Grid::from_points(h, 24))), ValidationError);
}

TEST_CASE("moment conventions") {
    const Grid g = Grid::from_points(0.5, 4);
    const Distribution d(g, {1.0, 2.0, 3.0, 4.0});
    CHECK(moment(d, 0, MassConvention::ModelD) == doctest::Approx(10.0));
    CHECK(moment(d, 1, MassConvention::ModelD) == doctest::Approx(0.5 * (1 + 4 + 9 + 16)));
    CHECK(moment(d, 1, MassConvention::ModelDPrime) == doctest::Approx(0.25 * (1 + 4 + 9 + 16)));
    CHECK_THROWS_AS(moment(d, 2, MassConvention::ModelD), ValidationError);
}

TEST_CASE("rescaling to general rates and back") {
    std::mt19937_64 rng(9);
    const Distribution d(Grid::from_points(0.1, 30), random_vector(rng, 30));
    const ModelRates rates{2.0, 0.5};
    const double m1 = 3.0;
    const auto general = rescale_solution(d, rates, m1);
    CHECK(general.size_scale == doctest::Approx(m1 * rates.q / rates.p));
    CHECK(general.amplitude_scale == doctest::Approx(rates.p * rates.p / (m1 * rates.q * rates.q)));
    CHECK(general.f.grid().h() == doctest::Approx(0.1 * general.size_scale));

    // Mass scales as amplitude * size^2, which equals m1 for a unit-mass input.
    const double ratio = moment(general.f, 1, MassConvention::ModelDPrime) /
                         moment(d, 1, MassConvention::ModelDPrime);
    CHECK(ratio == doctest::Approx(general.amplitude_scale * general.size_scale * general.size_scale));
    CHECK(ratio == doctest::Approx(m1));

    const auto back = normalize_solution(general.f, rates, m1);
    CHECK(back.f.grid().h() == doctest::Approx(0.1));
    for (std::size_t k = 0; k < d.size(); ++k) {
        CHECK(back.f[k] == doctest::Approx(d[k]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(rescale_solution(d, ModelRates{0.0, 1.0}, 1.0), ValidationError);
}

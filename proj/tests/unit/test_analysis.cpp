#include <doctest.h>

#include <cmath>
#include <vector>

#include "coagfrag/analysis.hpp"
#include "coagfrag/error.hpp"
#include "coagfrag/evolution.hpp"
#include "coagfrag/recursive.hpp"

using namespace coagfrag;

TEST_CASE("asymptote values") {
    // 30-digit references.
    CHECK(asymptote_eval(AsymptoteModel::c_large(), 10.0) ==
          doctest::Approx(0.004562242371260493).epsilon(1e-13));
    CHECK(log10_asymptote(AsymptoteModel::c_large(), 10.0) ==
          doctest::Approx(-2.340821646348948).epsilon(1e-13));
    CHECK(log10_asymptote(AsymptoteModel::c_large(), 2000.0) ==
          doctest::Approx(-133.8288138972481).epsilon(1e-13));
    CHECK(asymptote_eval(AsymptoteModel::c_small(), 0.1) ==
          doctest::Approx(1.707143092042161).epsilon(1e-13));
    CHECK(asymptote_eval(AsymptoteModel::niwa(3.0), 2.0) ==
          doctest::Approx(0.3046246830341011).epsilon(1e-13));
    CHECK(asymptote_eval(AsymptoteModel::d_large(1.0, 1.0), 100.0) ==
          doctest::Approx(6.80430203840754e-10).epsilon(1e-12));
}

TEST_CASE("log-space evaluation agrees with direct evaluation") {
    const AsymptoteModel models[] = {AsymptoteModel::c_small(), AsymptoteModel::c_large(),
                                     AsymptoteModel::d_large(0.1, 2.0), AsymptoteModel::niwa(1.5)};
    for (const auto& m : models) {
        for (double x : {0.05, 1.0, 7.5, 60.0}) {
            CHECK(log10_asymptote(m, x) == doctest::Approx(std::log10(asymptote_eval(m, x))).epsilon(1e-12));
        }
    }
    CHECK(std::isfinite(log10_asymptote(AsymptoteModel::c_large(), 1e5)));
    CHECK_THROWS_AS(asymptote_eval(AsymptoteModel::c_large(), 0.0), ValidationError);
    CHECK_THROWS_AS(asymptote_eval(AsymptoteModel::d_large(0.0, 1.0), 1.0), ValidationError);
    CHECK_THROWS_AS(asymptote_eval(AsymptoteModel::niwa(-1.0), 1.0), ValidationError);
    CHECK(parse_asymptote_kind("d-large") == AsymptoteKind::DLarge);
    CHECK(to_string(AsymptoteKind::Niwa) == "niwa");
    CHECK_THROWS_AS(parse_asymptote_kind("gauss"), ValidationError);
}

TEST_CASE("discrete asymptote approaches the continuous one") {
    CHECK(asymptote_gap_log10(1.0, 1.0, 90.0) == doctest::Approx(0.420778386105).epsilon(1e-9));
    CHECK(asymptote_gap_log10(0.1, 1.0, 90.0) == doctest::Approx(0.0456676961135).epsilon(1e-9));
    CHECK(asymptote_gap_log10(0.01, 1.0, 90.0) == doctest::Approx(0.0046065580996).epsilon(1e-9));
    CHECK(asymptote_gap_log10(0.01, 1.0, 200.0) == doctest::Approx(0.0098438983204).epsilon(1e-9));
    CHECK(asymptote_gap_log10(0.01, 1.0, 1000.0) == doctest::Approx(0.0479336453808).epsilon(1e-9));
    CHECK(asymptote_gap_log10(0.01, 1.0, 2000.0) == doctest::Approx(0.0955458292062).epsilon(1e-9));
    for (double x = 10.0; x <= 90.0; x += 5.0) {
        CHECK(std::abs(asymptote_gap_log10(1e-6, 1.0, x)) <= 1e-3);
    }
}

TEST_CASE("complete monotonicity") {
    std::vector<double> decay(40);
    for (std::size_t n = 0; n < decay.size(); ++n) decay[n] = std::exp(-0.3 * static_cast<double>(n));
    const auto ok = complete_monotonicity_check(decay, 8);
    CHECK(ok.order_satisfied == 8);
    CHECK_FALSE(ok.first_violation.has_value());

    // Decreasing and convex, but the higher differences change sign.
    const std::vector<double> bent{1.0, 0.5, 0.25, 0.125, 0.1, 0.09, 0.085};
    const auto bad = complete_monotonicity_check(bent, 4);
    REQUIRE(bad.first_violation.has_value());
    CHECK(bad.order_satisfied == bad.first_violation->first - 1);

    const std::vector<double> rising{1.0, 2.0};
    const auto r = complete_monotonicity_check(rising, 2);
    REQUIRE(r.first_violation.has_value());
    CHECK(r.first_violation->first == 1);
    CHECK(r.first_violation->second == 1);
    CHECK_THROWS_AS(complete_monotonicity_check(decay, 0), ValidationError);
}

TEST_CASE("the recursive equilibrium factor is completely monotone to several orders") {
    const auto seq = equilibrium_for_mass(1.0, 1.0, 60);
    const auto gamma = gamma_profile(seq.as_density(60));
    CHECK(complete_monotonicity_check(gamma, 3).order_satisfied >= 3);
}

TEST_CASE("relative distance and rates") {
    const Grid g = Grid::from_points(1.0, 4);
    const Distribution inf(g, {1.0, 0.5, 0.25, 0.0});
    const Distribution now(g, {1.1, 0.5, 0.2, 0.1});
    const std::vector<std::size_t> idx{1, 2, 3};
    const auto mu = relative_distance(now, inf, idx);
    CHECK(mu[0] == doctest::Approx(0.1));
    CHECK(mu[1] == 0.0);
    CHECK(mu[2] == doctest::Approx(0.2));
    const std::vector<std::size_t> zero{4};
    CHECK_THROWS_AS(relative_distance(now, inf, zero), ValidationError);
    const std::vector<std::size_t> outside{5};
    CHECK_THROWS_AS(relative_distance(now, inf, outside), ValidationError);

    CHECK(convergence_rate(0.0260, 0.0030, 20.0, 25.0) == doctest::Approx(std::log(0.026 / 0.003) / 5.0));
    CHECK_THROWS_AS(convergence_rate(0.0, 1.0, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(convergence_rate(1.0, 0.5, 2.0, 1.0), ValidationError);
}

TEST_CASE("rate table from a trajectory") {
    const Grid g = Grid::from_length(0.5, 20.0);
    const std::vector<double> times{1.0, 2.0, 3.0, 10.0};
    const auto traj = evolve(uniform_init(1.0, g), 10.0, StepPolicy::fixed(0.5), times);
    const auto& ref = traj.at(10.0).f;
    const std::vector<double> sizes{1.0, 5.0};
    const std::vector<double> mu_times{1.0, 2.0, 3.0};
    const auto table = rate_table(traj, ref, sizes, mu_times);
    REQUIRE(table.mu.size() == 2);
    REQUIRE(table.delta[0].size() == 2);
    for (std::size_t s = 0; s < 2; ++s) {
        for (std::size_t k = 0; k < 2; ++k) {
            REQUIRE(table.delta[s][k].has_value());
            CHECK(*table.delta[s][k] ==
                  doctest::Approx(std::log(table.mu[s][k] / table.mu[s][k + 1])));
        }
    }
    const std::vector<double> off_grid{0.7};
    CHECK_THROWS_AS(rate_table(traj, ref, off_grid, mu_times), ValidationError);
}

TEST_CASE("grid refinement study") {
    const std::vector<double> hs{1.0, 0.5};
    const std::vector<double> xs{10.0, 20.0};
    const auto rows = grid_refinement_study(1.0, hs, 40.0, xs);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].h == 1.0);
    CHECK(rows[3].x == 20.0);
    for (const auto& r : rows) {
        CHECK(r.asymptote_gap == doctest::Approx(std::abs(asymptote_gap_log10(r.h, 1.0, r.x))));
        CHECK(r.density_gap >= 0.0);
    }
    const std::vector<double> ascending{0.5, 1.0};
    CHECK_THROWS_AS(grid_refinement_study(1.0, ascending, 40.0, xs), ValidationError);
}

TEST_CASE("log-log slope of an exact power law") {
    const Grid g = Grid::from_length(0.01, 1.0);
    std::vector<double> v(g.N());
    for (std::size_t i = 1; i <= g.N(); ++i) v[i - 1] = 3.0 * std::pow(g.x(i), -2.0 / 3.0);
    const auto fit = loglog_slope(Distribution(g, v), 0.05, 0.5);
    CHECK(fit.slope == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log10(3.0)).epsilon(1e-12));
    CHECK(fit.points == 46);
    CHECK_THROWS_AS(loglog_slope(Distribution(g, v), 2.0, 3.0), ValidationError);
}

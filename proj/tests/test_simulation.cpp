#include "roi/simulation.hpp"

#include "oracle.hpp"

#include "doctest.h"

#include <cmath>

using namespace roi;

namespace {

SimulationConfig explicit_config(double cost, double ratio, double e, std::int64_t n, std::uint64_t seed = 42)
{
    SimulationConfig cfg;
    cfg.case_source = Money(cost);
    cfg.benefit_cost_ratio = ratio;
    cfg.e_benefit = e;
    cfg.e_cost = e;
    cfg.iterations = n;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("build_case")
{
    rng::Substream s(42, 0, kCaseDomain);
    auto c = build_case(Money(100), 2.0, s);
    CHECK(c.cost_act.amount() == 100.0);
    CHECK(c.benefit_act.amount() == 200.0);
    CHECK(c.roi_act.value() == 1.0);

    c = build_case(Money(350), 1.0, s);
    CHECK(c.roi_act.value() == 0.0);

    for (auto band : {ProjectBand::small, ProjectBand::medium, ProjectBand::large}) {
        const auto range = band_range(band);
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            rng::Substream bs(seed, 0, kCaseDomain);
            const auto bc = build_case(band, 1.5, bs);
            CHECK(bc.cost_act.amount() >= range.low);
            CHECK(bc.cost_act.amount() <= range.high);
            CHECK(bc.benefit_act.amount() == doctest::Approx(bc.cost_act.amount() * 1.5));
        }
    }

    CHECK_THROWS_AS(build_case(Money(100), 0.0, s), DomainError);
    CHECK_THROWS_AS(build_case(Money(100), -1.0, s), DomainError);
}

TEST_CASE("band ranges")
{
    CHECK(band_range(ProjectBand::small).low == 100.0);
    CHECK(band_range(ProjectBand::small).high == 500.0);
    CHECK(band_range(ProjectBand::medium).low == 501.0);
    CHECK(band_range(ProjectBand::medium).high == 900.0);
    CHECK(band_range(ProjectBand::large).low == 901.0);
    CHECK(band_range(ProjectBand::large).high == 1300.0);
    CHECK(parse_band("medium") == ProjectBand::medium);
    CHECK_THROWS(parse_band("huge"));
}

TEST_CASE("sample_draw")
{
    rng::Substream s(3, 0, kDrawDomain);
    SUBCASE("degenerate interval")
    {
        const auto d = sample_draw(Money(200), Money(100), 0.0, 0.0, s);
        CHECK(d.beta.amount() == 200.0);
        CHECK(d.zeta.amount() == 100.0);
        CHECK(d.roi_est.value() == 1.0);
    }
    SUBCASE("ten percent on both")
    {
        for (int i = 0; i < 5000; ++i) {
            const auto d = sample_draw(Money(200), Money(100), 0.1, 0.1, s);
            REQUIRE(d.beta.amount() >= 180.0);
            REQUIRE(d.beta.amount() <= 220.0);
            REQUIRE(d.zeta.amount() >= 90.0);
            REQUIRE(d.zeta.amount() <= 110.0);
            REQUIRE(d.roi_est.value() >= 7.0 / 11.0 - 1e-12);
            REQUIRE(d.roi_est.value() <= 13.0 / 9.0 + 1e-12);
            // Relative-space evaluation equals (beta - zeta) / zeta.
            CHECK(d.roi_est.value()
                  == doctest::Approx((d.beta.amount() - d.zeta.amount()) / d.zeta.amount()).epsilon(1e-12));
        }
    }
    SUBCASE("half cost error")
    {
        for (int i = 0; i < 2000; ++i) {
            const auto d = sample_draw(Money(200), Money(100), 0.0, 0.5, s);
            REQUIRE(d.zeta.amount() >= 50.0);
            REQUIRE(d.zeta.amount() <= 150.0);
        }
    }
    CHECK_THROWS_AS(sample_draw(Money(200), Money(100), 0.1, 1.0, s), DomainError);
    CHECK_THROWS_AS(sample_draw(Money(200), Money(100), 0.1, 0.999, s), DomainError);
    CHECK_THROWS_AS(sample_draw(Money(200), Money(0), 0.1, 0.1, s), DomainError);
}

TEST_CASE("run_simulation zero error is exact")
{
    for (std::int64_t n : {1, 17, 5000}) {
        const auto res = run_simulation(explicit_config(100, 2.0, 0.0, n));
        CHECK(res.mean_abs_error == 0.0);
        CHECK(res.draw_stats.std == 0.0);
        for (double r : res.roi_estimates)
            CHECK(r == res.actual_roi.value());
    }
}

TEST_CASE("run_simulation agrees with the integration oracle at 5%")
{
    // Oracle value frozen from oracle::mean_abs_error_grid(2.0, 0.05).
    constexpr double expected = 0.0667334490711;
    CHECK(oracle::mean_abs_error_grid(2.0, 0.05, 401) == doctest::Approx(expected).epsilon(1e-4));
    const auto res = run_simulation(explicit_config(100, 2.0, 0.05, 100000));
    CHECK(std::abs(res.mean_abs_error - expected) / expected < 0.03);
}

TEST_CASE("run_simulation is deterministic and thread-count independent")
{
    auto cfg = explicit_config(100, 2.0, 0.3, 50000, 9);
    const auto a = run_simulation(cfg);
    const auto b = run_simulation(cfg);
    cfg.threads = 4;
    const auto c = run_simulation(cfg);
    cfg.threads = 0;
    const auto d = run_simulation(cfg);
    CHECK(a.mean_abs_error == b.mean_abs_error);
    CHECK(a.roi_estimates == b.roi_estimates);
    CHECK(a.mean_abs_error == c.mean_abs_error);
    CHECK(a.roi_estimates == c.roi_estimates);
    CHECK(a.mean_abs_error == d.mean_abs_error);
    CHECK(a.draw_stats.p95 == d.draw_stats.p95);
}

TEST_CASE("draw_at regenerates any iteration")
{
    const auto cfg = explicit_config(250, 1.7, 0.2, 1000, 5);
    const auto res = run_simulation(cfg);
    for (std::uint64_t i : {0u, 1u, 500u, 999u})
        CHECK(draw_at(res.sim_case, cfg, i).roi_est.value() == res.roi_estimates[i]);
}

TEST_CASE("draw statistics")
{
    const auto res = run_simulation(explicit_config(100, 2.0, 0.2, 20000));
    const auto& st = res.draw_stats;
    CHECK(st.min <= st.p5);
    CHECK(st.p5 <= st.p50);
    CHECK(st.p50 <= st.p95);
    CHECK(st.p95 <= st.max);
    CHECK(st.std > 0.0);
    CHECK(st.mean == doctest::Approx(res.actual_roi.value()).epsilon(0.05));
}

TEST_CASE("scale invariance: cost drops out exactly")
{
    const auto small = run_simulation(explicit_config(100, 2.0, 0.25, 10000, 77));
    const auto large = run_simulation(explicit_config(1300, 2.0, 0.25, 10000, 77));
    CHECK(small.mean_abs_error == large.mean_abs_error);
    CHECK(small.roi_estimates == large.roi_estimates);

    SimulationConfig band_cfg = explicit_config(1, 2.0, 0.25, 10000, 77);
    band_cfg.case_source = ProjectBand::large;
    CHECK(run_simulation(band_cfg).mean_abs_error == small.mean_abs_error);
}

TEST_CASE("config validation")
{
    auto cfg = explicit_config(100, 2.0, 0.1, 10);
    cfg.iterations = 0;
    CHECK_THROWS_AS(run_simulation(cfg), DomainError);
    cfg = explicit_config(100, 0.0, 0.1, 10);
    CHECK_THROWS_AS(run_simulation(cfg), DomainError);
    cfg = explicit_config(100, 2.0, 0.1, 10);
    cfg.e_cost = 0.999;
    CHECK_THROWS_AS(run_simulation(cfg), DomainError);
    cfg.e_cost = 0.998;
    CHECK_NOTHROW(run_simulation(cfg));
    cfg.e_benefit = 1.5;
    CHECK_THROWS_AS(run_simulation(cfg), DomainError);
}

TEST_CASE("run_sweep grids and common random numbers")
{
    SweepConfig sc;
    sc.iterations = 2000;
    sc.range = sweep_range_low();
    auto rows = run_sweep(sc);
    REQUIRE(rows.size() == 10);
    CHECK(rows.front().e == 0.0);
    CHECK(rows.front().delta_r == 0.0);
    CHECK(rows.back().e == 0.45);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].delta_r > rows[i - 1].delta_r);
        CHECK(rows[i].ratio == 2.0);
        CHECK(rows[i].iterations == 2000);
        CHECK(rows[i].seed == kDefaultSeed);
    }

    sc.range = sweep_range_high();
    rows = run_sweep(sc);
    REQUIRE(rows.size() == 12);
    CHECK(rows.front().e == 0.40);
    CHECK(rows.back().e == 0.95);

    // A sweep point equals the stand-alone run at the same e.
    SimulationConfig single;
    single.iterations = 2000;
    single.e_benefit = single.e_cost = 0.65;
    CHECK(rows[5].delta_r == run_simulation(single).mean_abs_error);

    sc.range = {0.5, 1.0};
    CHECK_THROWS_AS(run_sweep(sc), DomainError);
    sc.range = sweep_range_low();
    sc.step = 0.0;
    CHECK_THROWS_AS(run_sweep(sc), DomainError);
}

TEST_CASE("convergence_study")
{
    auto cfg = explicit_config(100, 2.0, 0.3, 1);
    const std::vector<std::int64_t> ns{1000, 20000, 100000};
    const auto rows = convergence_study(cfg, ns, 8);
    REQUIRE(rows.size() == 3);
    CHECK(rows[2].spread < rows[0].spread);
    for (const auto& r : rows) {
        CHECK(r.min <= r.mean);
        CHECK(r.mean <= r.max);
        CHECK(r.spread == doctest::Approx(r.max - r.min));
    }

    CHECK_THROWS_AS(convergence_study(cfg, ns, 1), DomainError);
    CHECK_THROWS_AS(convergence_study(cfg, std::vector<std::int64_t>{}, 5), DomainError);
    CHECK_THROWS_AS(convergence_study(cfg, std::vector<std::int64_t>{100, 10}, 5), DomainError);

    const auto zero = convergence_study(explicit_config(100, 2.0, 0.0, 1), ns, 3);
    for (const auto& r : zero)
        CHECK(r.spread == 0.0);
}

TEST_CASE("compare_with_analytic")
{
    SUBCASE("ten percent")
    {
        const auto res = run_simulation(explicit_config(100, 2.0, 0.1, 30000));
        const auto cmp = compare_with_analytic(res);
        CHECK(cmp.max_probable_error == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(cmp.probable_error == doctest::Approx(0.2828427124746190).epsilon(1e-12));
        CHECK(cmp.draws_contained);
        CHECK(cmp.approximations_ordered);
        // Oracle: 0.133870138 at e = 0.1 (small-error estimate (2/3)*2*0.1).
        CHECK(cmp.mc_mean_abs_error == doctest::Approx(0.133870138).epsilon(0.03));
    }
    SUBCASE("zero error")
    {
        const auto cmp = compare_with_analytic(run_simulation(explicit_config(100, 2.0, 0.0, 100)));
        CHECK(cmp.max_probable_error == 0.0);
        CHECK(cmp.probable_error == 0.0);
        CHECK(cmp.mc_mean_abs_error == 0.0);
        CHECK(cmp.exact_bounds.lower.value() == cmp.exact_bounds.upper.value());
        CHECK(cmp.draws_contained);
    }
    SUBCASE("containment holds for uneven errors and bands")
    {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            SimulationConfig cfg;
            cfg.case_source = ProjectBand::medium;
            cfg.benefit_cost_ratio = 0.5 + 0.3 * static_cast<double>(seed);
            cfg.e_benefit = 0.05 * static_cast<double>(seed);
            cfg.e_cost = 0.9 - 0.07 * static_cast<double>(seed);
            cfg.iterations = 5000;
            cfg.seed = seed;
            CHECK(compare_with_analytic(run_simulation(cfg)).draws_contained);
        }
    }
}

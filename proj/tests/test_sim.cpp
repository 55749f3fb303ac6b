#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cec/report.hpp"
#include "cec/sim.hpp"
#include "support.hpp"

using namespace cec;

TEST_SUITE("sim") {

TEST_CASE("case 1 with the coded channel") {
    const auto r = sim::run(cec::testing::bundled("case1_ces"));
    const auto& s = r.summary;
    REQUIRE(s.completed);
    CHECK_FALSE(s.breach_time);
    CHECK(s.contained_spp);
    CHECK(s.contained_after_T);
    REQUIRE(s.tunnel_entry_time);
    CHECK(*s.tunnel_entry_time < 4.0);
    CHECK(s.bits == 3 * s.trigger_count);
    CHECK(s.trigger_count == static_cast<long>(r.log.events.size()));
    CHECK(r.log.rows.size() == 20001);
    CHECK(s.capped_steps == 0);
    CHECK(s.min_theta_hat >= 0.0);
    CHECK(s.min_mu1 > 0.0);
    CHECK(s.assumption_gain_violations == 0);
    CHECK(std::isfinite(s.max_abs_v));
    CHECK(std::isfinite(s.max_theta_hat));
}

TEST_CASE("log invariants") {
    const auto r = sim::run(cec::testing::bundled("case1_ces", {{"integrator.horizon", "6"}}));
    const auto& rows = r.log.rows;
    REQUIRE(rows.size() > 2);
    const double pbar = r.summary.max_increment;
    std::size_t ev = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].t > rows[i - 1].t);
        if (!rows[i].event) {
            CHECK(rows[i].u == rows[i - 1].u);
            CHECK(rows[i].codeword.empty());
            continue;
        }
        // Every message moves u by exactly one signed increment.
        double u = rows[i - 1].u;
        while (ev < r.log.events.size() && r.log.events[ev].step == static_cast<long>(i)) {
            const auto& e = r.log.events[ev];
            CHECK(e.u_before == u);
            CHECK((e.u_after == e.u_before + e.threshold || e.u_after == e.u_before - e.threshold));
            u = e.u_after;
            ++ev;
        }
        CHECK(u == rows[i].u);
        CHECK(rows[i].bits == rows[i - 1].bits + 3 * static_cast<long>(std::count(
                                                        rows[i].codeword.begin(), rows[i].codeword.end(), ';') + 1));
    }
    CHECK(ev == r.log.events.size());
    CHECK(r.summary.max_abs_v_minus_u <= pbar + r.summary.epsilon_step);
    CHECK(r.summary.min_gap.value() >= r.summary.step);
}

TEST_CASE("baselines send the raw control") {
    const auto r = sim::run(cec::testing::bundled("case1_relative", {{"integrator.horizon", "3"}}));
    CHECK(r.summary.bits == 8 * r.summary.trigger_count);
    for (const auto& e : r.log.events) {
        CHECK(e.codeword.empty());
        CHECK(std::abs(e.u_after - e.u_before) >= e.threshold);
    }
    for (const auto& row : r.log.rows) {
        if (row.event) CHECK(row.u == row.v);
    }
}

TEST_CASE("runs are deterministic") {
    const auto cfg = cec::testing::bundled("case2_ces", {{"integrator.horizon", "8"}});
    std::ostringstream a, b;
    report::write_csv(a, sim::run(cfg).log);
    report::write_csv(b, sim::run(cfg).log);
    CHECK(a.str() == b.str());
}

TEST_CASE("a breach truncates the log and is reported") {
    // A tight tunnel with a slow auxiliary decay cannot hold the benchmark plant.
    const auto r = sim::run(cec::testing::bundled(
        "case1_relative", {{"performance.rho_inf", "0.01"}, {"performance.rho0", "0.02"},
                           {"auxiliary.settling_time", "0.05"}, {"integrator.horizon", "3"}}));
    const auto& s = r.summary;
    REQUIRE(s.breach_time);
    CHECK_FALSE(s.completed);
    CHECK_FALSE(s.contained_spp);
    CHECK_FALSE(s.contained_after_T);
    CHECK(s.first_violation_time == s.breach_time);
    CHECK(r.log.rows.back().t <= *s.breach_time);
    CHECK(r.log.rows.size() < 3001);
}

TEST_CASE("zero dynamics at equilibrium") {
    const auto r = sim::run(cec::testing::bundled(
        "case1_ces", {{"scenario.plant", "pure-chain-2"}, {"reference.amplitude", "0"},
                      {"reference.offset", "1.5"}, {"initial.x", "1.5, 0"}, {"integrator.horizon", "5"}}));
    REQUIRE(r.summary.completed);
    for (const auto& row : r.log.rows) {
        CHECK(row.e1 == 0.0);
        CHECK(row.v == 0.0);
    }
    CHECK(r.summary.trigger_count == 0);
    CHECK_FALSE(r.summary.min_gap);
}

TEST_CASE("third-order smoke scenario stays contained") {
    const auto r = sim::run(cec::testing::bundled("ordern_smoke"));
    CHECK(r.summary.completed);
    CHECK(r.summary.contained_spp);
    CHECK(r.summary.contained_after_T);
    CHECK(r.summary.trigger_count > 0);
    CHECK(r.summary.min_theta_hat >= 0.0);
}

TEST_CASE("the third-order path reduces to the second-order machinery") {
    // The same scenario driven through both control law paths.
    const auto a = sim::run(cec::testing::bundled("case1_ces", {{"integrator.horizon", "2"}}));
    const auto b = sim::run(
        cec::testing::bundled("case1_ces", {{"integrator.horizon", "2"}, {"controller.path", "general"}}));
    REQUIRE(a.log.rows.size() == b.log.rows.size());
    for (std::size_t i = 0; i < a.log.rows.size(); i += 97) {
        CHECK(a.log.rows[i].x[0] == doctest::Approx(b.log.rows[i].x[0]).epsilon(1e-6));
    }
}

TEST_CASE("zeno report") {
    sim::SimLog log;
    CHECK_FALSE(sim::zeno_report(log, 1e-3).min_gap);
    log.events.push_back({0.1, 100, "000", 3, 0.3, 0.0, 0.3});
    const auto single = sim::zeno_report(log, 1e-3);
    CHECK_FALSE(single.min_gap);
    CHECK(single.counts.empty());

    log.events.push_back({0.1, 100, "000", 3, 0.3, 0.3, 0.6});  // catch-up at the same instant
    log.events.push_back({0.101, 101, "100", 3, 0.3, 0.6, 0.3});
    log.events.push_back({0.2, 200, "100", 3, 0.3, 0.3, 0.0});
    const auto z = sim::zeno_report(log, 1e-3, 4);
    REQUIRE(z.min_gap);
    CHECK(*z.min_gap == doctest::Approx(1e-3));
    CHECK(z.fraction_at_step == 0.5);
    CHECK(z.counts.size() == 4);
    CHECK(z.edges.size() == 5);
    CHECK(z.counts.front() + z.counts.back() == 2);
}

TEST_CASE("compare runs every strategy and rejects mixed horizons") {
    std::vector<ScenarioConfig> cfgs;
    for (const char* name : {"case1_ces", "case1_relative", "case1_switching", "case1_fixed"}) {
        cfgs.push_back(cec::testing::bundled(name, {{"integrator.horizon", "2"}}));
    }
    const auto results = sim::compare(cfgs);
    REQUIRE(results.size() == 4);
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        CHECK(results[i].summary.name == cfgs[i].name);
        std::ostringstream a, b;
        report::write_csv(a, results[i].log);
        report::write_csv(b, sim::run(cfgs[i]).log);
        CHECK(a.str() == b.str());
    }
    cfgs[1].integrator.horizon = 3.0;
    CHECK_THROWS_AS(sim::compare(cfgs), ConfigError);
}

TEST_CASE("integrator order on the continuous loop") {
    const auto cfg = cec::testing::bundled("case1_ces");
    const double h = 0.01;
    const double x_h = sim::continuous_final_state(cfg, h, 1.0)[0];
    const double x_h2 = sim::continuous_final_state(cfg, h / 2, 1.0)[0];
    const double x_h4 = sim::continuous_final_state(cfg, h / 4, 1.0)[0];
    const double ratio = std::abs(x_h - x_h2) / std::abs(x_h2 - x_h4);
    MESSAGE("step-halving ratio " << ratio);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

}  // TEST_SUITE

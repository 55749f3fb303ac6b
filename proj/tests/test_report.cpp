#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "cec/report.hpp"
#include "support.hpp"

using namespace cec;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

long columns(const std::string& line) { return std::count(line.begin(), line.end(), ',') + 1; }

}  // namespace

TEST_SUITE("report") {

TEST_CASE("number formatting round-trips") {
    CHECK(report::format_double(0.1) == "0.1");
    CHECK(report::format_double(-2.5) == "-2.5");
    CHECK(report::format_double(1e-3) == "0.001");
    const double awkward = 0.1 + 0.2;
    CHECK(std::stod(report::format_double(awkward)) == awkward);
}

TEST_CASE("csv layout") {
    CHECK(report::csv_header(2) ==
          "t,x1,x2,e1,e_u,e_l,eta_u,eta_l,E_u,E_l,z1,theta_hat1,theta_hat2,v,u,event,codeword,bits");
    CHECK(columns(report::csv_header(3)) == 20);

    const auto r = sim::run(cec::testing::bundled("case1_ces", {{"integrator.horizon", "1"}}));
    std::ostringstream out;
    report::write_csv(out, r.log);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == r.log.rows.size() + 1);
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(columns(lines[i]) == 18);
    CHECK(lines[1].rfind("0,1.5,0,", 0) == 0);
    CHECK(lines.back().substr(lines.back().rfind(',') + 1) == std::to_string(r.summary.bits));
}

TEST_CASE("summary keys") {
    const auto r = sim::run(cec::testing::bundled("case1_ces", {{"integrator.horizon", "2"}}));
    std::ostringstream out;
    report::write_summary(out, r.summary);
    const std::string s = out.str();
    for (const char* key : {"name=case1_ces\n", "strategy=ces\n", "completed=true\n", "breach_time=none\n",
                            "bits_per_message=3\n", "contained_after_T=", "trigger_count=", "min_gap=",
                            "kappa_hat=", "capped_steps=0\n"}) {
        CHECK(s.find(key) != std::string::npos);
    }
    for (const auto& line : lines_of(s)) CHECK(line.find('=') != std::string::npos);
    CHECK(report::summary_table(r.summary).find("case1_ces (ces, benchmark2)") != std::string::npos);
}

TEST_CASE("event list") {
    sim::SimLog log;
    log.events.push_back({0.125, 125, "010", 3, 1.0, 0.0, 1.0});
    log.events.push_back({0.25, 250, "", 8, 0.2, 1.0, 0.75});
    std::ostringstream out;
    report::write_events(out, log);
    CHECK(out.str() == "time,codeword,bits,u_after\n0.125,010,3,1\n0.25,,8,0.75\n");
}

TEST_CASE("comparison table") {
    sim::Summary ok;
    ok.trigger_count = 10;
    ok.bits = 30;
    ok.completed = true;
    sim::Summary base = ok;
    base.bits = 80;
    sim::Summary broke = ok;
    broke.completed = false;
    broke.breach_time = 6.25;

    std::vector<report::ComparisonEntry> entries{
        {"case2", "ces", "case2_ces", ok, {}, "p=2"},
        {"case2", "switching", "case2_switching", base, {}, "d=0.1"},
        {"case2", "relative", "case2_relative", broke, {}, "d=0.1"},
        {"case2", "fixed", "case2_fixed", std::nullopt, "bad omega", {}},
    };
    std::ostringstream out;
    report::write_comparison(out, entries);
    const std::string s = out.str();
    CHECK(s.find("FAILED (breach) t=6.250") != std::string::npos);
    CHECK(s.find("2.667") != std::string::npos);
    CHECK(s.find("ERROR") != std::string::npos);
    CHECK(s.find("# case2_fixed: error: bad omega") != std::string::npos);
    CHECK(s.find("# case2_ces: p=2") != std::string::npos);

    CHECK(report::reference_counts("case1", "ces")->bits == 996);
    CHECK_FALSE(report::reference_counts("case2", "relative")->events);
    CHECK_FALSE(report::reference_counts("case3", "ces"));
}

TEST_CASE("codeword table") {
    std::ostringstream out;
    report::write_codeword_table(out, codec::default_ces_config());
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 9);
    CHECK(lines[1].rfind("000", 0) == 0);
    CHECK(lines[1].find("+ 0.3") != std::string::npos);
    CHECK(lines[8].rfind("111", 0) == 0);
    CHECK(lines[8].find("- 4.8") != std::string::npos);
}

}  // TEST_SUITE

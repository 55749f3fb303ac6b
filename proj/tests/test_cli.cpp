#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string output;
};

Outcome cecsim(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "stdout.txt";
    const std::string cmd = std::string("\"") + CECSIM_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream text;
    text << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("cecsim_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string config(const std::string& name) { return cec::testing::config_path(name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run writes the three output files") {
    TempDir dir("run");
    const auto r = cecsim("run --config " + config("case1_ces") + " --out " + dir.path.string(), dir.path);
    CHECK(r.code == 0);
    CHECK(r.output.find("case1_ces") != std::string::npos);
    const std::string summary = slurp(dir.path / "case1_ces.summary");
    CHECK(summary.find("contained_after_T=true") != std::string::npos);
    CHECK(summary.find("breach_time=none") != std::string::npos);
    CHECK(fs::file_size(dir.path / "case1_ces.csv") > 1000000);
    CHECK(slurp(dir.path / "case1_ces.events").rfind("time,codeword,bits,u_after\n", 0) == 0);
}

TEST_CASE("a breach exits with code 2") {
    TempDir dir("breach");
    const auto r = cecsim("run --config " + config("case1_relative") + " --out " + dir.path.string() +
                              " --horizon 3 --set performance.rho_inf=0.01 --set performance.rho0=0.02"
                              " --set auxiliary.settling_time=0.05",
                          dir.path);
    CHECK(r.code == 2);
    CHECK(slurp(dir.path / "case1_relative.summary").find("breach=true") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 1 and name the key") {
    TempDir dir("bad");
    const fs::path bad = dir.path / "bad.ini";
    std::ofstream(bad) << "[ces]\nomega = 0.3, 0.4\n";
    const auto r = cecsim("run --config " + bad.string() + " --out " + dir.path.string(), dir.path);
    CHECK(r.code == 1);
    CHECK(r.output.find("omega") != std::string::npos);

    const auto missing = cecsim("run --out " + dir.path.string(), dir.path);
    CHECK(missing.code == 1);
}

TEST_CASE("validate and table1") {
    TempDir dir("inspect");
    const auto v = cecsim("validate --config " + config("case2_ces"), dir.path);
    CHECK(v.code == 0);
    CHECK(v.output.find("ok: case2_ces") != std::string::npos);

    const auto t = cecsim("table1", dir.path);
    CHECK(t.code == 0);
    CHECK(t.output.find("110") != std::string::npos);
    CHECK(t.output.find("- 2") != std::string::npos);
}

TEST_CASE("compare over a scenario directory") {
    TempDir dir("compare");
    const fs::path cfgs = dir.path / "configs";
    fs::create_directories(cfgs);
    for (const char* name : {"case1_ces", "case1_relative"}) fs::copy_file(config(name), cfgs / (std::string(name) + ".ini"));
    const auto r = cecsim("compare --config " + cfgs.string() + " --out " + dir.path.string() + " --horizon 2",
                          dir.path);
    CHECK(r.code == 0);
    const std::string table = slurp(dir.path / "comparison.txt");
    CHECK(table.find("case1") != std::string::npos);
    CHECK(table.find("relative") != std::string::npos);
    CHECK(table.find("ref_events") != std::string::npos);
    CHECK(fs::exists(dir.path / "case1_relative.summary"));
}

TEST_CASE("sweep") {
    TempDir dir("sweep");
    const auto r = cecsim("sweep --config " + config("case1_ces") + " --out " + dir.path.string() +
                              " --horizon 1 --key ces.p --values 2",
                          dir.path);
    CHECK(r.code == 0);
    CHECK(slurp(dir.path / "case1_ces_sweep.csv").rfind("value,completed", 0) == 0);
}

}  // TEST_SUITE

// cecsim: run, compare and inspect coded event-triggered scenarios.
//
// Exit codes: 0 success, 2 envelope breach, 1 configuration or solver error.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "cec/config.hpp"
#include "cec/report.hpp"
#include "cec/sim.hpp"

namespace fs = std::filesystem;
using namespace cec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBreach = 2;

struct CommonOptions {
    std::string config;
    std::string out = ".";
    std::string strategy;
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<long> seed;
    std::vector<std::string> set;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool need_config) {
    auto* c = cmd->add_option("--config", o.config, "scenario file");
    if (need_config) c->required();
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--strategy-override", o.strategy, "ces, relative, switching or fixed");
    cmd->add_option("--step", o.step, "integrator step");
    cmd->add_option("--horizon", o.horizon, "simulated time");
    cmd->add_option("--seed", o.seed, "seed for randomized checks");
    cmd->add_option("--set", o.set, "extra section.key=value overrides");
}

std::vector<Override> overrides_of(const CommonOptions& o) {
    std::vector<Override> out;
    for (const auto& s : o.set) out.push_back(parse_override(s));
    if (o.step) out.emplace_back("integrator.step", report::format_double(*o.step));
    if (o.horizon) out.emplace_back("integrator.horizon", report::format_double(*o.horizon));
    if (o.seed) out.emplace_back("run.seed", std::to_string(*o.seed));
    if (!o.strategy.empty()) out.emplace_back("trigger.strategy", o.strategy);
    return out;
}

std::string parameters_of(const ScenarioConfig& c) {
    std::ostringstream s;
    if (c.strategy == Strategy::ces) {
        s << "p=" << c.ces.p << " m=" << c.ces.m << " omega=";
        for (std::size_t i = 0; i < c.ces.omega.size(); ++i) s << (i ? "," : "") << c.ces.omega[i];
        s << " levels=";
        for (std::size_t i = 0; i < c.ces.levels.size(); ++i) s << (i ? "," : "") << c.ces.levels[i];
    } else {
        s << "delta_bar=" << c.baseline.delta_bar << " d=" << c.baseline.d
          << " switch_level=" << c.baseline.switch_level << " fixed_delta=" << c.baseline.fixed_delta;
    }
    return s.str();
}

void write_outputs(const fs::path& dir, const sim::RunResult& r) {
    fs::create_directories(dir);
    const std::string& name = r.summary.name;
    std::ofstream csv(dir / (name + ".csv"));
    report::write_csv(csv, r.log);
    std::ofstream summary(dir / (name + ".summary"));
    report::write_summary(summary, r.summary);
    std::ofstream events(dir / (name + ".events"));
    report::write_events(events, r.log);
    if (!csv || !summary || !events) throw std::runtime_error("cannot write outputs under " + dir.string());
}

int cmd_run(const CommonOptions& o) {
    const ScenarioConfig cfg = load_config(o.config, overrides_of(o));
    const sim::RunResult r = sim::run(cfg);
    write_outputs(o.out, r);
    std::cout << report::summary_table(r.summary);
    return r.summary.breach_time ? kExitBreach : kExitOk;
}

int cmd_validate(const CommonOptions& o) {
    const ScenarioConfig cfg = load_config(o.config, overrides_of(o));
    std::cout << "ok: " << cfg.name << " (" << cfg.plant << ", " << to_string(cfg.strategy) << ", "
              << cfg.integrator.steps() << " steps)\n";
    return kExitOk;
}

int cmd_table1(const CommonOptions& o) {
    codec::CesConfig ces = codec::default_ces_config();
    if (!o.config.empty()) ces = load_config(o.config, overrides_of(o)).ces;
    report::write_codeword_table(std::cout, ces);
    return kExitOk;
}

int cmd_compare(const CommonOptions& o) {
    const fs::path dir = o.config.empty() ? fs::path(CEC_CONFIG_DIR) : fs::path(o.config);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".ini") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    const auto rank = [](const std::string& s) {
        static const std::vector<std::string> order = {"ces", "relative", "switching", "fixed"};
        return std::find(order.begin(), order.end(), s) - order.begin();
    };

    std::map<std::string, std::vector<ScenarioConfig>> groups;
    std::vector<report::ComparisonEntry> failed;
    for (const auto& f : files) {
        try {
            ScenarioConfig cfg = load_config(f, overrides_of(o));
            if (cfg.table_case.empty()) continue;
            groups[cfg.table_case].push_back(std::move(cfg));
        } catch (const std::exception& e) {
            failed.push_back({"?", "?", f.stem().string(), std::nullopt, e.what(), {}});
        }
    }

    std::vector<report::ComparisonEntry> entries;
    for (auto& [name, cfgs] : groups) {
        std::sort(cfgs.begin(), cfgs.end(), [&](const auto& a, const auto& b) {
            return rank(to_string(a.strategy)) < rank(to_string(b.strategy));
        });
        std::vector<sim::RunResult> results;
        try {
            results = sim::compare(cfgs);
        } catch (const std::exception& e) {
            for (const auto& c : cfgs) {
                entries.push_back({name, to_string(c.strategy), c.name, std::nullopt, e.what(), parameters_of(c)});
            }
            continue;
        }
        for (std::size_t i = 0; i < cfgs.size(); ++i) {
            write_outputs(o.out, results[i]);
            entries.push_back({name, to_string(cfgs[i].strategy), cfgs[i].name, results[i].summary, {},
                               parameters_of(cfgs[i])});
        }
    }
    entries.insert(entries.end(), failed.begin(), failed.end());

    fs::create_directories(o.out);
    std::ofstream table(fs::path(o.out) / "comparison.txt");
    report::write_comparison(table, entries);
    report::write_comparison(std::cout, entries);
    return table ? kExitOk : kExitError;
}

int cmd_sweep(const CommonOptions& o, const std::string& key, const std::vector<std::string>& values) {
    const std::vector<Override> base = overrides_of(o);
    ScenarioConfig first = load_config(o.config, base);
    fs::create_directories(o.out);
    std::ofstream out(fs::path(o.out) / (first.name + "_sweep.csv"));
    out << "value,completed,breach_time,trigger_count,bits,contained_after_T\n";
    for (const auto& value : values) {
        auto ov = base;
        ov.emplace_back(key, value);
        const ScenarioConfig cfg = load_config(o.config, ov);
        const sim::Summary s = sim::run(cfg).summary;
        const std::string breach = s.breach_time ? report::format_double(*s.breach_time) : "none";
        out << value << ',' << (s.completed ? "true" : "false") << ',' << breach << ',' << s.trigger_count
            << ',' << s.bits << ',' << (s.contained_after_T ? "true" : "false") << '\n';
        std::cout << key << '=' << value << ": triggers " << s.trigger_count << ", bits " << s.bits
                  << ", breach " << breach << '\n';
    }
    return out ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coded event-triggered adaptive control simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts, cmp_opts, t1_opts, val_opts, sweep_opts;
    std::string sweep_key;
    std::vector<std::string> sweep_values;

    auto* run = app.add_subcommand("run", "simulate one scenario");
    add_common(run, run_opts, true);
    auto* compare = app.add_subcommand("compare", "run every bundled scenario and tabulate triggers and bits");
    add_common(compare, cmp_opts, false);
    compare->get_option("--config")->description("directory of scenario files");
    auto* table1 = app.add_subcommand("table1", "print the codeword table");
    add_common(table1, t1_opts, false);
    auto* validate = app.add_subcommand("validate", "parse and cross-check a scenario");
    add_common(validate, val_opts, true);
    auto* sweep = app.add_subcommand("sweep", "rerun a scenario over values of one key");
    add_common(sweep, sweep_opts, true);
    sweep->add_option("--key", sweep_key, "section.key to vary")->required();
    sweep->add_option("--values", sweep_values, "comma separated values")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*compare) return cmd_compare(cmp_opts);
        if (*table1) return cmd_table1(t1_opts);
        if (*validate) return cmd_validate(val_opts);
        if (*sweep) return cmd_sweep(sweep_opts, sweep_key, sweep_values);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

#include "cec/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cec {

namespace pt = boost::property_tree;

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::ces: return "ces";
        case Strategy::relative: return "relative";
        case Strategy::switching: return "switching";
        case Strategy::fixed: return "fixed";
    }
    return "?";
}

Strategy strategy_from_string(std::string_view name) {
    if (name == "ces") return Strategy::ces;
    if (name == "relative") return Strategy::relative;
    if (name == "switching") return Strategy::switching;
    if (name == "fixed") return Strategy::fixed;
    throw ConfigError("trigger.strategy: unknown strategy '" + std::string(name) +
                      "' (expected ces, relative, switching or fixed)");
}

void set_strategy(ScenarioConfig& cfg, Strategy s) {
    cfg.strategy = s;
    if (s != Strategy::ces) cfg.baseline.kind = codec::baseline_kind_from_string(to_string(s));
}

double ScenarioConfig::initial_error() const { return x0.at(0) - reference.value(0.0); }

spp::AuxParams ScenarioConfig::aux() const {
    return spp::make_aux(perf, aux_l, aux_lambda, settling_time, initial_error());
}

control::Design ScenarioConfig::design() const {
    control::Design d;
    d.gains = gains;
    d.perf = perf;
    d.aux = aux();
    d.envelope = plant::make_plant(plant).envelope;
    d.reference = reference;
    return d;
}

void ScenarioConfig::validate() {
    const plant::PlantModel model = plant::make_plant(plant);
    const auto n = static_cast<std::size_t>(model.n);
    if (x0.size() != n) {
        throw ConfigError("initial.x needs n = " + std::to_string(n) + " entries for plant " + plant);
    }
    if (theta0.size() != n) throw ConfigError("initial.theta_hat needs n = " + std::to_string(n) + " entries");
    for (double th : theta0) {
        if (!(th >= 0.0)) throw ConfigError("initial.theta_hat entries must be nonnegative");
    }
    if (gains.n != model.n) throw ConfigError("controller: gain tables must match the plant order");
    gains.validate();
    if (path == LawPath::dedicated && model.n != 2) {
        throw ConfigError("controller.path = dedicated only supports n = 2; use general");
    }
    if (model.n > control::kMaxGeneralOrder) {
        throw UnsupportedOrder("controller: n = " + std::to_string(model.n) + " exceeds " +
                               std::to_string(control::kMaxGeneralOrder));
    }

    perf.sign0 = spp::sign_of(initial_error());
    perf.validate();
    aux().validate();

    if (catchup_cap < 1) throw ConfigError("trigger.catchup_cap must be >= 1");
    ces.validate();
    baseline.validate();
    integrator.validate();
    if (disturbance.enabled && !(disturbance.end >= disturbance.start)) {
        throw ConfigError("disturbance: need end >= start");
    }
    if (!(reference.frequency >= 0.0)) throw ConfigError("reference: frequency must be nonnegative");
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, std::string_view text) {
    const std::string s = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": '" + s + "' is not a finite number");
    }
    return v;
}

long to_long(const std::string& key, std::string_view text) {
    const std::string s = trim(text);
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError(key + ": '" + s + "' is not an integer");
    }
    return v;
}

bool to_bool(const std::string& key, std::string_view text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key + ": '" + s + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        out.push_back(to_double(key, item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    template <class F>
    void get(const std::string& key, F&& apply) {
        if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'))) apply(key, *v);
    }
    void number(const std::string& key, double& out) {
        get(key, [&](const std::string& k, const std::string& v) { out = to_double(k, v); });
    }
    void integer(const std::string& key, int& out) {
        get(key, [&](const std::string& k, const std::string& v) { out = static_cast<int>(to_long(k, v)); });
    }
    void list(const std::string& key, std::vector<double>& out) {
        get(key, [&](const std::string& k, const std::string& v) { out = to_list(k, v); });
    }
    void text(const std::string& key, std::string& out) {
        get(key, [&](const std::string&, const std::string& v) { out = trim(v); });
    }
    void flag(const std::string& key, bool& out) {
        get(key, [&](const std::string& k, const std::string& v) { out = to_bool(k, v); });
    }

private:
    const pt::ptree& tree_;
};

ScenarioConfig from_tree(const pt::ptree& tree) {
    static const std::vector<std::string> known = {
        "scenario", "initial", "reference", "performance", "auxiliary", "controller", "trigger",
        "ces",      "baseline", "integrator", "disturbance", "run"};
    for (const auto& [section, body] : tree) {
        if (std::find(known.begin(), known.end(), section) == known.end()) {
            throw ConfigError("unknown section [" + section + "]");
        }
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("key '" + section + "' must live inside a section");
        }
    }

    ScenarioConfig c;
    Reader r(tree);
    r.text("scenario.name", c.name);
    r.text("scenario.plant", c.plant);
    r.text("scenario.table_case", c.table_case);

    // The plant order fixes the default table sizes.
    const int n = plant::make_plant(c.plant).n;
    c.gains.n = n;
    if (n != 2) {
        c.x0.assign(n, 0.0);
        c.theta0.assign(n, 0.0);
        c.gains.c.assign(n, 2.0);
        c.gains.r.assign(n, 0.002);
        c.gains.sigma.assign(n, 0.01);
        c.path = LawPath::general;
    }

    r.list("initial.x", c.x0);
    r.list("initial.theta_hat", c.theta0);

    r.number("reference.amplitude", c.reference.amplitude);
    r.number("reference.frequency", c.reference.frequency);
    r.number("reference.offset", c.reference.offset);

    r.number("performance.delta", c.perf.delta);
    r.number("performance.rho0", c.perf.rho0);
    r.number("performance.rho_inf", c.perf.rho_inf);
    r.number("performance.varsigma", c.perf.varsigma);

    r.number("auxiliary.l", c.aux_l);
    r.number("auxiliary.lambda", c.aux_lambda);
    r.number("auxiliary.settling_time", c.settling_time);

    r.list("controller.c", c.gains.c);
    r.list("controller.r", c.gains.r);
    r.list("controller.sigma", c.gains.sigma);
    r.get("controller.path", [&](const std::string& k, const std::string& v) {
        const std::string s = trim(v);
        if (s == "dedicated") c.path = LawPath::dedicated;
        else if (s == "general") c.path = LawPath::general;
        else throw ConfigError(k + ": expected dedicated or general, got '" + s + "'");
    });

    r.get("trigger.strategy", [&](const std::string&, const std::string& v) {
        set_strategy(c, strategy_from_string(trim(v)));
    });
    r.integer("trigger.catchup_cap", c.catchup_cap);

    r.integer("ces.p", c.ces.p);
    r.integer("ces.m", c.ces.m);
    r.list("ces.omega", c.ces.omega);
    r.list("ces.levels", c.ces.levels);

    r.number("baseline.delta_bar", c.baseline.delta_bar);
    r.number("baseline.d", c.baseline.d);
    r.number("baseline.switch_level", c.baseline.switch_level);
    r.number("baseline.fixed_delta", c.baseline.fixed_delta);

    r.number("integrator.step", c.integrator.step);
    r.number("integrator.horizon", c.integrator.horizon);

    r.flag("disturbance.enabled", c.disturbance.enabled);
    r.number("disturbance.amplitude", c.disturbance.amplitude);
    r.number("disturbance.frequency", c.disturbance.frequency);
    r.number("disturbance.start", c.disturbance.start);
    r.number("disturbance.end", c.disturbance.end);

    r.get("run.seed", [&](const std::string& k, const std::string& v) {
        const long s = to_long(k, v);
        if (s < 0) throw ConfigError(k + " must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
    });

    c.validate();
    return c;
}

}  // namespace

Override parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(text) + "' needs section.key=value");
    std::string key = trim(text.substr(0, eq));
    if (key.find('.') == std::string::npos) {
        throw ConfigError("override key '" + key + "' must be section.key");
    }
    return {key, trim(text.substr(eq + 1))};
}

ScenarioConfig parse_config(const std::string& text, const std::vector<Override>& overrides) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [key, value] : overrides) tree.put(pt::ptree::path_type(key, '.'), value);
    return from_tree(tree);
}

ScenarioConfig load_config(const std::filesystem::path& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

}  // namespace cec

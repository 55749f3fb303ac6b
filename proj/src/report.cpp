#include "cec/report.hpp"

#include <array>
#include <charconv>
#include <iomanip>
#include <map>
#include <sstream>

namespace cec::report {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf.data(), ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string csv_header(int n) {
    std::string h = "t";
    for (int i = 1; i <= n; ++i) h += ",x" + std::to_string(i);
    h += ",e1,e_u,e_l,eta_u,eta_l,E_u,E_l,z1";
    for (int i = 1; i <= n; ++i) h += ",theta_hat" + std::to_string(i);
    h += ",v,u,event,codeword,bits";
    return h;
}

void write_csv(std::ostream& out, const sim::SimLog& log) {
    out << csv_header(log.n) << '\n';
    std::string line;
    for (const auto& r : log.rows) {
        line = format_double(r.t);
        const auto add = [&](double v) {
            line += ',';
            line += format_double(v);
        };
        for (double xi : r.x) add(xi);
        for (double v : {r.e1, r.e_u, r.e_l, r.eta_u, r.eta_l, r.E_u, r.E_l, r.z1}) add(v);
        for (double th : r.theta_hat) add(th);
        add(r.v);
        add(r.u);
        line += r.event ? ",1," : ",0,";
        line += r.codeword;
        line += ',';
        line += std::to_string(r.bits);
        out << line << '\n';
    }
}

void write_summary(std::ostream& out, const sim::Summary& s) {
    out << "name=" << s.name << '\n'
        << "strategy=" << s.strategy << '\n'
        << "plant=" << s.plant << '\n'
        << "table_case=" << (s.table_case.empty() ? "none" : s.table_case) << '\n'
        << "step=" << format_double(s.step) << '\n'
        << "horizon=" << format_double(s.horizon) << '\n'
        << "settling_time=" << format_double(s.settling_time) << '\n'
        << "completed=" << yes_no(s.completed) << '\n'
        << "breach=" << yes_no(s.breach_time.has_value()) << '\n'
        << "breach_time=" << opt(s.breach_time) << '\n'
        << "trigger_count=" << s.trigger_count << '\n'
        << "bits=" << s.bits << '\n'
        << "bits_per_message=" << s.bits_per_message << '\n'
        << "event_instants=" << s.event_instants << '\n'
        << "min_gap=" << opt(s.min_gap) << '\n'
        << "mean_gap=" << opt(s.mean_gap) << '\n'
        << "gap_fraction_at_step=" << format_double(s.gap_fraction_at_step) << '\n'
        << "zeno_violation_fraction=" << format_double(s.zeno_violation_fraction) << '\n'
        << "kappa_hat=" << format_double(s.kappa_hat) << '\n'
        << "epsilon_step=" << format_double(s.epsilon_step) << '\n'
        << "max_abs_v_minus_u=" << format_double(s.max_abs_v_minus_u) << '\n'
        << "max_increment=" << format_double(s.max_increment) << '\n'
        << "capped_steps=" << s.capped_steps << '\n'
        << "contained_spp=" << yes_no(s.contained_spp) << '\n'
        << "contained_after_T=" << yes_no(s.contained_after_T) << '\n'
        << "first_violation_time=" << opt(s.first_violation_time) << '\n'
        << "tunnel_entry_time=" << opt(s.tunnel_entry_time) << '\n'
        << "min_mu1=" << format_double(s.min_mu1) << '\n'
        << "min_theta_hat=" << format_double(s.min_theta_hat) << '\n'
        << "max_theta_hat=" << format_double(s.max_theta_hat) << '\n'
        << "max_abs_x=" << format_double(s.max_abs_x) << '\n'
        << "max_abs_v=" << format_double(s.max_abs_v) << '\n'
        << "assumption_gain_violations=" << s.assumption_gain_violations << '\n'
        << "assumption_drift_violations=" << s.assumption_drift_violations << '\n';
}

std::string summary_table(const sim::Summary& s) {
    std::ostringstream out;
    out << std::left;
    const auto row = [&](const std::string& k, const std::string& v) {
        out << "  " << std::setw(26) << k << v << '\n';
    };
    out << s.name << " (" << s.strategy << ", " << s.plant << ")\n";
    if (s.breach_time) {
        row("outcome", "envelope breach at t = " + format_double(*s.breach_time));
    } else {
        row("outcome", s.completed ? "completed" : "incomplete");
    }
    row("triggers", std::to_string(s.trigger_count));
    row("bits", std::to_string(s.bits) + " (" + std::to_string(s.bits_per_message) + " per message)");
    row("min / mean gap", opt(s.min_gap) + " / " + opt(s.mean_gap));
    row("gaps of one step", format_double(s.gap_fraction_at_step));
    row("kappa_hat", format_double(s.kappa_hat));
    row("max |v - u|", format_double(s.max_abs_v_minus_u));
    row("contained (envelope)", yes_no(s.contained_spp));
    row("contained after T", yes_no(s.contained_after_T));
    row("tunnel entry", opt(s.tunnel_entry_time));
    row("theta_hat range", format_double(s.min_theta_hat) + " .. " + format_double(s.max_theta_hat));
    row("max |x|, max |v|", format_double(s.max_abs_x) + ", " + format_double(s.max_abs_v));
    return out.str();
}

void write_events(std::ostream& out, const sim::SimLog& log) {
    out << "time,codeword,bits,u_after\n";
    for (const auto& e : log.events) {
        out << format_double(e.t) << ',' << e.codeword << ',' << e.bits << ','
            << format_double(e.u_after) << '\n';
    }
}

std::optional<ReferenceCounts> reference_counts(const std::string& table_case,
                                                const std::string& strategy) {
    static const std::map<std::pair<std::string, std::string>, ReferenceCounts> table = {
        {{"case1", "ces"}, {332, 996}},
        {{"case1", "relative"}, {339, 2712}},
        {{"case1", "switching"}, {373, 2984}},
        {{"case2", "ces"}, {460, 1380}},
        {{"case2", "relative"}, {std::nullopt, std::nullopt}},
        {{"case2", "switching"}, {403, 3224}},
    };
    auto it = table.find({table_case, strategy});
    if (it == table.end()) return std::nullopt;
    return it->second;
}

void write_comparison(std::ostream& out, const std::vector<ComparisonEntry>& entries) {
    std::map<std::string, long> ces_bits;
    for (const auto& e : entries) {
        if (e.strategy == "ces" && e.summary && e.summary->completed) ces_bits[e.table_case] = e.summary->bits;
    }

    out << std::left << std::setw(8) << "case" << std::setw(11) << "strategy" << std::setw(8) << "events"
        << std::setw(8) << "bits" << std::setw(10) << "bits/ces" << std::setw(30) << "status"
        << std::setw(12) << "ref_events" << "ref_bits" << '\n';
    for (const auto& e : entries) {
        std::string events = "-", bits = "-", ratio = "-", status;
        if (e.summary) {
            const auto& s = *e.summary;
            events = std::to_string(s.trigger_count);
            bits = std::to_string(s.bits);
            if (auto it = ces_bits.find(e.table_case); it != ces_bits.end() && it->second > 0) {
                std::ostringstream r;
                r << std::fixed << std::setprecision(3)
                  << static_cast<double>(s.bits) / static_cast<double>(it->second);
                ratio = r.str();
            }
            if (s.breach_time) {
                std::ostringstream b;
                b << "FAILED (breach) t=" << std::fixed << std::setprecision(3) << *s.breach_time;
                status = b.str();
            } else {
                status = s.contained_after_T ? "ok" : "ok (tunnel violated)";
            }
        } else {
            status = "ERROR";
        }
        std::string ref_events = "-", ref_bits = "-";
        if (auto ref = reference_counts(e.table_case, e.strategy)) {
            ref_events = ref->events ? std::to_string(*ref->events) : "X";
            ref_bits = ref->bits ? std::to_string(*ref->bits) : "X";
        }
        out << std::setw(8) << e.table_case << std::setw(11) << e.strategy << std::setw(8) << events
            << std::setw(8) << bits << std::setw(10) << ratio << std::setw(30) << status
            << std::setw(12) << ref_events << ref_bits << '\n';
    }

    bool header = false;
    for (const auto& e : entries) {
        if (e.parameters.empty() && e.error.empty()) continue;
        if (!header) {
            out << '\n';
            header = true;
        }
        out << "# " << e.name << ": " << (e.error.empty() ? e.parameters : "error: " + e.error) << '\n';
    }
}

void write_codeword_table(std::ostream& out, const codec::CesConfig& cfg) {
    out << std::left << std::setw(10) << "codeword" << std::setw(6) << "sign" << std::setw(8) << "beta"
        << std::setw(10) << "omega" << "update" << '\n';
    const std::int64_t total = cfg.alphabet_size();
    for (std::int64_t value = 0; value < total; ++value) {
        codec::Codeword w;
        w.digits.resize(cfg.m);
        std::int64_t rest = value;
        for (int j = 0; j < cfg.m; ++j) {
            w.digits[j] = static_cast<int>(rest % cfg.p);
            rest /= cfg.p;
        }
        const auto d = codec::interpret(w, cfg);
        const std::string sign = d.positive ? "+" : "-";
        out << std::setw(10) << w.str() << std::setw(6) << sign << std::setw(8) << d.beta << std::setw(10)
            << ("omega_" + std::to_string(d.beta)) << "u = v(t_k) " << sign << " omega_" << d.beta << " * "
            << cfg.p << "^" << d.beta << " = v(t_k) " << sign << ' ' << format_double(d.increment) << '\n';
    }
}

}  // namespace cec::report

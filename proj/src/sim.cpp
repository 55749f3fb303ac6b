#include "cec/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace cec::sim {

control::LawOutput evaluate_law(const ScenarioConfig& cfg, const control::Design& design, double t,
                                std::span<const double> x, std::span<const double> theta_hat) {
    if (cfg.path == LawPath::dedicated) return control::second_order_law(t, x, theta_hat, design);
    return control::backstep_general(t, x, theta_hat, design);
}

namespace {

struct Loop {
    ScenarioConfig cfg;
    plant::PlantModel model;
    control::Design design;
    int n = 0;

    explicit Loop(const ScenarioConfig& c) : cfg(c) {
        cfg.validate();
        model = plant::make_plant(cfg.plant);
        design = cfg.design();
        n = model.n;
    }

    std::span<const double> states(std::span<const double> y) const { return y.first(n); }
    std::span<const double> estimates(std::span<const double> y) const { return y.subspan(n, n); }

    std::vector<double> rhs(double t, std::span<const double> y, const double* held_u) const {
        const auto law = evaluate_law(cfg, design, t, states(y), estimates(y));
        const double u = held_u ? *held_u : law.v;
        std::vector<double> dy = plant::derivative(states(y), u, t, model, cfg.disturbance);
        dy.insert(dy.end(), law.theta_dot.begin(), law.theta_dot.end());
        return dy;
    }

    std::vector<double> step(std::span<const double> y, double t, double h, const double* held_u) const {
        auto next = plant::rk4_step(y, t, h, [&](double s, std::span<const double> z) {
            return rhs(s, z, held_u);
        });
        for (int i = 0; i < n; ++i) next[n + i] = std::max(0.0, next[n + i]);
        return next;
    }

    std::vector<double> initial() const {
        std::vector<double> y = cfg.x0;
        y.insert(y.end(), cfg.theta0.begin(), cfg.theta0.end());
        return y;
    }
};

void finish_gaps(const SimLog& log, Summary& s, double h) {
    // Gaps are measured between distinct event instants.
    std::vector<const EventRecord*> firsts;
    for (const auto& e : log.events) {
        if (firsts.empty() || firsts.back()->step != e.step) firsts.push_back(&e);
    }
    s.event_instants = static_cast<long>(firsts.size());
    if (firsts.size() < 2) return;

    double min_gap = std::numeric_limits<double>::infinity();
    double total = 0.0;
    long at_step = 0;
    long violations = 0;
    for (std::size_t i = 1; i < firsts.size(); ++i) {
        const long steps = firsts[i]->step - firsts[i - 1]->step;
        const double gap = static_cast<double>(steps) * h;
        min_gap = std::min(min_gap, gap);
        total += gap;
        if (steps == 1) ++at_step;
        if (s.kappa_hat > 0.0 && gap < firsts[i]->threshold / s.kappa_hat) ++violations;
    }
    const double count = static_cast<double>(firsts.size() - 1);
    s.min_gap = min_gap;
    s.mean_gap = total / count;
    s.gap_fraction_at_step = static_cast<double>(at_step) / count;
    s.zeno_violation_fraction = static_cast<double>(violations) / count;
}

}  // namespace

RunResult run(const ScenarioConfig& config) {
    const Loop loop(config);
    const ScenarioConfig& cfg = loop.cfg;
    const int n = loop.n;
    const double h = cfg.integrator.step;
    const long steps = cfg.integrator.steps();
    const double T = cfg.settling_time;
    const bool ces = cfg.strategy == Strategy::ces;

    RunResult result;
    SimLog& log = result.log;
    Summary& s = result.summary;
    log.n = n;
    log.rows.reserve(static_cast<std::size_t>(steps) + 1);

    s.name = cfg.name;
    s.strategy = to_string(cfg.strategy);
    s.plant = cfg.plant;
    s.table_case = cfg.table_case;
    s.step = h;
    s.horizon = cfg.integrator.horizon;
    s.settling_time = T;
    s.bits_per_message = ces ? codec::bits_per_message(cfg.ces) : codec::kBaselineBitsPerMessage;
    s.max_increment = ces ? codec::max_increment(cfg.ces) : 0.0;
    s.min_mu1 = std::numeric_limits<double>::infinity();
    s.min_theta_hat = std::numeric_limits<double>::infinity();

    codec::DecoderState decoder{0.0, cfg.ces};
    std::vector<double> y = loop.initial();
    double u = 0.0;
    double v_prev = 0.0;
    double last_outside_tunnel = -1.0;
    bool ever_outside = false;

    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const auto x = loop.states(y);
        const auto th = loop.estimates(y);

        control::LawOutput law;
        try {
            law = evaluate_law(cfg, loop.design, t, x, th);
        } catch (const OutOfEnvelope& e) {
            s.breach_time = e.time();
            s.breach_reason = e.what();
            break;
        }
        const double v = law.v;

        LogRow row;
        row.t = t;
        row.x.assign(x.begin(), x.end());
        row.theta_hat.assign(th.begin(), th.end());
        row.v = v;
        row.z1 = law.z1;
        row.mu1 = law.mu1;
        const spp::BoundarySet bs = spp::eval_spp(t, cfg.perf, loop.design.aux, 0);
        row.e1 = law.e[0];
        row.e_u = bs.e_u[0];
        row.e_l = bs.e_l[0];
        row.eta_u = bs.eta_u[0];
        row.eta_l = bs.eta_l[0];
        row.E_u = bs.E_u[0];
        row.E_l = bs.E_l[0];

        if (k == 0) {
            // Initial full transmission; not counted.
            u = v;
            decoder.last_v = v;
        } else {
            const double change = std::abs(v - v_prev);
            s.epsilon_step = std::max(s.epsilon_step, change);
            s.max_abs_v_minus_u = std::max(s.max_abs_v_minus_u, std::abs(v - u));
        }
        v_prev = v;

        if (k > 0 && k < steps) {
            for (int sent = 0;; ++sent) {
                const double dv = v - u;
                double thr = 0.0;
                if (ces) {
                    const int q = codec::level(std::abs(u), cfg.ces);
                    thr = codec::threshold(q, cfg.ces);
                    if (std::abs(dv) < thr) break;
                    if (sent == cfg.catchup_cap) {
                        ++s.capped_steps;
                        break;
                    }
                    const codec::Codeword w = codec::encode(q, dv >= 0.0, cfg.ces);
                    EventRecord ev{t, k, w.str(), s.bits_per_message, thr, u, 0.0};
                    u = codec::decode(w, decoder);
                    ev.u_after = u;
                    log.events.push_back(ev);
                    if (!row.codeword.empty()) row.codeword += ';';
                    row.codeword += ev.codeword;
                } else {
                    thr = codec::baseline_threshold(u, cfg.baseline);
                    if (std::abs(dv) < thr) break;
                    log.events.push_back(EventRecord{t, k, {}, s.bits_per_message, thr, u, v});
                    u = v;
                    decoder.last_v = v;
                    row.event = true;
                    ++s.trigger_count;
                    s.bits += s.bits_per_message;
                    break;
                }
                row.event = true;
                ++s.trigger_count;
                s.bits += s.bits_per_message;
            }
        }
        row.u = u;
        row.bits = s.bits;

        s.min_mu1 = std::min(s.min_mu1, law.mu1);
        for (double th_i : row.theta_hat) {
            s.min_theta_hat = std::min(s.min_theta_hat, th_i);
            s.max_theta_hat = std::max(s.max_theta_hat, th_i);
        }
        for (double xi : row.x) s.max_abs_x = std::max(s.max_abs_x, std::abs(xi));
        s.max_abs_v = std::max(s.max_abs_v, std::abs(v));

        const auto check = plant::check_assumptions(x, loop.model);
        if (!check.gains_in_bounds) ++s.assumption_gain_violations;
        if (!check.drift_bounded) ++s.assumption_drift_violations;

        const bool in_spp = row.e1 > -row.E_l && row.e1 < row.E_u;
        const bool in_tunnel = row.e1 > -row.e_l && row.e1 < row.e_u;
        if (!in_spp) {
            s.contained_spp = false;
            if (!s.first_violation_time) s.first_violation_time = t;
        }
        if (!in_tunnel) {
            ever_outside = true;
            last_outside_tunnel = t;
            if (t >= T) {
                s.contained_after_T = false;
                if (!s.first_violation_time) s.first_violation_time = t;
            }
        }
        log.rows.push_back(std::move(row));

        if (k == steps) {
            s.completed = true;
            break;
        }
        try {
            y = loop.step(y, t, h, &u);
        } catch (const OutOfEnvelope& e) {
            s.breach_time = e.time();
            s.breach_reason = e.what();
            break;
        }
    }

    if (s.breach_time) {
        s.completed = false;
        s.contained_spp = false;
        s.contained_after_T = false;
        if (!s.first_violation_time || *s.breach_time < *s.first_violation_time) {
            s.first_violation_time = s.breach_time;
        }
    }
    if (s.completed) {
        s.tunnel_entry_time = ever_outside ? last_outside_tunnel + h : 0.0;
        if (ever_outside && last_outside_tunnel >= cfg.integrator.horizon) s.tunnel_entry_time.reset();
    }
    if (log.rows.empty()) {
        s.min_mu1 = 0.0;
        s.min_theta_hat = 0.0;
    }
    s.kappa_hat = s.epsilon_step / h;
    finish_gaps(log, s, h);
    return result;
}

std::vector<RunResult> compare(const std::vector<ScenarioConfig>& cfgs) {
    for (const auto& c : cfgs) {
        if (c.plant != cfgs.front().plant || c.integrator.horizon != cfgs.front().integrator.horizon) {
            throw ConfigError("compare: all scenarios must share plant and horizon ('" + c.name +
                              "' differs from '" + cfgs.front().name + "')");
        }
    }
    std::vector<std::future<RunResult>> jobs;
    jobs.reserve(cfgs.size());
    for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [&c] { return run(c); }));
    std::vector<RunResult> out;
    out.reserve(cfgs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

ZenoReport zeno_report(const SimLog& log, double step, int bins) {
    ZenoReport r;
    std::vector<long> instants;
    for (const auto& e : log.events) {
        if (instants.empty() || instants.back() != e.step) instants.push_back(e.step);
    }
    if (instants.size() < 2 || bins < 1) return r;

    std::vector<double> gaps;
    long at_step = 0;
    for (std::size_t i = 1; i < instants.size(); ++i) {
        const long d = instants[i] - instants[i - 1];
        gaps.push_back(static_cast<double>(d) * step);
        if (d == 1) ++at_step;
    }
    const auto [lo, hi] = std::minmax_element(gaps.begin(), gaps.end());
    r.min_gap = *lo;
    r.fraction_at_step = static_cast<double>(at_step) / static_cast<double>(gaps.size());

    const double width = (*hi > *lo) ? (*hi - *lo) / bins : step;
    r.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) r.edges[b] = *lo + b * width;
    r.counts.assign(bins, 0);
    for (double g : gaps) {
        auto b = static_cast<int>((g - *lo) / width);
        r.counts[std::clamp(b, 0, bins - 1)]++;
    }
    return r;
}

std::vector<double> continuous_final_state(const ScenarioConfig& config, double step, double horizon) {
    const Loop loop(config);
    const long steps = std::lround(horizon / step);
    std::vector<double> y = loop.initial();
    for (long k = 0; k < steps; ++k) y = loop.step(y, static_cast<double>(k) * step, step, nullptr);
    return y;
}

}  // namespace cec::sim

#pragma once

// Closed-loop runs: plant, boundaries, controller and trigger channel
// advanced on a fixed RK4 grid with a zero-order hold on u.

#include <optional>
#include <string>
#include <vector>

#include "cec/config.hpp"

namespace cec::sim {

struct LogRow {
    double t = 0.0;
    std::vector<double> x;
    double e1 = 0.0;
    double e_u = 0.0;
    double e_l = 0.0;
    double eta_u = 0.0;
    double eta_l = 0.0;
    double E_u = 0.0;
    double E_l = 0.0;
    double z1 = 0.0;
    double mu1 = 0.0;
    std::vector<double> theta_hat;
    double v = 0.0;
    double u = 0.0;
    bool event = false;
    std::string codeword;  ///< codewords sent at this step, joined by ';'
    long bits = 0;         ///< cumulative
};

/// One transmitted message. Catch-up messages share the step time.
struct EventRecord {
    double t = 0.0;
    long step = 0;
    std::string codeword;  ///< empty for baseline strategies
    int bits = 0;
    double threshold = 0.0;
    double u_before = 0.0;
    double u_after = 0.0;
};

struct SimLog {
    int n = 0;
    std::vector<LogRow> rows;
    std::vector<EventRecord> events;
};

struct Summary {
    std::string name;
    std::string strategy;
    std::string plant;
    std::string table_case;
    double step = 0.0;
    double horizon = 0.0;
    double settling_time = 0.0;

    bool completed = false;
    std::optional<double> breach_time;
    std::string breach_reason;

    long trigger_count = 0;  ///< initial transmission excluded
    long bits = 0;
    int bits_per_message = 0;
    long event_instants = 0;  ///< distinct steps carrying at least one message
    std::optional<double> min_gap;
    std::optional<double> mean_gap;
    double gap_fraction_at_step = 0.0;  ///< fraction of gaps equal to one step
    double zeno_violation_fraction = 0.0;

    double kappa_hat = 0.0;     ///< max |v(t_k) - v(t_{k-1})| / h
    double epsilon_step = 0.0;  ///< max one-step change of v
    double max_abs_v_minus_u = 0.0;
    double max_increment = 0.0;  ///< largest single update the channel can apply
    long capped_steps = 0;

    bool contained_spp = true;
    bool contained_after_T = true;
    std::optional<double> first_violation_time;
    std::optional<double> tunnel_entry_time;  ///< first t after which e1 stays inside the tunnel

    double min_mu1 = 0.0;
    double min_theta_hat = 0.0;
    double max_theta_hat = 0.0;
    double max_abs_x = 0.0;
    double max_abs_v = 0.0;
    long assumption_gain_violations = 0;
    long assumption_drift_violations = 0;
};

struct RunResult {
    SimLog log;
    Summary summary;
};

/// Runs one scenario. An envelope breach truncates the log and is reported
/// in the summary; NonFinite and configuration errors propagate.
RunResult run(const ScenarioConfig& cfg);

/// Runs every scenario on its own thread. All configs must share plant and horizon.
std::vector<RunResult> compare(const std::vector<ScenarioConfig>& cfgs);

struct ZenoReport {
    std::optional<double> min_gap;  ///< none with fewer than two event instants
    std::vector<double> edges;      ///< histogram bin edges, size bins + 1
    std::vector<long> counts;
    double fraction_at_step = 0.0;
};

ZenoReport zeno_report(const SimLog& log, double step, int bins = 20);

/// Control law selected by the config (dedicated or general path).
control::LawOutput evaluate_law(const ScenarioConfig& cfg, const control::Design& design, double t,
                                std::span<const double> x, std::span<const double> theta_hat);

/// Plant and estimates integrated with u = v applied continuously.
/// Returns [x, theta_hat] at t = horizon.
std::vector<double> continuous_final_state(const ScenarioConfig& cfg, double step, double horizon);

}  // namespace cec::sim

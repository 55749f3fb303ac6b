#pragma once

// File formats: per-step CSV log, key=value summary, event list,
// comparison table and the codeword table.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cec/sim.hpp"

namespace cec::report {

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// t,x1..xn,e1,e_u,e_l,eta_u,eta_l,E_u,E_l,z1,theta_hat1..n,v,u,event,codeword,bits
std::string csv_header(int n);
void write_csv(std::ostream& out, const sim::SimLog& log);

/// One key=value pair per line, fixed order. Absent values are written as `none`.
void write_summary(std::ostream& out, const sim::Summary& s);
std::string summary_table(const sim::Summary& s);

/// time,codeword,bits,u_after
void write_events(std::ostream& out, const sim::SimLog& log);

/// Event and bit counts published for the benchmark scenarios.
struct ReferenceCounts {
    std::optional<long> events;  ///< none when the published run failed
    std::optional<long> bits;
};
std::optional<ReferenceCounts> reference_counts(const std::string& table_case, const std::string& strategy);

struct ComparisonEntry {
    std::string table_case;
    std::string strategy;
    std::string name;
    std::optional<sim::Summary> summary;
    std::string error;       ///< set when the run could not produce a summary
    std::string parameters;  ///< trigger parameters, printed under the table
};

void write_comparison(std::ostream& out, const std::vector<ComparisonEntry>& entries);

/// One row per codeword in value order: codeword, sign, beta, omega index, increment.
void write_codeword_table(std::ostream& out, const codec::CesConfig& cfg);

}  // namespace cec::report

#ifndef TEAMFORM_CHART_HPP
#define TEAMFORM_CHART_HPP

#include <string>

#include "teamform/csv.hpp"

namespace teamform {

enum class ChartKind { Lines, LogLines };

// Renders a standalone SVG line chart from one of the harness CSV shapes:
//   n,metric,mean_rounds,replications   -> x = n, one curve per metric
//   n,m,eps,mean_rounds,replications    -> x = eps, one curve per (n, m)
//   round,deficit,poor_leaders,matched_followers -> x = round, 3 curves
// LogLines uses a log-10 vertical axis. Throws on empty or unrecognized input.
std::string emit_chart(const CsvTable& table, ChartKind kind);

}  // namespace teamform

#endif

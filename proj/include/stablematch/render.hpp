#pragma once

#include <optional>
#include <string>

#include "stablematch/core.hpp"
#include "stablematch/schedule.hpp"
#include "stablematch/solver.hpp"

namespace stablematch {

// Iteration record as a fixed-width text table: one row per contract, one
// column per iterate, an "x" where the contract is in the iterate. Columns
// are headed X_n / Y_n by track and step index; when `stable_set` is given a
// final S column is added. Matches the layout of a worked iteration table.
std::string render_trace_table(const IterationTrace& trace,
                               const std::optional<ContractSet>& stable_set);

// Same record as CSV: header row, then one row per contract with 1/0 cells.
// Labels containing commas or quotes are quoted.
std::string render_trace_csv(const IterationTrace& trace,
                             const std::optional<ContractSet>& stable_set);

// Members of a schedule-backed set as a worker | firm | day table, one row
// per contract in universe order.
std::string render_set_table(const ContractSet& s, const ScheduleProblem& problem);

// Hours read off a stable set: worker | firm | hours, one row per mutually
// ranked pair. Warnings are the caller's to report.
std::string render_hours_table(const HoursTable& table);

}  // namespace stablematch

#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "stablematch/choicemaps.hpp"
#include "stablematch/core.hpp"

namespace stablematch {

// One worker's acceptance behavior: a strict preference over (firm, day)
// pairs, an optional total cap, per-day caps and per-firm caps. Pairs absent
// from the preference list are unacceptable.
struct WorkerSpec {
    std::string id;
    std::vector<std::pair<std::string, std::string>> preference;  // (firm, day)
    std::optional<int> quota;
    std::map<std::string, int> day_quotas;
    std::map<std::string, int> firm_quotas;

    bool operator==(const WorkerSpec&) const = default;
};

struct FirmSpec {
    std::string id;
    std::vector<std::pair<std::string, std::string>> preference;  // (worker, day)
    std::optional<int> quota;
    std::map<std::string, int> day_quotas;
    std::map<std::string, int> worker_quotas;

    bool operator==(const FirmSpec&) const = default;
};

// A two-sided schedule-matching market. The contract universe defaults to the
// full worker x firm x day product in declaration-lexicographic order; an
// explicit `contracts` list restricts it (the hours expansion needs that).
struct ScheduleProblem {
    std::vector<std::string> workers;
    std::vector<std::string> firms;
    std::vector<std::string> days;
    std::optional<std::vector<std::tuple<std::string, std::string, std::string>>> contracts;
    std::vector<WorkerSpec> worker_specs;
    std::vector<FirmSpec> firm_specs;

    bool operator==(const ScheduleProblem&) const = default;
};

std::string contract_label(const std::string& worker, const std::string& firm,
                           const std::string& day);

// The contract triples of the problem's universe, in universe order.
std::vector<std::tuple<std::string, std::string, std::string>> universe_triples(
    const ScheduleProblem& problem);

UniversePtr build_universe(const ScheduleProblem& problem);

// Compiles one agent into a greedy quota spec over the market universe:
// Y = the agent's preference triples in order, global quota (default |Y|),
// one group per declared per-day / per-counterparty cap, restricted to Y.
// Groups that cannot bind are dropped; the remaining ones must be pairwise
// disjoint, so an agent may declare both kinds of cap only when one kind is
// entirely ineffective.
QuotaChoiceSpec compile_worker(const ScheduleProblem& problem, const UniversePtr& universe,
                               const WorkerSpec& spec);
QuotaChoiceSpec compile_firm(const ScheduleProblem& problem, const UniversePtr& universe,
                             const FirmSpec& spec);

struct CompiledMarket {
    UniversePtr universe;
    ChoiceFunction worker_choice;
    ChoiceFunction firm_choice;
};

// Side maps are the partition combination of the per-agent maps over the
// blocks {agent} x (everything else).
CompiledMarket build_market(const ScheduleProblem& problem);

// Continuous-hours encoding: each side ranks acceptable counterparties and
// caps the hours per pair. Expansion turns hour counts into slot contracts
// (i, j, k): slot k is acceptable to a side while k is within its own cap,
// and the universe keeps slots up to the larger cap of the two sides, for
// mutually ranked pairs only.
struct HoursAgent {
    std::string id;
    std::vector<std::string> ranking;        // most preferred counterparty first
    std::map<std::string, int> max_hours;    // per ranked counterparty

    bool operator==(const HoursAgent&) const = default;
};

struct HoursEncoding {
    std::vector<HoursAgent> workers;
    std::vector<HoursAgent> firms;

    bool operator==(const HoursEncoding&) const = default;
};

ScheduleProblem expand_hours(const HoursEncoding& encoding);

struct HoursAssignment {
    std::string worker;
    std::string firm;
    int hours = 0;

    bool operator==(const HoursAssignment&) const = default;
};

struct HoursTable {
    std::vector<HoursAssignment> entries;  // one per mutually ranked pair
    std::vector<std::string> warnings;     // non-contiguous slot selections
};

// Reads hours(i, j) = max slot of (i, j, ·) in S (0 when none) off a contract
// set over the expanded universe. A missing slot below the maximum yields a
// warning, not an error.
HoursTable interpret_hours(const ContractSet& s, const HoursEncoding& encoding);

}  // namespace stablematch

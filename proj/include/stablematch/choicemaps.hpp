#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stablematch/core.hpp"

namespace stablematch {

// Sub-quota group: a set of contracts of which at most `quota` may be chosen
// together. Members outside the preference list are ignored.
struct QuotaGroup {
    std::vector<int> members;  // universe indices
    int quota = 0;
};

// Specification of a greedy quota choice map. The preference list is the
// acceptable set Y with its strict order, most preferred first; contracts
// absent from it are never chosen. The scan accepts y_k when it is offered,
// the global quota has room, and every group containing y_k has room.
//
// Disjoint groups give a revealing map. Overlapping groups only guarantee a
// consistent map and can break revealingness, so they are rejected unless
// allow_overlapping_groups is set.
struct QuotaChoiceSpec {
    UniversePtr universe;
    std::vector<int> preference;       // distinct universe indices, order = strict preference
    std::optional<int> global_quota;   // default: preference size (no global cap)
    std::vector<QuotaGroup> groups;
    bool allow_overlapping_groups = false;
};

// Validates the spec and wraps the greedy scan as a ChoiceFunction.
// Ineffective groups (quota >= global quota, or quota >= |Y|, or empty after
// restriction to Y) are dropped up front; that never changes any output.
ChoiceFunction build_quota_choice(const QuotaChoiceSpec& spec, std::string name = "");

// One-shot evaluation of the same greedy scan, without the ineffective-group
// drop. Agrees with build_quota_choice(spec)(offered) on every input.
ContractSet quota_choose(const QuotaChoiceSpec& spec, const ContractSet& offered);

// Instrumented scan: returns the accepted-set states C_0 ⊆ C_1 ⊆ ... ⊆ C_m,
// one entry per preference position plus the initial empty state.
std::vector<ContractSet> quota_choose_states(const QuotaChoiceSpec& spec,
                                             const ContractSet& offered);

// Combines per-block choice maps over a partition {X_i} of the universe into
// C(A) = ∪_i C_i(A ∩ X_i). Each child is consulted only on subsets of its
// block. Blocks must be pairwise disjoint and cover the universe.
ChoiceFunction combine_partition(
    const UniversePtr& universe,
    std::vector<std::pair<ContractSet, ChoiceFunction>> children,
    std::string name = "");

inline constexpr int kTableUniverseCap = 10;

// Explicit table of a choice map for universes of at most kTableUniverseCap
// contracts: table[mask] is the chosen subset of the subset `mask`, for every
// one of the 2^|X| masks (bit i = contract i).
struct TableChoiceSpec {
    UniversePtr universe;
    std::vector<std::uint32_t> table;
};

ChoiceFunction build_table_choice(const TableChoiceSpec& spec, std::string name = "");

}  // namespace stablematch

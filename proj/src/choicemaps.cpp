#include "stablematch/choicemaps.hpp"

#include <algorithm>
#include <unordered_set>

namespace stablematch {

namespace {

// Validated, evaluation-ready form of a QuotaChoiceSpec.
struct QuotaPlan {
    std::vector<int> preference;
    int global_quota = 0;
    std::vector<ContractSet> group_members;  // restricted to Y
    std::vector<int> group_quotas;
    // groups_of[k] lists the groups containing preference[k]
    std::vector<std::vector<int>> groups_of;
};

QuotaPlan prepare(const QuotaChoiceSpec& spec, bool drop_ineffective_groups) {
    if (!spec.universe) throw ValidationError("quota choice spec requires a universe");
    const int n = spec.universe->size();

    QuotaPlan plan;
    plan.preference = spec.preference;
    std::unordered_set<int> seen;
    ContractSet acceptable = ContractSet::empty(spec.universe);
    for (int idx : plan.preference) {
        if (idx < 0 || idx >= n) {
            throw ValidationError("preference entry " + std::to_string(idx) +
                                  " out of range for universe of size " + std::to_string(n));
        }
        if (!seen.insert(idx).second) {
            throw ValidationError("preference lists contract \"" +
                                  spec.universe->label(idx) + "\" twice");
        }
        acceptable.insert(idx);
    }

    const int y_size = static_cast<int>(plan.preference.size());
    plan.global_quota = spec.global_quota.value_or(y_size);
    if (plan.global_quota < 0) {
        throw ValidationError("global quota must be >= 0, got " +
                              std::to_string(plan.global_quota));
    }

    std::vector<ContractSet> effective_members;
    for (const QuotaGroup& g : spec.groups) {
        if (g.quota < 0) {
            throw ValidationError("group quota must be >= 0, got " + std::to_string(g.quota));
        }
        ContractSet members = ContractSet::of(spec.universe, g.members);
        members = members & acceptable;  // contracts outside Y never bind
        // The chosen set never exceeds the global quota or |Y|, so a group cap
        // at least that large cannot bind; empty groups trivially cannot either.
        const bool ineffective =
            members.is_empty() || g.quota >= plan.global_quota || g.quota >= y_size;
        if (!ineffective) effective_members.push_back(members);
        if (ineffective && drop_ineffective_groups) continue;
        plan.group_members.push_back(std::move(members));
        plan.group_quotas.push_back(g.quota);
    }

    // Disjointness is required only of the groups that can actually bind, so
    // the check does not depend on whether evaluation keeps the others.
    if (!spec.allow_overlapping_groups) {
        for (std::size_t i = 0; i < effective_members.size(); ++i) {
            for (std::size_t j = i + 1; j < effective_members.size(); ++j) {
                ContractSet overlap = effective_members[i] & effective_members[j];
                if (!overlap.is_empty()) {
                    throw ValidationError(
                        "sub-quota groups overlap on " + to_string(overlap) +
                        "; overlapping groups lose the revealed-preference guarantee" +
                        " (set allow_overlapping_groups to accept a consistent-only map)");
                }
            }
        }
    }

    plan.groups_of.resize(plan.preference.size());
    for (std::size_t k = 0; k < plan.preference.size(); ++k) {
        for (std::size_t g = 0; g < plan.group_members.size(); ++g) {
            if (plan.group_members[g].contains(plan.preference[k])) {
                plan.groups_of[k].push_back(static_cast<int>(g));
            }
        }
    }
    return plan;
}

ContractSet run_greedy(const QuotaPlan& plan, const UniversePtr& universe,
                       const ContractSet& offered, std::vector<ContractSet>* states) {
    ContractSet chosen = ContractSet::empty(universe);
    int total = 0;
    std::vector<int> group_counts(plan.group_members.size(), 0);
    if (states) states->push_back(chosen);
    for (std::size_t k = 0; k < plan.preference.size(); ++k) {
        const int y = plan.preference[k];
        bool take = offered.contains(y) && total < plan.global_quota;
        if (take) {
            for (int g : plan.groups_of[k]) {
                if (group_counts[static_cast<std::size_t>(g)] >=
                    plan.group_quotas[static_cast<std::size_t>(g)]) {
                    take = false;
                    break;
                }
            }
        }
        if (take) {
            chosen.insert(y);
            ++total;
            for (int g : plan.groups_of[k]) ++group_counts[static_cast<std::size_t>(g)];
        }
        if (states) states->push_back(chosen);
    }
    return chosen;
}

}  // namespace

ChoiceFunction build_quota_choice(const QuotaChoiceSpec& spec, std::string name) {
    QuotaPlan plan = prepare(spec, /*drop_ineffective_groups=*/true);
    UniversePtr universe = spec.universe;
    return ChoiceFunction(
        universe,
        [plan, universe](const ContractSet& offered) {
            return run_greedy(plan, universe, offered, nullptr);
        },
        std::move(name));
}

ContractSet quota_choose(const QuotaChoiceSpec& spec, const ContractSet& offered) {
    QuotaPlan plan = prepare(spec, /*drop_ineffective_groups=*/false);
    if (offered.universe() != spec.universe) {
        throw UniverseMismatch("offered set is from another universe");
    }
    return run_greedy(plan, spec.universe, offered, nullptr);
}

std::vector<ContractSet> quota_choose_states(const QuotaChoiceSpec& spec,
                                             const ContractSet& offered) {
    QuotaPlan plan = prepare(spec, /*drop_ineffective_groups=*/false);
    if (offered.universe() != spec.universe) {
        throw UniverseMismatch("offered set is from another universe");
    }
    std::vector<ContractSet> states;
    run_greedy(plan, spec.universe, offered, &states);
    return states;
}

ChoiceFunction combine_partition(
    const UniversePtr& universe,
    std::vector<std::pair<ContractSet, ChoiceFunction>> children,
    std::string name) {
    ContractSet covered = ContractSet::empty(universe);
    for (const auto& [block, child] : children) {
        if (block.universe() != universe || child.universe() != universe) {
            throw UniverseMismatch("partition blocks and children must share the universe");
        }
        ContractSet overlap = covered & block;
        if (!overlap.is_empty()) {
            throw ValidationError("partition blocks overlap on " + to_string(overlap));
        }
        covered = covered | block;
    }
    ContractSet gap = covered.complement();
    if (!gap.is_empty()) {
        throw ValidationError("partition blocks leave " + to_string(gap) + " uncovered");
    }

    return ChoiceFunction(
        universe,
        [universe, children = std::move(children)](const ContractSet& offered) {
            ContractSet out = ContractSet::empty(universe);
            for (const auto& [block, child] : children) {
                out = out | child(offered & block);
            }
            return out;
        },
        std::move(name));
}

ChoiceFunction build_table_choice(const TableChoiceSpec& spec, std::string name) {
    if (!spec.universe) throw ValidationError("table choice spec requires a universe");
    const int n = spec.universe->size();
    if (n > kTableUniverseCap) {
        throw CapExceeded("table choice maps are limited to " +
                          std::to_string(kTableUniverseCap) + " contracts, got " +
                          std::to_string(n));
    }
    const std::size_t expected = std::size_t{1} << n;
    if (spec.table.size() != expected) {
        throw ValidationError("table must have exactly 2^" + std::to_string(n) + " = " +
                              std::to_string(expected) + " entries, got " +
                              std::to_string(spec.table.size()));
    }
    for (std::uint32_t mask = 0; mask < expected; ++mask) {
        if (spec.table[mask] & ~mask) {
            throw ValidationError(
                "table entry for " +
                to_string(ContractSet::from_mask(spec.universe, mask)) +
                " chooses contracts outside the subset: " +
                to_string(ContractSet::from_mask(spec.universe, spec.table[mask])));
        }
    }

    UniversePtr universe = spec.universe;
    std::vector<std::uint32_t> table = spec.table;
    return ChoiceFunction(
        universe,
        [universe, table = std::move(table)](const ContractSet& offered) {
            return ContractSet::from_mask(universe, table[offered.to_mask()]);
        },
        std::move(name));
}

}  // namespace stablematch

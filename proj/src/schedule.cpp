#include "stablematch/schedule.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace stablematch {

namespace {

using Triple = std::tuple<std::string, std::string, std::string>;

void require_distinct(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) {
            throw ValidationError(std::string("duplicate ") + what + " id \"" + id + "\"");
        }
    }
}

void require_declared(const std::vector<std::string>& ids, const std::string& id,
                      const char* what, const std::string& context) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        throw ValidationError(context + " references undeclared " + what + " \"" + id + "\"");
    }
}

void validate(const ScheduleProblem& p) {
    require_distinct(p.workers, "worker");
    require_distinct(p.firms, "firm");
    require_distinct(p.days, "day");

    if (p.contracts) {
        std::set<Triple> seen;
        for (const auto& [w, f, d] : *p.contracts) {
            require_declared(p.workers, w, "worker", "contract list");
            require_declared(p.firms, f, "firm", "contract list");
            require_declared(p.days, d, "day", "contract list");
            if (!seen.insert({w, f, d}).second) {
                throw ValidationError("contract list repeats " + contract_label(w, f, d));
            }
        }
    }

    std::unordered_set<std::string_view> spec_ids;
    for (const auto& ws : p.worker_specs) {
        require_declared(p.workers, ws.id, "worker", "worker spec");
        if (!spec_ids.insert(ws.id).second) {
            throw ValidationError("worker \"" + ws.id + "\" has two specs");
        }
        const std::string context = "worker \"" + ws.id + "\"";
        if (ws.quota && *ws.quota < 0) {
            throw ValidationError(context + ": quota must be >= 0");
        }
        std::set<std::pair<std::string, std::string>> prefs;
        for (const auto& [f, d] : ws.preference) {
            require_declared(p.firms, f, "firm", context);
            require_declared(p.days, d, "day", context);
            if (!prefs.insert({f, d}).second) {
                throw ValidationError(context + ": preference lists (" + f + ", " + d +
                                      ") twice");
            }
        }
        for (const auto& [d, q] : ws.day_quotas) {
            require_declared(p.days, d, "day", context);
            if (q < 0) throw ValidationError(context + ": day quota must be >= 0");
        }
        for (const auto& [f, q] : ws.firm_quotas) {
            require_declared(p.firms, f, "firm", context);
            if (q < 0) throw ValidationError(context + ": firm quota must be >= 0");
        }
    }
    spec_ids.clear();
    for (const auto& fs : p.firm_specs) {
        require_declared(p.firms, fs.id, "firm", "firm spec");
        if (!spec_ids.insert(fs.id).second) {
            throw ValidationError("firm \"" + fs.id + "\" has two specs");
        }
        const std::string context = "firm \"" + fs.id + "\"";
        if (fs.quota && *fs.quota < 0) {
            throw ValidationError(context + ": quota must be >= 0");
        }
        std::set<std::pair<std::string, std::string>> prefs;
        for (const auto& [w, d] : fs.preference) {
            require_declared(p.workers, w, "worker", context);
            require_declared(p.days, d, "day", context);
            if (!prefs.insert({w, d}).second) {
                throw ValidationError(context + ": preference lists (" + w + ", " + d +
                                      ") twice");
            }
        }
        for (const auto& [d, q] : fs.day_quotas) {
            require_declared(p.days, d, "day", context);
            if (q < 0) throw ValidationError(context + ": day quota must be >= 0");
        }
        for (const auto& [w, q] : fs.worker_quotas) {
            require_declared(p.workers, w, "worker", context);
            if (q < 0) throw ValidationError(context + ": worker quota must be >= 0");
        }
    }
}

// Restriction of the universe to one agent's side of the market.
struct AgentView {
    std::vector<int> block;  // all contracts naming the agent
    // triple components per universe index, resolved once
    const std::vector<Triple>* triples;
};

}  // namespace

std::string contract_label(const std::string& worker, const std::string& firm,
                           const std::string& day) {
    return "(" + worker + "," + firm + "," + day + ")";
}

std::vector<Triple> universe_triples(const ScheduleProblem& problem) {
    if (problem.contracts) return *problem.contracts;
    std::vector<Triple> out;
    out.reserve(problem.workers.size() * problem.firms.size() * problem.days.size());
    for (const auto& w : problem.workers) {
        for (const auto& f : problem.firms) {
            for (const auto& d : problem.days) {
                out.push_back({w, f, d});
            }
        }
    }
    return out;
}

UniversePtr build_universe(const ScheduleProblem& problem) {
    validate(problem);
    std::vector<std::string> labels;
    for (const auto& [w, f, d] : universe_triples(problem)) {
        labels.push_back(contract_label(w, f, d));
    }
    return make_universe(std::move(labels));
}

namespace {

QuotaChoiceSpec compile_agent(const ScheduleProblem& problem, const UniversePtr& universe,
                              const std::string& agent_id, bool is_worker,
                              const std::vector<std::pair<std::string, std::string>>& preference,
                              const std::optional<int>& quota,
                              const std::map<std::string, int>& day_quotas,
                              const std::map<std::string, int>& counterparty_quotas) {
    const std::string context =
        std::string(is_worker ? "worker" : "firm") + " \"" + agent_id + "\"";

    QuotaChoiceSpec spec;
    spec.universe = universe;
    for (const auto& [other, day] : preference) {
        const std::string label = is_worker ? contract_label(agent_id, other, day)
                                            : contract_label(other, agent_id, day);
        auto idx = universe->index_of(label);
        if (!idx) {
            throw ValidationError(context + ": preference names contract " + label +
                                  " which is outside the universe");
        }
        spec.preference.push_back(*idx);
    }
    spec.global_quota = quota ? *quota : static_cast<int>(spec.preference.size());

    // Group membership is decided on the agent's preference triples only;
    // restriction to Y is therefore already done here.
    auto add_groups = [&](const std::map<std::string, int>& quotas, bool by_day) {
        for (const auto& [key, q] : quotas) {
            QuotaGroup group;
            group.quota = q;
            for (std::size_t k = 0; k < preference.size(); ++k) {
                const std::string& component = by_day ? preference[k].second
                                                      : preference[k].first;
                if (component == key) group.members.push_back(spec.preference[k]);
            }
            spec.groups.push_back(std::move(group));
        }
    };
    add_groups(day_quotas, /*by_day=*/true);
    add_groups(counterparty_quotas, /*by_day=*/false);

    // Drop groups that cannot bind, then insist the rest are pairwise
    // disjoint: a binding per-day cap and a binding per-counterparty cap meet
    // in a (counterparty, day) contract and would overlap.
    const int global = *spec.global_quota;
    const int y_size = static_cast<int>(spec.preference.size());
    std::vector<QuotaGroup> binding;
    for (auto& g : spec.groups) {
        if (g.members.empty() || g.quota >= global || g.quota >= y_size) continue;
        binding.push_back(std::move(g));
    }
    spec.groups = std::move(binding);
    for (std::size_t i = 0; i < spec.groups.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.groups.size(); ++j) {
            ContractSet a = ContractSet::of(universe, spec.groups[i].members);
            ContractSet b = ContractSet::of(universe, spec.groups[j].members);
            ContractSet overlap = a & b;
            if (!overlap.is_empty()) {
                throw ValidationError(
                    context + ": sub-quota groups overlap on " + to_string(overlap) +
                    "; per-day and per-counterparty caps cannot both bind on one agent");
            }
        }
    }
    (void)problem;
    return spec;
}

}  // namespace

QuotaChoiceSpec compile_worker(const ScheduleProblem& problem, const UniversePtr& universe,
                               const WorkerSpec& spec) {
    return compile_agent(problem, universe, spec.id, true, spec.preference, spec.quota,
                         spec.day_quotas, spec.firm_quotas);
}

QuotaChoiceSpec compile_firm(const ScheduleProblem& problem, const UniversePtr& universe,
                             const FirmSpec& spec) {
    return compile_agent(problem, universe, spec.id, false, spec.preference, spec.quota,
                         spec.day_quotas, spec.worker_quotas);
}

CompiledMarket build_market(const ScheduleProblem& problem) {
    UniversePtr universe = build_universe(problem);
    const std::vector<Triple> triples = universe_triples(problem);

    auto block_of = [&](const std::string& id, bool is_worker) {
        ContractSet block = ContractSet::empty(universe);
        for (std::size_t i = 0; i < triples.size(); ++i) {
            const std::string& component =
                is_worker ? std::get<0>(triples[i]) : std::get<1>(triples[i]);
            if (component == id) block.insert(static_cast<int>(i));
        }
        return block;
    };

    auto spec_for_worker = [&](const std::string& id) -> const WorkerSpec* {
        for (const auto& ws : problem.worker_specs) {
            if (ws.id == id) return &ws;
        }
        return nullptr;
    };
    auto spec_for_firm = [&](const std::string& id) -> const FirmSpec* {
        for (const auto& fs : problem.firm_specs) {
            if (fs.id == id) return &fs;
        }
        return nullptr;
    };

    // A declared agent without a spec accepts nothing: empty preference list.
    std::vector<std::pair<ContractSet, ChoiceFunction>> worker_children;
    for (const auto& w : problem.workers) {
        const WorkerSpec* ws = spec_for_worker(w);
        WorkerSpec empty_spec;
        if (!ws) {
            empty_spec.id = w;
            ws = &empty_spec;
        }
        worker_children.emplace_back(block_of(w, true),
                                     build_quota_choice(compile_worker(problem, universe, *ws),
                                                        "worker:" + w));
    }
    std::vector<std::pair<ContractSet, ChoiceFunction>> firm_children;
    for (const auto& f : problem.firms) {
        const FirmSpec* fs = spec_for_firm(f);
        FirmSpec empty_spec;
        if (!fs) {
            empty_spec.id = f;
            fs = &empty_spec;
        }
        firm_children.emplace_back(block_of(f, false),
                                   build_quota_choice(compile_firm(problem, universe, *fs),
                                                      "firm:" + f));
    }

    return CompiledMarket{
        universe,
        combine_partition(universe, std::move(worker_children), "workers"),
        combine_partition(universe, std::move(firm_children), "firms")};
}

namespace {

void validate_hours(const HoursEncoding& enc) {
    std::vector<std::string> worker_ids, firm_ids;
    for (const auto& w : enc.workers) worker_ids.push_back(w.id);
    for (const auto& f : enc.firms) firm_ids.push_back(f.id);
    require_distinct(worker_ids, "worker");
    require_distinct(firm_ids, "firm");

    auto validate_agent = [](const HoursAgent& agent,
                             const std::vector<std::string>& counterparties,
                             const char* counter_kind) {
        const std::string context = "agent \"" + agent.id + "\"";
        require_distinct(agent.ranking, "ranking entry");
        for (const auto& other : agent.ranking) {
            require_declared(counterparties, other, counter_kind, context);
            auto it = agent.max_hours.find(other);
            if (it == agent.max_hours.end()) {
                throw ValidationError(context + " ranks \"" + other +
                                      "\" but declares no max hours for it");
            }
            if (it->second < 0) {
                throw ValidationError(context + ": max hours must be >= 0");
            }
        }
        for (const auto& [other, hours] : agent.max_hours) {
            (void)hours;
            if (std::find(agent.ranking.begin(), agent.ranking.end(), other) ==
                agent.ranking.end()) {
                throw ValidationError(context + " declares max hours for unranked \"" +
                                      other + "\"");
            }
        }
    };
    for (const auto& w : enc.workers) validate_agent(w, firm_ids, "firm");
    for (const auto& f : enc.firms) validate_agent(f, worker_ids, "worker");
}

const HoursAgent* find_agent(const std::vector<HoursAgent>& agents, const std::string& id) {
    for (const auto& a : agents) {
        if (a.id == id) return &a;
    }
    return nullptr;
}

bool ranks(const HoursAgent& agent, const std::string& other) {
    return std::find(agent.ranking.begin(), agent.ranking.end(), other) !=
           agent.ranking.end();
}

int cap_of(const HoursAgent& agent, const std::string& other) {
    auto it = agent.max_hours.find(other);
    return it == agent.max_hours.end() ? 0 : it->second;
}

}  // namespace

ScheduleProblem expand_hours(const HoursEncoding& encoding) {
    validate_hours(encoding);

    ScheduleProblem p;
    for (const auto& w : encoding.workers) p.workers.push_back(w.id);
    for (const auto& f : encoding.firms) p.firms.push_back(f.id);

    auto mutual = [&](const HoursAgent& worker, const std::string& firm_id) {
        const HoursAgent* firm = find_agent(encoding.firms, firm_id);
        return firm && ranks(*firm, worker.id) && ranks(worker, firm_id);
    };

    int max_slot = 0;
    for (const auto& w : encoding.workers) {
        for (const auto& f : w.ranking) {
            if (!mutual(w, f)) continue;
            const HoursAgent* firm = find_agent(encoding.firms, f);
            max_slot = std::max(max_slot, std::max(cap_of(w, f), cap_of(*firm, w.id)));
        }
    }
    for (int k = 1; k <= max_slot; ++k) p.days.push_back(std::to_string(k));

    // Universe: slots 1..max(cap_w, cap_f) per mutually ranked pair, in
    // worker-major, firm-declaration, slot order.
    std::vector<Triple> contracts;
    for (const auto& w : encoding.workers) {
        for (const auto& f : encoding.firms) {
            if (!ranks(w, f.id) || !ranks(f, w.id)) continue;
            const int top = std::max(cap_of(w, f.id), cap_of(f, w.id));
            for (int k = 1; k <= top; ++k) {
                contracts.push_back({w.id, f.id, std::to_string(k)});
            }
        }
    }
    p.contracts = std::move(contracts);

    // Preference lists extend the pair rankings lexicographically; a side
    // lists slots only up to its own cap, so larger slot counts are
    // unacceptable to it even when the universe carries them.
    for (const auto& w : encoding.workers) {
        WorkerSpec ws;
        ws.id = w.id;
        for (const auto& f : w.ranking) {
            if (!mutual(w, f)) continue;
            for (int k = 1; k <= cap_of(w, f); ++k) {
                ws.preference.push_back({f, std::to_string(k)});
            }
        }
        p.worker_specs.push_back(std::move(ws));
    }
    for (const auto& f : encoding.firms) {
        FirmSpec fs;
        fs.id = f.id;
        for (const auto& w : f.ranking) {
            const HoursAgent* worker = find_agent(encoding.workers, w);
            if (!worker || !ranks(*worker, f.id)) continue;
            for (int k = 1; k <= cap_of(f, w); ++k) {
                fs.preference.push_back({w, std::to_string(k)});
            }
        }
        p.firm_specs.push_back(std::move(fs));
    }
    return p;
}

HoursTable interpret_hours(const ContractSet& s, const HoursEncoding& encoding) {
    const ScheduleProblem expanded = expand_hours(encoding);
    const std::vector<Triple> triples = universe_triples(expanded);

    // S may come from any structurally identical build of the expanded
    // universe; labels, not pointer identity, are checked here.
    const UniversePtr& su = s.universe();
    if (static_cast<std::size_t>(su->size()) != triples.size()) {
        throw UniverseMismatch("set is not over the expanded hours universe");
    }
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const auto& [w, f, d] = triples[i];
        if (su->label(static_cast<int>(i)) != contract_label(w, f, d)) {
            throw UniverseMismatch("set is not over the expanded hours universe");
        }
    }

    std::map<std::pair<std::string, std::string>, std::vector<int>> slots;
    for (int i : s.members()) {
        const auto& [w, f, d] = triples[static_cast<std::size_t>(i)];
        slots[{w, f}].push_back(std::stoi(d));
    }

    HoursTable table;
    for (const auto& w : encoding.workers) {
        for (const auto& f : encoding.firms) {
            if (!ranks(w, f.id) || !ranks(f, w.id)) continue;
            HoursAssignment entry{w.id, f.id, 0};
            auto it = slots.find({w.id, f.id});
            if (it != slots.end()) {
                std::vector<int>& ks = it->second;
                std::sort(ks.begin(), ks.end());
                entry.hours = ks.back();
                if (static_cast<int>(ks.size()) != entry.hours) {
                    std::string missing;
                    std::size_t next = 0;
                    for (int k = 1; k <= entry.hours; ++k) {
                        if (next < ks.size() && ks[next] == k) {
                            ++next;
                        } else {
                            if (!missing.empty()) missing += ", ";
                            missing += std::to_string(k);
                        }
                    }
                    table.warnings.push_back("(" + w.id + ", " + f.id +
                                             "): slots are not contiguous, missing " +
                                             missing + " below " +
                                             std::to_string(entry.hours));
                }
            }
            table.entries.push_back(std::move(entry));
        }
    }
    return table;
}

}  // namespace stablematch

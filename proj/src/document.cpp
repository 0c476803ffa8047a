#include "stablematch/document.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stablematch/choicemaps.hpp"

namespace stablematch {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ParseError(path + ": " + message);
}

const ordered_json& field(const ordered_json& obj, const std::string& path,
                          const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing field \"" + key + "\"");
    return *it;
}

std::string get_string(const ordered_json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

int get_int(const ordered_json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool get_bool(const ordered_json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

const ordered_json& get_array(const ordered_json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

const ordered_json& get_object(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

std::vector<std::string> get_string_array(const ordered_json& j, const std::string& path) {
    get_array(j, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(get_string(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::pair<std::string, std::string> get_string_pair(const ordered_json& j,
                                                    const std::string& path) {
    get_array(j, path);
    if (j.size() != 2) fail(path, "expected a pair of strings");
    return {get_string(j[0], path + "[0]"), get_string(j[1], path + "[1]")};
}

std::map<std::string, int> get_int_map(const ordered_json& j, const std::string& path) {
    get_object(j, path);
    std::map<std::string, int> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        out[it.key()] = get_int(it.value(), path + "." + it.key());
    }
    return out;
}

void reject_unknown_keys(const ordered_json& obj, const std::string& path,
                         std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) fail(path, "unknown field \"" + it.key() + "\"");
    }
}

ScheduleProblem parse_schedule(const ordered_json& j) {
    reject_unknown_keys(j, "$", {"kind", "description", "workers", "firms", "days",
                                 "contracts", "worker_specs", "firm_specs"});
    ScheduleProblem p;
    p.workers = get_string_array(field(j, "$", "workers"), "workers");
    p.firms = get_string_array(field(j, "$", "firms"), "firms");
    p.days = get_string_array(field(j, "$", "days"), "days");

    if (j.contains("contracts")) {
        const auto& arr = get_array(j["contracts"], "contracts");
        std::vector<std::tuple<std::string, std::string, std::string>> contracts;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "contracts[" + std::to_string(i) + "]";
            const auto& entry = get_array(arr[i], path);
            if (entry.size() != 3) fail(path, "expected [worker, firm, day]");
            contracts.push_back({get_string(entry[0], path + "[0]"),
                                 get_string(entry[1], path + "[1]"),
                                 get_string(entry[2], path + "[2]")});
        }
        p.contracts = std::move(contracts);
    }

    if (j.contains("worker_specs")) {
        const auto& arr = get_array(j["worker_specs"], "worker_specs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "worker_specs[" + std::to_string(i) + "]";
            const auto& sj = get_object(arr[i], path);
            reject_unknown_keys(sj, path,
                                {"id", "preference", "quota", "day_quotas", "firm_quotas"});
            WorkerSpec ws;
            ws.id = get_string(field(sj, path, "id"), path + ".id");
            const auto& prefs = get_array(field(sj, path, "preference"), path + ".preference");
            for (std::size_t k = 0; k < prefs.size(); ++k) {
                ws.preference.push_back(get_string_pair(
                    prefs[k], path + ".preference[" + std::to_string(k) + "]"));
            }
            if (sj.contains("quota")) ws.quota = get_int(sj["quota"], path + ".quota");
            if (sj.contains("day_quotas")) {
                ws.day_quotas = get_int_map(sj["day_quotas"], path + ".day_quotas");
            }
            if (sj.contains("firm_quotas")) {
                ws.firm_quotas = get_int_map(sj["firm_quotas"], path + ".firm_quotas");
            }
            p.worker_specs.push_back(std::move(ws));
        }
    }

    if (j.contains("firm_specs")) {
        const auto& arr = get_array(j["firm_specs"], "firm_specs");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "firm_specs[" + std::to_string(i) + "]";
            const auto& sj = get_object(arr[i], path);
            reject_unknown_keys(sj, path,
                                {"id", "preference", "quota", "day_quotas", "worker_quotas"});
            FirmSpec fs;
            fs.id = get_string(field(sj, path, "id"), path + ".id");
            const auto& prefs = get_array(field(sj, path, "preference"), path + ".preference");
            for (std::size_t k = 0; k < prefs.size(); ++k) {
                fs.preference.push_back(get_string_pair(
                    prefs[k], path + ".preference[" + std::to_string(k) + "]"));
            }
            if (sj.contains("quota")) fs.quota = get_int(sj["quota"], path + ".quota");
            if (sj.contains("day_quotas")) {
                fs.day_quotas = get_int_map(sj["day_quotas"], path + ".day_quotas");
            }
            if (sj.contains("worker_quotas")) {
                fs.worker_quotas = get_int_map(sj["worker_quotas"], path + ".worker_quotas");
            }
            p.firm_specs.push_back(std::move(fs));
        }
    }
    return p;
}

// Canonical subset key: member labels in universe order joined by commas.
std::string subset_key(const std::vector<std::string>& labels, std::uint32_t mask) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (mask & (std::uint32_t{1} << i)) {
            if (!out.empty()) out += ",";
            out += labels[i];
        }
    }
    return out;
}

std::uint32_t parse_subset(const std::string& text, const std::vector<std::string>& labels,
                           const std::string& path) {
    std::uint32_t mask = 0;
    if (text.empty()) return mask;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        auto it = std::find(labels.begin(), labels.end(), token);
        if (it == labels.end()) fail(path, "unknown contract label \"" + token + "\"");
        const auto bit = std::uint32_t{1} << (it - labels.begin());
        if (mask & bit) fail(path, "label \"" + token + "\" repeated in subset");
        mask |= bit;
    }
    return mask;
}

RawChoiceDoc parse_raw_choice(const ordered_json& j, const std::string& path,
                              const std::vector<std::string>& labels) {
    get_object(j, path);
    RawChoiceDoc doc;
    const std::string type = get_string(field(j, path, "type"), path + ".type");
    if (type == "quota") {
        reject_unknown_keys(j, path, {"type", "preference", "q", "groups", "allow_overlap"});
        doc.kind = RawChoiceDoc::Kind::Quota;
        doc.preference =
            get_string_array(field(j, path, "preference"), path + ".preference");
        if (j.contains("q")) doc.global_quota = get_int(j["q"], path + ".q");
        if (j.contains("groups")) {
            const auto& arr = get_array(j["groups"], path + ".groups");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string gpath = path + ".groups[" + std::to_string(i) + "]";
                const auto& gj = get_object(arr[i], gpath);
                reject_unknown_keys(gj, gpath, {"members", "q"});
                RawChoiceDoc::Group g;
                g.members = get_string_array(field(gj, gpath, "members"), gpath + ".members");
                g.quota = get_int(field(gj, gpath, "q"), gpath + ".q");
                // canonical member order for round-trips
                std::sort(g.members.begin(), g.members.end(),
                          [&](const std::string& a, const std::string& b) {
                              return std::find(labels.begin(), labels.end(), a) <
                                     std::find(labels.begin(), labels.end(), b);
                          });
                doc.groups.push_back(std::move(g));
            }
        }
        if (j.contains("allow_overlap")) {
            doc.allow_overlap = get_bool(j["allow_overlap"], path + ".allow_overlap");
        }
    } else if (type == "table") {
        reject_unknown_keys(j, path, {"type", "entries"});
        doc.kind = RawChoiceDoc::Kind::Table;
        if (labels.size() > static_cast<std::size_t>(kTableUniverseCap)) {
            fail(path, "table maps are limited to " + std::to_string(kTableUniverseCap) +
                           " contracts");
        }
        const auto& entries = get_object(field(j, path, "entries"), path + ".entries");
        const std::size_t expected = std::size_t{1} << labels.size();
        doc.table.assign(expected, 0);
        std::vector<bool> seen(expected, false);
        for (auto it = entries.begin(); it != entries.end(); ++it) {
            const std::string epath = path + ".entries[\"" + it.key() + "\"]";
            const std::uint32_t key = parse_subset(it.key(), labels, epath);
            if (seen[key]) fail(epath, "subset listed twice");
            seen[key] = true;
            doc.table[key] = parse_subset(get_string(it.value(), epath), labels, epath);
        }
        for (std::size_t m = 0; m < expected; ++m) {
            if (!seen[m]) {
                fail(path + ".entries", "missing entry for subset \"" +
                                            subset_key(labels, static_cast<std::uint32_t>(m)) +
                                            "\"");
            }
        }
    } else {
        fail(path + ".type", "expected \"quota\" or \"table\", got \"" + type + "\"");
    }
    return doc;
}

RawInstanceDoc parse_raw(const ordered_json& j) {
    reject_unknown_keys(j, "$",
                        {"kind", "description", "labels", "worker_choice", "firm_choice"});
    RawInstanceDoc doc;
    doc.labels = get_string_array(field(j, "$", "labels"), "labels");
    for (const auto& label : doc.labels) {
        if (label.find(',') != std::string::npos) {
            fail("labels", "contract label \"" + label + "\" must not contain a comma");
        }
    }
    doc.worker_choice =
        parse_raw_choice(field(j, "$", "worker_choice"), "worker_choice", doc.labels);
    doc.firm_choice =
        parse_raw_choice(field(j, "$", "firm_choice"), "firm_choice", doc.labels);
    return doc;
}

HoursEncoding parse_hours(const ordered_json& j) {
    reject_unknown_keys(j, "$", {"kind", "description", "workers", "firms"});
    HoursEncoding enc;
    auto parse_agents = [&](const ordered_json& arr, const std::string& path) {
        std::vector<HoursAgent> agents;
        get_array(arr, path);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string apath = path + "[" + std::to_string(i) + "]";
            const auto& aj = get_object(arr[i], apath);
            reject_unknown_keys(aj, apath, {"id", "ranking", "max_hours"});
            HoursAgent agent;
            agent.id = get_string(field(aj, apath, "id"), apath + ".id");
            agent.ranking =
                get_string_array(field(aj, apath, "ranking"), apath + ".ranking");
            agent.max_hours =
                get_int_map(field(aj, apath, "max_hours"), apath + ".max_hours");
            agents.push_back(std::move(agent));
        }
        return agents;
    };
    enc.workers = parse_agents(field(j, "$", "workers"), "workers");
    enc.firms = parse_agents(field(j, "$", "firms"), "firms");
    return enc;
}

// Construction-level validation lives in the module builders; run them here
// so a parsed document is known-good before anyone uses it.
void validate_payload(const ProblemDocument& doc) {
    if (const auto* sched = std::get_if<ScheduleProblem>(&doc.payload)) {
        build_market(*sched);
    } else if (const auto* raw = std::get_if<RawInstanceDoc>(&doc.payload)) {
        compile_problem(doc);
        (void)raw;
    } else if (const auto* hours = std::get_if<HoursEncoding>(&doc.payload)) {
        build_market(expand_hours(*hours));
    }
}

}  // namespace

ProblemDocument parse_problem(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ParseError("line " + std::to_string(line) + ": " + e.what());
    }
    get_object(j, "$");

    ProblemDocument doc;
    if (j.contains("description")) {
        doc.description = get_string(j["description"], "description");
    }
    const std::string kind = get_string(field(j, "$", "kind"), "kind");
    if (kind == "schedule") {
        doc.payload = parse_schedule(j);
    } else if (kind == "raw") {
        doc.payload = parse_raw(j);
    } else if (kind == "hours") {
        doc.payload = parse_hours(j);
    } else {
        fail("kind", "expected \"schedule\", \"raw\" or \"hours\", got \"" + kind + "\"");
    }

    try {
        validate_payload(doc);
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
    return doc;
}

ProblemDocument parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_problem(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

namespace {

ordered_json render_raw_choice(const RawChoiceDoc& doc,
                               const std::vector<std::string>& labels) {
    ordered_json j;
    if (doc.kind == RawChoiceDoc::Kind::Quota) {
        j["type"] = "quota";
        j["preference"] = doc.preference;
        if (doc.global_quota) j["q"] = *doc.global_quota;
        if (!doc.groups.empty()) {
            ordered_json groups = ordered_json::array();
            for (const auto& g : doc.groups) {
                groups.push_back({{"members", g.members}, {"q", g.quota}});
            }
            j["groups"] = std::move(groups);
        }
        if (doc.allow_overlap) j["allow_overlap"] = true;
    } else {
        j["type"] = "table";
        ordered_json entries = ordered_json::object();
        for (std::uint32_t m = 0; m < doc.table.size(); ++m) {
            entries[subset_key(labels, m)] = subset_key(labels, doc.table[m]);
        }
        j["entries"] = std::move(entries);
    }
    return j;
}

}  // namespace

std::string render_problem(const ProblemDocument& doc) {
    ordered_json j;
    if (const auto* sched = std::get_if<ScheduleProblem>(&doc.payload)) {
        j["kind"] = "schedule";
        if (!doc.description.empty()) j["description"] = doc.description;
        j["workers"] = sched->workers;
        j["firms"] = sched->firms;
        j["days"] = sched->days;
        if (sched->contracts) {
            ordered_json contracts = ordered_json::array();
            for (const auto& [w, f, d] : *sched->contracts) {
                contracts.push_back({w, f, d});
            }
            j["contracts"] = std::move(contracts);
        }
        auto render_specs = [&](const auto& specs, const char* counter_key) {
            ordered_json arr = ordered_json::array();
            for (const auto& s : specs) {
                ordered_json sj;
                sj["id"] = s.id;
                ordered_json prefs = ordered_json::array();
                for (const auto& [a, b] : s.preference) prefs.push_back({a, b});
                sj["preference"] = std::move(prefs);
                if (s.quota) sj["quota"] = *s.quota;
                if (!s.day_quotas.empty()) sj["day_quotas"] = s.day_quotas;
                using SpecT = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<SpecT, WorkerSpec>) {
                    if (!s.firm_quotas.empty()) sj[counter_key] = s.firm_quotas;
                } else {
                    if (!s.worker_quotas.empty()) sj[counter_key] = s.worker_quotas;
                }
                arr.push_back(std::move(sj));
            }
            return arr;
        };
        j["worker_specs"] = render_specs(sched->worker_specs, "firm_quotas");
        j["firm_specs"] = render_specs(sched->firm_specs, "worker_quotas");
    } else if (const auto* raw = std::get_if<RawInstanceDoc>(&doc.payload)) {
        j["kind"] = "raw";
        if (!doc.description.empty()) j["description"] = doc.description;
        j["labels"] = raw->labels;
        j["worker_choice"] = render_raw_choice(raw->worker_choice, raw->labels);
        j["firm_choice"] = render_raw_choice(raw->firm_choice, raw->labels);
    } else {
        const auto& hours = std::get<HoursEncoding>(doc.payload);
        j["kind"] = "hours";
        if (!doc.description.empty()) j["description"] = doc.description;
        auto render_agents = [](const std::vector<HoursAgent>& agents) {
            ordered_json arr = ordered_json::array();
            for (const auto& a : agents) {
                arr.push_back({{"id", a.id},
                               {"ranking", a.ranking},
                               {"max_hours", a.max_hours}});
            }
            return arr;
        };
        j["workers"] = render_agents(hours.workers);
        j["firms"] = render_agents(hours.firms);
    }
    return j.dump(2) + "\n";
}

CompiledProblem compile_problem(const ProblemDocument& doc) {
    if (const auto* sched = std::get_if<ScheduleProblem>(&doc.payload)) {
        CompiledMarket market = build_market(*sched);
        return CompiledProblem{market.universe, market.worker_choice, market.firm_choice,
                               *sched, std::nullopt};
    }
    if (const auto* hours = std::get_if<HoursEncoding>(&doc.payload)) {
        ScheduleProblem expanded = expand_hours(*hours);
        CompiledMarket market = build_market(expanded);
        return CompiledProblem{market.universe, market.worker_choice, market.firm_choice,
                               std::move(expanded), *hours};
    }

    const auto& raw = std::get<RawInstanceDoc>(doc.payload);
    UniversePtr universe = make_universe(raw.labels);
    auto build_side = [&](const RawChoiceDoc& side, const std::string& name) {
        if (side.kind == RawChoiceDoc::Kind::Quota) {
            QuotaChoiceSpec spec;
            spec.universe = universe;
            for (const auto& label : side.preference) {
                spec.preference.push_back(universe->require_index(label));
            }
            spec.global_quota = side.global_quota;
            for (const auto& g : side.groups) {
                QuotaGroup qg;
                qg.quota = g.quota;
                for (const auto& label : g.members) {
                    qg.members.push_back(universe->require_index(label));
                }
                spec.groups.push_back(std::move(qg));
            }
            spec.allow_overlapping_groups = side.allow_overlap;
            return build_quota_choice(spec, name);
        }
        return build_table_choice(TableChoiceSpec{universe, side.table}, name);
    };
    ChoiceFunction worker = build_side(raw.worker_choice, "worker");
    ChoiceFunction firm = build_side(raw.firm_choice, "firm");
    return CompiledProblem{universe, std::move(worker), std::move(firm), std::nullopt,
                           std::nullopt};
}

ContractSet parse_set_file(const std::string& path, const UniversePtr& universe) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open \"" + path + "\"");
    std::stringstream buffer;
    buffer << in.rdbuf();
    ordered_json j;
    try {
        j = ordered_json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    const ordered_json* arr = &j;
    if (j.is_object()) {
        auto it = j.find("set");
        if (it == j.end()) throw ParseError(path + ": missing field \"set\"");
        arr = &*it;
    }
    if (!arr->is_array()) throw ParseError(path + ": expected an array of contract labels");
    ContractSet s = ContractSet::empty(universe);
    for (std::size_t i = 0; i < arr->size(); ++i) {
        const auto& entry = (*arr)[i];
        if (!entry.is_string()) {
            throw ParseError(path + ": set[" + std::to_string(i) + "]: expected a string");
        }
        const std::string label = entry.get<std::string>();
        auto idx = universe->index_of(label);
        if (!idx) {
            throw ParseError(path + ": set[" + std::to_string(i) +
                             "]: unknown contract label \"" + label + "\"");
        }
        s.insert(*idx);
    }
    return s;
}

}  // namespace stablematch

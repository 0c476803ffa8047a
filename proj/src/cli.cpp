#include "stablematch/cli.hpp"

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stablematch/analysis.hpp"
#include "stablematch/document.hpp"
#include "stablematch/errors.hpp"
#include "stablematch/render.hpp"
#include "stablematch/solver.hpp"

namespace stablematch {

namespace {

using nlohmann::ordered_json;

ordered_json set_json(const ContractSet& s) { return s.member_labels(); }

Side parse_side(const std::string& text) {
    return text == "firm" ? Side::Firm : Side::Worker;
}

StabilityMethod parse_method(const std::string& text) {
    if (text == "consistent") return StabilityMethod::ConsistentWitness;
    if (text == "revealing") return StabilityMethod::RevealingFast;
    return StabilityMethod::Definitional;
}

ClassifyBudget parse_budget(const std::string& text) {
    if (text == "exhaustive") return ClassifyBudget::exhaustive();
    const std::string prefix = "sampled:";
    if (text.rfind(prefix, 0) == 0) {
        int n = 0;
        try {
            n = std::stoi(text.substr(prefix.size()));
        } catch (const std::exception&) {
            throw ParseError("--budget: expected a number after \"sampled:\"");
        }
        if (n <= 0) throw ParseError("--budget: sample count must be positive");
        return ClassifyBudget::sampled(n);
    }
    throw ParseError("--budget: expected \"exhaustive\" or \"sampled:N\"");
}

const char* verdict_word(VerdictState state) {
    switch (state) {
        case VerdictState::True: return "true";
        case VerdictState::TrueSampled: return "true (sampled)";
        case VerdictState::False: return "false";
        case VerdictState::NotEvaluated: return "not evaluated";
    }
    return "?";
}

const char* method_word(StabilityMethod method) {
    switch (method) {
        case StabilityMethod::Definitional: return "definitional";
        case StabilityMethod::ConsistentWitness: return "consistent";
        case StabilityMethod::RevealingFast: return "revealing";
    }
    return "?";
}

void print_set_block(std::ostream& out, const ContractSet& s,
                     const CompiledProblem& problem) {
    if (problem.schedule) {
        out << render_set_table(s, *problem.schedule);
        return;
    }
    if (s.count() == 0) {
        out << "(empty)\n";
        return;
    }
    for (const auto& label : s.member_labels()) out << label << '\n';
}

void print_hours(std::ostream& out, const ContractSet& s, const CompiledProblem& problem) {
    const HoursTable table = interpret_hours(s, *problem.hours);
    out << "hours:\n" << render_hours_table(table);
    for (const auto& warning : table.warnings) out << "warning: " << warning << '\n';
}

ordered_json hours_json(const ContractSet& s, const CompiledProblem& problem) {
    const HoursTable table = interpret_hours(s, *problem.hours);
    ordered_json entries = ordered_json::array();
    for (const auto& entry : table.entries) {
        entries.push_back(
            {{"worker", entry.worker}, {"firm", entry.firm}, {"hours", entry.hours}});
    }
    return {{"entries", std::move(entries)}, {"warnings", table.warnings}};
}

int cmd_solve(std::ostream& out, const CompiledProblem& problem, const std::string& side,
              const std::string& style, bool check_revealing, const std::string& format) {
    SolveOptions options;
    options.style = style == "alternating" ? IterationStyle::Alternating : IterationStyle::Pair;
    options.check_revealing = check_revealing;

    std::vector<Side> sides;
    if (side == "both") {
        sides = {Side::Worker, Side::Firm};
    } else {
        sides = {parse_side(side)};
    }

    ordered_json results = ordered_json::array();
    bool first = true;
    for (Side s : sides) {
        const SolveOutcome outcome =
            solve(problem.worker_choice, problem.firm_choice, s, options);
        const char* name = s == Side::Worker ? "worker" : "firm";
        if (format == "json") {
            ordered_json r;
            r["side"] = name;
            r["stable_set"] = set_json(outcome.stable_set);
            r["witness_worker"] = set_json(outcome.witness_worker);
            r["witness_firm"] = set_json(outcome.witness_firm);
            r["iterations"] = outcome.iterations;
            if (outcome.precondition_checked) {
                r["revealing_check"] = outcome.precondition_ok ? "passed" : "failed";
            }
            if (problem.hours) r["hours"] = hours_json(outcome.stable_set, problem);
            results.push_back(std::move(r));
            continue;
        }
        if (!first) out << '\n';
        first = false;
        out << name << "-optimal stable set (" << outcome.stable_set.count() << " of "
            << problem.universe->size() << " contracts):\n";
        print_set_block(out, outcome.stable_set, problem);
        if (problem.hours) print_hours(out, outcome.stable_set, problem);
        if (outcome.precondition_checked && !outcome.precondition_ok) {
            out << "note: revealing check failed; the result is a fixed point; "
                   "stability not guaranteed\n";
        }
    }
    if (format == "json") out << ordered_json{{"results", std::move(results)}}.dump(2) << '\n';
    return 0;
}

int cmd_verify(std::ostream& out, const CompiledProblem& problem,
               const std::string& set_path, const std::string& method_name,
               bool expect_stable, bool assume, const std::string& format) {
    const ContractSet s = parse_set_file(set_path, problem.universe);
    const StabilityMethod method = parse_method(method_name);
    const PreconditionPolicy policy =
        assume ? PreconditionPolicy::Assume : PreconditionPolicy::Check;
    const StabilityVerdict verdict =
        is_stable(problem.worker_choice, problem.firm_choice, s, method, policy);

    if (format == "json") {
        ordered_json j;
        j["stable"] = verdict.stable;
        j["method"] = method_word(verdict.method);
        j["set"] = set_json(s);
        if (verdict.witnesses) {
            j["witness_worker"] = set_json(verdict.witnesses->first);
            j["witness_firm"] = set_json(verdict.witnesses->second);
        }
        if (verdict.blocker) j["blocker"] = problem.universe->label(*verdict.blocker);
        if (verdict.ir_violation) j["ir_violation"] = true;
        if (!verdict.detail.empty()) j["detail"] = verdict.detail;
        out << j.dump(2) << '\n';
    } else {
        out << "verdict: " << (verdict.stable ? "stable" : "unstable") << '\n';
        out << "method: " << method_word(verdict.method) << '\n';
        if (verdict.witnesses) {
            out << "S_W = " << to_string(verdict.witnesses->first) << '\n';
            out << "S_F = " << to_string(verdict.witnesses->second) << '\n';
        }
        if (!verdict.detail.empty()) out << "detail: " << verdict.detail << '\n';
    }
    if (expect_stable && !verdict.stable) return 2;
    return 0;
}

int cmd_classify(std::ostream& out, const CompiledProblem& problem, const std::string& map,
                 const std::string& budget_text, const std::string& format) {
    const ChoiceFunction& choice =
        map == "firm" ? problem.firm_choice : problem.worker_choice;
    const ClassifyBudget budget = parse_budget(budget_text);
    const PropertyReport report = classify(choice, budget);

    const std::pair<const char*, const Verdict*> rows[] = {
        {"is_choice_map", &report.is_choice_map}, {"revealing", &report.revealing},
        {"consistent", &report.consistent},       {"persistent", &report.persistent},
        {"idempotent", &report.idempotent},
        {"rejection_monotone", &report.rejection_monotone},
    };

    if (format == "json") {
        ordered_json j;
        j["map"] = map;
        j["budget"] = budget_text;
        ordered_json props;
        for (const auto& [name, verdict] : rows) {
            ordered_json v;
            v["state"] = verdict_word(verdict->state);
            if (verdict->witness) {
                v["witness_a"] = set_json(verdict->witness->a);
                if (verdict->witness->b) v["witness_b"] = set_json(*verdict->witness->b);
            }
            props[name] = std::move(v);
        }
        j["properties"] = std::move(props);
        out << j.dump(2) << '\n';
        return 0;
    }

    out << "map: " << map << " (" << problem.universe->size() << " contracts, budget "
        << budget_text << ")\n";
    for (const auto& [name, verdict] : rows) {
        std::string line = name;
        line += ':';
        line.resize(20, ' ');
        line += verdict_word(verdict->state);
        if (verdict->witness) {
            line += "  witness A = " + to_string(verdict->witness->a);
            if (verdict->witness->b) line += ", B = " + to_string(*verdict->witness->b);
        }
        out << line << '\n';
    }
    return 0;
}

int cmd_enumerate(std::ostream& out, const CompiledProblem& problem,
                  const std::string& method_name, std::optional<int> cap,
                  const std::string& format) {
    const std::vector<ContractSet> stable_sets =
        enumerate_stable(problem.worker_choice, problem.firm_choice,
                         parse_method(method_name), PreconditionPolicy::Check, cap);
    if (format == "json") {
        ordered_json sets = ordered_json::array();
        for (const auto& s : stable_sets) sets.push_back(set_json(s));
        out << ordered_json{{"count", stable_sets.size()}, {"stable_sets", std::move(sets)}}
                   .dump(2)
            << '\n';
        return 0;
    }
    out << "stable sets: " << stable_sets.size() << '\n';
    for (const auto& s : stable_sets) out << to_string(s) << '\n';
    return 0;
}

int cmd_trace(std::ostream& out, const CompiledProblem& problem, const std::string& side,
              const std::string& format) {
    SolveOptions options;
    options.style = IterationStyle::Alternating;
    const SolveOutcome outcome =
        solve(problem.worker_choice, problem.firm_choice, parse_side(side), options);
    if (format == "csv") {
        out << render_trace_csv(outcome.trace, outcome.stable_set);
    } else if (format == "json") {
        ordered_json columns = ordered_json::array();
        for (const auto& step : outcome.trace.steps) {
            if (step.a) {
                columns.push_back(
                    {{"name", "X_" + std::to_string(step.index)}, {"members", set_json(*step.a)}});
            }
            if (step.b) {
                columns.push_back(
                    {{"name", "Y_" + std::to_string(step.index)}, {"members", set_json(*step.b)}});
            }
        }
        ordered_json j;
        j["side"] = side;
        j["columns"] = std::move(columns);
        j["stable_set"] = set_json(outcome.stable_set);
        out << j.dump(2) << '\n';
    } else {
        out << render_trace_table(outcome.trace, outcome.stable_set);
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"stable sets of contracts for two-sided schedule-matching markets"};
    app.name("stablematch");
    app.require_subcommand(1);

    std::string input;
    std::string side = "worker";
    std::string style = "pair";
    std::string method = "definitional";
    std::string format = "text";
    std::string budget = "exhaustive";
    std::string map = "worker";
    std::string set_path;
    bool check_revealing = false;
    bool expect_stable = false;
    bool assume = false;
    std::optional<int> cap;

    const auto side_values = CLI::IsMember({"worker", "firm", "both"});
    const auto side_only = CLI::IsMember({"worker", "firm"});
    const auto method_values = CLI::IsMember({"definitional", "consistent", "revealing"});

    CLI::App* solve_cmd =
        app.add_subcommand("solve", "compute an extreme stable set by fixed-point iteration");
    solve_cmd->add_option("--input", input, "problem document (JSON)")->required();
    solve_cmd->add_option("--side", side, "worker | firm | both")
        ->required()
        ->check(side_values);
    solve_cmd->add_option("--style", style, "pair | alternating")
        ->check(CLI::IsMember({"pair", "alternating"}));
    solve_cmd->add_flag("--check-revealing", check_revealing,
                        "classify both maps first; report if the hypothesis fails");
    solve_cmd->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* verify_cmd = app.add_subcommand("verify", "check stability of a candidate set");
    verify_cmd->add_option("--input", input, "problem document (JSON)")->required();
    verify_cmd->add_option("--set", set_path, "candidate set (JSON array of labels)")
        ->required();
    verify_cmd->add_option("--method", method, "definitional | consistent | revealing")
        ->check(method_values);
    verify_cmd->add_flag("--expect-stable", expect_stable,
                         "exit 2 when the set is not stable");
    verify_cmd->add_flag("--assume", assume, "skip the method's precondition check");
    verify_cmd->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* classify_cmd =
        app.add_subcommand("classify", "report structural properties of one choice map");
    classify_cmd->add_option("--input", input, "problem document (JSON)")->required();
    classify_cmd->add_option("--map", map, "worker | firm")->required()->check(side_only);
    classify_cmd->add_option("--budget", budget, "exhaustive | sampled:N");
    classify_cmd->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* enumerate_cmd = app.add_subcommand("enumerate", "list all stable sets");
    enumerate_cmd->add_option("--input", input, "problem document (JSON)")->required();
    enumerate_cmd->add_option("--cap", cap, "override the universe-size cap");
    enumerate_cmd->add_option("--method", method, "definitional | consistent | revealing")
        ->check(method_values);
    enumerate_cmd->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* trace_cmd =
        app.add_subcommand("trace", "print the alternating iteration table");
    trace_cmd->add_option("--input", input, "problem document (JSON)")->required();
    trace_cmd->add_option("--side", side, "worker | firm")->required()->check(side_only);
    trace_cmd->add_option("--format", format, "table | csv | json")
        ->check(CLI::IsMember({"table", "csv", "json"}));

    try {
        std::vector<std::string> argv_storage;
        argv_storage.reserve(args.size() + 1);
        argv_storage.push_back("stablematch");
        argv_storage.insert(argv_storage.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        argv.reserve(argv_storage.size());
        for (const auto& s : argv_storage) argv.push_back(s.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        const CompiledProblem problem = compile_problem(parse_problem_file(input));
        if (solve_cmd->parsed()) {
            return cmd_solve(out, problem, side, style, check_revealing, format);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(out, problem, set_path, method, expect_stable, assume, format);
        }
        if (classify_cmd->parsed()) return cmd_classify(out, problem, map, budget, format);
        if (enumerate_cmd->parsed()) {
            return cmd_enumerate(out, problem, method, cap,
                                 format == "text" ? "text" : format);
        }
        if (trace_cmd->parsed()) {
            return cmd_trace(out, problem, side, format == "text" ? "table" : format);
        }
        err << "error: no subcommand\n";
        return 1;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceFailure& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace stablematch

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stablematch/core.hpp"
#include "stablematch/schedule.hpp"

namespace stablematch {

// Validated form of one side's choice map in a "raw" instance document.
// Quota maps keep their preference order; table maps are stored as the mask
// table over the document's label order with canonical keys on output.
struct RawChoiceDoc {
    enum class Kind { Quota, Table };

    struct Group {
        std::vector<std::string> members;
        int quota = 0;

        bool operator==(const Group&) const = default;
    };

    Kind kind = Kind::Quota;
    // quota form
    std::vector<std::string> preference;
    std::optional<int> global_quota;
    std::vector<Group> groups;
    bool allow_overlap = false;
    // table form
    std::vector<std::uint32_t> table;

    bool operator==(const RawChoiceDoc&) const = default;
};

struct RawInstanceDoc {
    std::vector<std::string> labels;
    RawChoiceDoc worker_choice;
    RawChoiceDoc firm_choice;

    bool operator==(const RawInstanceDoc&) const = default;
};

// One self-describing input file: a schedule problem, a raw pair of choice
// maps over labeled contracts, or an hours encoding. The kind is explicit in
// the file ("kind": "schedule" | "raw" | "hours").
struct ProblemDocument {
    std::string description;
    std::variant<ScheduleProblem, RawInstanceDoc, HoursEncoding> payload;

    bool operator==(const ProblemDocument&) const = default;
};

// Parses and validates. Syntax errors carry the line; semantic errors carry
// the field path.
ProblemDocument parse_problem(const std::string& text);
ProblemDocument parse_problem_file(const std::string& path);

// Canonical JSON rendering; parse(render(doc)) == doc on validated models.
std::string render_problem(const ProblemDocument& doc);

// Market compiled from any document kind. `hours` is set exactly when the
// problem came from an hours encoding; `schedule` is set for schedule and
// hours documents and drives triple-structured output.
struct CompiledProblem {
    UniversePtr universe;
    ChoiceFunction worker_choice;
    ChoiceFunction firm_choice;
    std::optional<ScheduleProblem> schedule;
    std::optional<HoursEncoding> hours;
};

CompiledProblem compile_problem(const ProblemDocument& doc);

// Candidate-set file for verification: a JSON array of contract labels, or
// an object {"set": [...]}.
ContractSet parse_set_file(const std::string& path, const UniversePtr& universe);

}  // namespace stablematch

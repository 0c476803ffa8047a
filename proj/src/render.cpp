#include "stablematch/render.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace stablematch {

namespace {

struct Column {
    std::string header;
    ContractSet members;
};

// Flattens the per-step record into display columns. Pair style yields two
// columns per step, alternating style one.
std::vector<Column> make_columns(const IterationTrace& trace,
                                 const std::optional<ContractSet>& stable_set) {
    std::vector<Column> cols;
    for (const auto& step : trace.steps) {
        if (step.a) cols.push_back({"X_" + std::to_string(step.index), *step.a});
        if (step.b) cols.push_back({"Y_" + std::to_string(step.index), *step.b});
    }
    if (stable_set) cols.push_back({"S", *stable_set});
    return cols;
}

std::string pad_right(const std::string& text, std::size_t width) {
    std::string out = text;
    out.resize(std::max(width, out.size()), ' ');
    return out;
}

std::string centered_mark(bool present, std::size_t width) {
    if (!present) return std::string(width, ' ');
    std::string out(width, ' ');
    out[(width - 1) / 2] = 'x';
    return out;
}

void rstrip(std::string& line) {
    while (!line.empty() && line.back() == ' ') line.pop_back();
}

std::string csv_field(const std::string& text) {
    if (text.find(',') == std::string::npos && text.find('"') == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string simple_table(const std::vector<std::string>& headers,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& h : headers) widths.push_back(h.size());
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            widths[i] = std::max(widths[i], row[i].size());
        }
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) line += " | ";
            line += pad_right(cells[i], widths[i]);
        }
        rstrip(line);
        out << line << '\n';
    };
    emit(headers);
    std::size_t total = 0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        total += widths[i] + (i > 0 ? 3 : 0);
    }
    out << std::string(total, '-') << '\n';
    for (const auto& row : rows) emit(row);
    return out.str();
}

}  // namespace

std::string render_trace_table(const IterationTrace& trace,
                               const std::optional<ContractSet>& stable_set) {
    const std::vector<Column> cols = make_columns(trace, stable_set);
    if (cols.empty()) return "";
    const UniversePtr& universe = cols.front().members.universe();

    std::size_t label_width = std::string("contract").size();
    for (int i = 0; i < universe->size(); ++i) {
        label_width = std::max(label_width, universe->label(i).size());
    }

    std::ostringstream out;
    std::string header = pad_right("contract", label_width);
    for (const auto& col : cols) header += " | " + col.header;
    rstrip(header);
    out << header << '\n';
    out << std::string(header.size(), '-') << '\n';

    for (int i = 0; i < universe->size(); ++i) {
        std::string line = pad_right(universe->label(i), label_width);
        for (const auto& col : cols) {
            line += " | " + centered_mark(col.members.contains(i), col.header.size());
        }
        rstrip(line);
        out << line << '\n';
    }
    return out.str();
}

std::string render_trace_csv(const IterationTrace& trace,
                             const std::optional<ContractSet>& stable_set) {
    const std::vector<Column> cols = make_columns(trace, stable_set);
    if (cols.empty()) return "";
    const UniversePtr& universe = cols.front().members.universe();

    std::ostringstream out;
    out << "contract";
    for (const auto& col : cols) out << ',' << col.header;
    out << '\n';
    for (int i = 0; i < universe->size(); ++i) {
        out << csv_field(universe->label(i));
        for (const auto& col : cols) out << ',' << (col.members.contains(i) ? '1' : '0');
        out << '\n';
    }
    return out.str();
}

std::string render_set_table(const ContractSet& s, const ScheduleProblem& problem) {
    const auto triples = universe_triples(problem);
    std::vector<std::vector<std::string>> rows;
    for (int i : s.members()) {
        const auto& [w, f, d] = triples[static_cast<std::size_t>(i)];
        rows.push_back({w, f, d});
    }
    return simple_table({"worker", "firm", "day"}, rows);
}

std::string render_hours_table(const HoursTable& table) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& entry : table.entries) {
        rows.push_back({entry.worker, entry.firm, std::to_string(entry.hours)});
    }
    return simple_table({"worker", "firm", "hours"}, rows);
}

}  // namespace stablematch

#include "stablematch/core.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <unordered_set>

namespace stablematch {

namespace {

constexpr int kWordBits = 64;

int word_count(int n) { return (n + kWordBits - 1) / kWordBits; }

}  // namespace

ContractUniverse::ContractUniverse(std::vector<std::string> labels)
    : labels_(std::move(labels)) {}

UniversePtr ContractUniverse::make(std::vector<std::string> labels) {
    std::unordered_set<std::string_view> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) {
            throw ValidationError("duplicate contract label \"" + label + "\"");
        }
    }
    return UniversePtr(new ContractUniverse(std::move(labels)));
}

const std::string& ContractUniverse::label(int index) const {
    if (index < 0 || index >= size()) {
        throw ValidationError("contract index " + std::to_string(index) +
                              " out of range for universe of size " +
                              std::to_string(size()));
    }
    return labels_[static_cast<std::size_t>(index)];
}

std::optional<int> ContractUniverse::index_of(std::string_view label) const {
    for (int i = 0; i < size(); ++i) {
        if (labels_[static_cast<std::size_t>(i)] == label) return i;
    }
    return std::nullopt;
}

int ContractUniverse::require_index(std::string_view label) const {
    if (auto i = index_of(label)) return *i;
    throw ValidationError("unknown contract label \"" + std::string(label) + "\"");
}

UniversePtr make_universe(std::vector<std::string> labels) {
    return ContractUniverse::make(std::move(labels));
}

ContractSet::ContractSet(UniversePtr universe)
    : universe_(std::move(universe)),
      words_(static_cast<std::size_t>(word_count(universe_->size())), 0) {
    if (!universe_) throw ValidationError("contract set requires a universe");
}

ContractSet ContractSet::empty(const UniversePtr& universe) {
    return ContractSet(universe);
}

ContractSet ContractSet::full(const UniversePtr& universe) {
    ContractSet s(universe);
    const int n = universe->size();
    for (std::size_t w = 0; w < s.words_.size(); ++w) {
        s.words_[w] = ~std::uint64_t{0};
    }
    if (n % kWordBits != 0 && !s.words_.empty()) {
        s.words_.back() &= (std::uint64_t{1} << (n % kWordBits)) - 1;
    }
    return s;
}

ContractSet ContractSet::of(const UniversePtr& universe, const std::vector<int>& indices) {
    ContractSet s(universe);
    for (int i : indices) s.insert(i);
    return s;
}

ContractSet ContractSet::of_labels(const UniversePtr& universe,
                                   const std::vector<std::string>& labels) {
    ContractSet s(universe);
    for (const auto& label : labels) s.insert(universe->require_index(label));
    return s;
}

void ContractSet::check_index(int index) const {
    if (index < 0 || index >= universe_->size()) {
        throw ValidationError("contract index " + std::to_string(index) +
                              " out of range for universe of size " +
                              std::to_string(universe_->size()));
    }
}

void ContractSet::check_same_universe(const ContractSet& other) const {
    if (universe_ != other.universe_) {
        throw UniverseMismatch("operation mixes sets from different universes");
    }
}

bool ContractSet::contains(int index) const {
    check_index(index);
    return (words_[static_cast<std::size_t>(index / kWordBits)] >>
            (index % kWordBits)) & 1u;
}

void ContractSet::insert(int index) {
    check_index(index);
    words_[static_cast<std::size_t>(index / kWordBits)] |=
        std::uint64_t{1} << (index % kWordBits);
}

void ContractSet::erase(int index) {
    check_index(index);
    words_[static_cast<std::size_t>(index / kWordBits)] &=
        ~(std::uint64_t{1} << (index % kWordBits));
}

int ContractSet::count() const {
    int total = 0;
    for (auto w : words_) total += std::popcount(w);
    return total;
}

bool ContractSet::is_empty() const {
    for (auto w : words_) {
        if (w != 0) return false;
    }
    return true;
}

std::vector<int> ContractSet::members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (int i = 0; i < universe_->size(); ++i) {
        if ((words_[static_cast<std::size_t>(i / kWordBits)] >> (i % kWordBits)) & 1u) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::string> ContractSet::member_labels() const {
    std::vector<std::string> out;
    for (int i : members()) out.push_back(universe_->label(i));
    return out;
}

bool ContractSet::operator==(const ContractSet& other) const {
    check_same_universe(other);
    return words_ == other.words_;
}

bool ContractSet::is_subset_of(const ContractSet& other) const {
    check_same_universe(other);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        if (words_[w] & ~other.words_[w]) return false;
    }
    return true;
}

ContractSet ContractSet::set_union(const ContractSet& other) const {
    check_same_universe(other);
    ContractSet out(universe_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        out.words_[w] = words_[w] | other.words_[w];
    }
    return out;
}

ContractSet ContractSet::set_intersection(const ContractSet& other) const {
    check_same_universe(other);
    ContractSet out(universe_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        out.words_[w] = words_[w] & other.words_[w];
    }
    return out;
}

ContractSet ContractSet::set_difference(const ContractSet& other) const {
    check_same_universe(other);
    ContractSet out(universe_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        out.words_[w] = words_[w] & ~other.words_[w];
    }
    return out;
}

ContractSet ContractSet::complement() const {
    return full(universe_).set_difference(*this);
}

std::uint32_t ContractSet::to_mask() const {
    if (universe_->size() > 32) {
        throw CapExceeded("bitmask view limited to universes of at most 32 contracts");
    }
    return words_.empty() ? 0u : static_cast<std::uint32_t>(words_[0]);
}

ContractSet ContractSet::from_mask(const UniversePtr& universe, std::uint32_t mask) {
    if (universe->size() > 32) {
        throw CapExceeded("bitmask view limited to universes of at most 32 contracts");
    }
    ContractSet s(universe);
    if (!s.words_.empty()) s.words_[0] = mask;
    if (universe->size() < 32 && (mask >> universe->size()) != 0) {
        throw ValidationError("mask has bits outside the universe");
    }
    return s;
}

std::string to_string(const ContractSet& set) {
    std::string out = "{";
    bool first = true;
    for (int i : set.members()) {
        if (!first) out += ", ";
        out += set.universe()->label(i);
        first = false;
    }
    out += "}";
    return out;
}

ChoiceFunction::ChoiceFunction(UniversePtr universe, Evaluator evaluator, std::string name)
    : universe_(std::move(universe)),
      evaluator_(std::move(evaluator)),
      name_(std::move(name)) {
    if (!universe_) throw ValidationError("choice map requires a universe");
    if (!evaluator_) throw ValidationError("choice map requires an evaluator");
}

ContractSet ChoiceFunction::operator()(const ContractSet& offered) const {
    if (offered.universe() != universe_) {
        throw UniverseMismatch("choice map evaluated on a set from another universe");
    }
    ContractSet chosen = evaluator_(offered);
    if (chosen.universe() != universe_) {
        throw UniverseMismatch("choice map evaluator produced a set from another universe");
    }
    if (!chosen.is_subset_of(offered)) {
        const std::string who = name_.empty() ? "choice map" : "choice map " + name_;
        throw InclusionViolation(who + " chose contracts it was not offered: C" +
                                 to_string(offered) + " = " + to_string(chosen));
    }
    return chosen;
}

ContractSet rejection(const ChoiceFunction& choice, const ContractSet& offered) {
    return offered.set_difference(choice(offered));
}

}  // namespace stablematch

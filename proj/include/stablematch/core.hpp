#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stablematch/errors.hpp"

namespace stablematch {

class ContractUniverse;
using UniversePtr = std::shared_ptr<const ContractUniverse>;

// Finite ordered ground set of contracts. The declaration order is the
// canonical order used for iteration, witness search and rendering.
// Universes are immutable and shared; identity (the shared pointer) is what
// ties sets and maps together, so two universes with equal labels are still
// distinct.
class ContractUniverse {
public:
    static UniversePtr make(std::vector<std::string> labels);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int index) const;
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<int> index_of(std::string_view label) const;
    // Same as index_of but throws ValidationError naming the label.
    int require_index(std::string_view label) const;

private:
    explicit ContractUniverse(std::vector<std::string> labels);

    std::vector<std::string> labels_;
};

UniversePtr make_universe(std::vector<std::string> labels);

// Subset of one universe's contracts, stored as a bitset over the universe
// order. Value type: copies are independent. All binary operations require
// both operands to share the universe and throw UniverseMismatch otherwise.
class ContractSet {
public:
    explicit ContractSet(UniversePtr universe);

    static ContractSet empty(const UniversePtr& universe);
    static ContractSet full(const UniversePtr& universe);
    static ContractSet of(const UniversePtr& universe, const std::vector<int>& indices);
    static ContractSet of_labels(const UniversePtr& universe,
                                 const std::vector<std::string>& labels);

    const UniversePtr& universe() const { return universe_; }

    bool contains(int index) const;
    void insert(int index);
    void erase(int index);

    int count() const;
    bool is_empty() const;
    std::vector<int> members() const;
    std::vector<std::string> member_labels() const;

    bool operator==(const ContractSet& other) const;
    bool operator!=(const ContractSet& other) const { return !(*this == other); }

    bool is_subset_of(const ContractSet& other) const;

    ContractSet set_union(const ContractSet& other) const;
    ContractSet set_intersection(const ContractSet& other) const;
    ContractSet set_difference(const ContractSet& other) const;
    ContractSet complement() const;

    ContractSet operator|(const ContractSet& o) const { return set_union(o); }
    ContractSet operator&(const ContractSet& o) const { return set_intersection(o); }
    ContractSet operator-(const ContractSet& o) const { return set_difference(o); }

    // Bitset view for universes with at most 32 contracts; bit i is contract i.
    // Used by the exhaustive sweeps. Throws CapExceeded above 32.
    std::uint32_t to_mask() const;
    static ContractSet from_mask(const UniversePtr& universe, std::uint32_t mask);

private:
    void check_index(int index) const;
    void check_same_universe(const ContractSet& other) const;

    UniversePtr universe_;
    std::vector<std::uint64_t> words_;
};

// Renders "{a, c}" in universe order; used by diagnostics and tests.
std::string to_string(const ContractSet& set);

// Wrapper around an evaluator for a choice map C : 2^X -> 2^X. Every
// evaluation checks C(A) ⊆ A and throws InclusionViolation when the
// underlying evaluator breaks it; nothing downstream needs to re-check.
class ChoiceFunction {
public:
    using Evaluator = std::function<ContractSet(const ContractSet&)>;

    ChoiceFunction(UniversePtr universe, Evaluator evaluator, std::string name = "");

    const UniversePtr& universe() const { return universe_; }
    const std::string& name() const { return name_; }

    ContractSet operator()(const ContractSet& offered) const;

private:
    UniversePtr universe_;
    Evaluator evaluator_;
    std::string name_;
};

// R(A) = A \ C(A), the contracts offered but turned down.
ContractSet rejection(const ChoiceFunction& choice, const ContractSet& offered);

// Rejection map of a wrapped choice map, usable wherever a set-to-set map is
// expected. Monotonicity of this map is what the persistence classifier tests.
class RejectionView {
public:
    explicit RejectionView(ChoiceFunction base) : base_(std::move(base)) {}

    const UniversePtr& universe() const { return base_.universe(); }
    ContractSet operator()(const ContractSet& offered) const {
        return rejection(base_, offered);
    }

private:
    ChoiceFunction base_;
};

}  // namespace stablematch

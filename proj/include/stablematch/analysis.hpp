#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stablematch/core.hpp"

namespace stablematch {

// Verdict for one structural property of a choice map. Exhaustive budgets
// yield True or False; sampled budgets yield TrueSampled (no counterexample
// found) or False. NotEvaluated appears when an earlier failure (a non-choice
// map) makes the property meaningless.
enum class VerdictState { True, TrueSampled, False, NotEvaluated };

// Counterexample for a False verdict. Single-set properties (idempotence,
// the choice-map inclusion itself) fill only `a`; pair properties fill both.
struct Witness {
    ContractSet a;
    std::optional<ContractSet> b;
};

struct Verdict {
    VerdictState state = VerdictState::NotEvaluated;
    std::optional<Witness> witness;

    bool holds() const {
        return state == VerdictState::True || state == VerdictState::TrueSampled;
    }
    bool failed() const { return state == VerdictState::False; }
};

struct PropertyReport {
    Verdict is_choice_map;
    Verdict revealing;
    Verdict consistent;
    Verdict persistent;
    Verdict idempotent;
    Verdict rejection_monotone;
};

// Exhaustive classification enumerates all subset pairs and is capped at this
// universe size (4^12 pair checks); larger universes must use sampling.
inline constexpr int kClassifyExhaustiveCap = 12;

struct ClassifyBudget {
    enum class Kind { Exhaustive, Sampled };
    Kind kind = Kind::Exhaustive;
    int samples = 0;

    static ClassifyBudget exhaustive() { return {Kind::Exhaustive, 0}; }
    static ClassifyBudget sampled(int n) { return {Kind::Sampled, n}; }
};

// Classifies a choice map. Witness search runs in canonical subset order
// (ascending universe-order bitmask), so reports are deterministic; the
// sampled mode additionally sweeps all pairs inside random restrictions of
// at most 5 contracts. Properties are measured independently, never derived
// from one another.
PropertyReport classify(const ChoiceFunction& choice, const ClassifyBudget& budget,
                        std::uint64_t seed = 0x5eed5eedULL);

// Single-pair property predicates. These are what classify checks in bulk and
// what a reported witness must re-falsify on replay.
bool revealing_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                          const ContractSet& b);
bool consistent_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                           const ContractSet& b);
bool persistent_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                           const ContractSet& b);
bool rejection_monotone_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                                   const ContractSet& b);
bool idempotent_at(const ChoiceFunction& c, const ContractSet& a);

// Both sides keep S as it stands: C_W(S) = S = C_F(S).
bool is_individually_rational(const ChoiceFunction& worker, const ChoiceFunction& firm,
                              const ContractSet& s);

// First contract x outside S (in universe order) that both sides would act
// on: C_W(S ∪ {x}) != S and C_F(S ∪ {x}) != S. Empty when S is unblocked.
std::optional<int> find_blocker(const ChoiceFunction& worker, const ChoiceFunction& firm,
                                const ContractSet& s);

enum class StabilityMethod { Definitional, ConsistentWitness, RevealingFast };

// Whether stability methods verify their own preconditions. Check classifies
// the maps first (exhaustively, so only below the classify cap) and raises
// PreconditionFailed naming the violated property; Assume trusts the caller,
// for large universes or after an external classification.
enum class PreconditionPolicy { Check, Assume };

struct StabilityVerdict {
    bool stable = false;
    StabilityMethod method = StabilityMethod::Definitional;
    // Cover (S_W, S_F) when stable: S_W ∪ S_F = X and both quantified
    // acceptance conditions verify on it.
    std::optional<std::pair<ContractSet, ContractSet>> witnesses;
    // When unstable: the first blocking contract, if instability is caused by
    // one; IR violations and cover failures leave it empty.
    std::optional<int> blocker;
    bool ir_violation = false;
    std::string detail;
};

// Per-candidate caps: the definitional search runs a subset DP over X \ S.
inline constexpr int kDefinitionalFreeCap = 15;
inline constexpr int kConsistentFreeCap = 20;

StabilityVerdict is_stable(const ChoiceFunction& worker, const ChoiceFunction& firm,
                           const ContractSet& s, StabilityMethod method,
                           PreconditionPolicy policy = PreconditionPolicy::Check);

// Universe-size caps for the full 2^|X| sweep, per method.
inline constexpr int kEnumerateDefinitionalCap = 13;
inline constexpr int kEnumerateConsistentCap = 14;
inline constexpr int kEnumerateRevealingCap = 20;

// All stable sets in canonical subset order. The method precondition is
// checked once up front (under the Check policy), then each candidate is
// tested with the precondition assumed. cap_override replaces the method's
// universe-size cap.
std::vector<ContractSet> enumerate_stable(const ChoiceFunction& worker,
                                          const ChoiceFunction& firm,
                                          StabilityMethod method,
                                          PreconditionPolicy policy = PreconditionPolicy::Check,
                                          std::optional<int> cap_override = std::nullopt);

// Whether { C(A) : A ⊆ X } equals { A : C(A) = A }. Holds for idempotent
// maps; informative (and typically false) otherwise. Capped like classify.
bool range_equals_fixed_points(const ChoiceFunction& choice);

}  // namespace stablematch

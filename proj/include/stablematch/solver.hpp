#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stablematch/core.hpp"

namespace stablematch {

enum class Side { Worker, Firm };
enum class IterationStyle { Pair, Alternating };

// One column of the iteration record. `a` holds an X_n iterate (offers
// pending on the worker-proposing track), `b` a Y_n iterate. Pair style fills
// both per step; alternating style fills them one at a time, matching the
// column layout X_0, Y_1, X_2, ... of a worked iteration table.
struct TraceStep {
    int index = 0;
    std::optional<ContractSet> a;
    std::optional<ContractSet> b;
};

struct IterationTrace {
    IterationStyle style = IterationStyle::Pair;
    Side side = Side::Worker;
    std::vector<TraceStep> steps;
};

struct SolveOutcome {
    ContractSet stable_set;
    ContractSet witness_worker;  // S_W; final X-side iterate
    ContractSet witness_firm;    // S_F; final Y-side iterate
    IterationTrace trace;
    // Pair style: applications of the step operator, including the one that
    // detects the repeat. Alternating style: iterate columns computed after
    // the start column.
    int iterations = 0;
    Side side = Side::Worker;
    // Filled when SolveOptions::check_revealing was set: whether both input
    // maps passed the revealing classifier. A failed check does not stop the
    // solve; the fixed point is still returned, stability just isn't implied.
    bool precondition_checked = false;
    bool precondition_ok = false;
};

// One application of the fixed-point operator
//   (A, B) -> (X \ R_F(B), X \ R_W(A)).
std::pair<ContractSet, ContractSet> step(const ChoiceFunction& worker,
                                         const ChoiceFunction& firm,
                                         const ContractSet& a, const ContractSet& b);

struct SolveOptions {
    IterationStyle style = IterationStyle::Pair;
    bool check_revealing = false;
};

// Iterates the step operator to the extreme fixed point for the requested
// side: the worker-optimal run starts at (X, ∅), the firm-optimal run at
// (∅, X). Pair style stops when a step leaves (A, B) unchanged; alternating
// style recomputes one side at a time and stops at the first repeat of its
// leading column. Both return S = S_W ∩ S_F with C_W(S_W) = S = C_F(S_F).
//
// Monotone rejection maps make the iterate chains monotone and the run
// finishes within 2|X| + 2 column updates. A hard cap of 2|X| + 4 throws
// ConvergenceFailure; reaching it means an input map is not persistent (its
// rejection map is not monotone), which is possible for genuine choice maps.
SolveOutcome solve(const ChoiceFunction& worker, const ChoiceFunction& firm, Side side,
                   const SolveOptions& options = {});

inline constexpr int kFixedPointEnumerationCap = 10;

// All fixed points (A, B) of the step operator, in canonical order (A
// ascending, then B). Fixed points are exactly the pairs with A ∪ B = X and
// C_W(A) = A ∩ B = C_F(B); for revealing inputs they form a lattice whose
// greatest element (largest A, smallest B) is the worker-optimal solve result
// and whose least element is the firm-optimal one.
std::vector<std::pair<ContractSet, ContractSet>> enumerate_fixed_points(
    const ChoiceFunction& worker, const ChoiceFunction& firm);

}  // namespace stablematch

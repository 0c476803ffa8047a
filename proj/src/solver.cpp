#include "stablematch/solver.hpp"

#include "stablematch/analysis.hpp"

namespace stablematch {

namespace {

void check_pair(const ChoiceFunction& worker, const ChoiceFunction& firm) {
    if (worker.universe() != firm.universe()) {
        throw UniverseMismatch("worker and firm choice maps use different universes");
    }
}

}  // namespace

std::pair<ContractSet, ContractSet> step(const ChoiceFunction& worker,
                                         const ChoiceFunction& firm,
                                         const ContractSet& a, const ContractSet& b) {
    check_pair(worker, firm);
    return {rejection(firm, b).complement(), rejection(worker, a).complement()};
}

namespace {

SolveOutcome solve_pair_style(const ChoiceFunction& worker, const ChoiceFunction& firm,
                              Side side, int cap) {
    const UniversePtr& u = worker.universe();
    ContractSet a = side == Side::Worker ? ContractSet::full(u) : ContractSet::empty(u);
    ContractSet b = side == Side::Worker ? ContractSet::empty(u) : ContractSet::full(u);

    SolveOutcome out{ContractSet::empty(u), a, b,
                     IterationTrace{IterationStyle::Pair, side, {}}, 0, side};
    out.trace.steps.push_back({0, a, b});

    for (int k = 1; k <= cap; ++k) {
        auto [a2, b2] = step(worker, firm, a, b);
        out.iterations = k;
        if (a2 == a && b2 == b) {
            out.witness_worker = a;
            out.witness_firm = b;
            out.stable_set = a & b;
            return out;
        }
        out.trace.steps.push_back({k, a2, b2});
        a = std::move(a2);
        b = std::move(b2);
    }
    throw ConvergenceFailure(
        "pair iteration exceeded its bound; an input map's rejection map is not monotone");
}

SolveOutcome solve_alternating_style(const ChoiceFunction& worker,
                                     const ChoiceFunction& firm, Side side, int cap) {
    const UniversePtr& u = worker.universe();
    const ChoiceFunction& leading = side == Side::Worker ? worker : firm;
    const ChoiceFunction& trailing = side == Side::Worker ? firm : worker;

    // Worker side computes X_0, Y_1, X_2, ... and stops at the first
    // X_{n-1} = X_{n+1}; the firm side runs the mirrored column sequence
    // Y_0, X_1, Y_2, ... The roles below are relative to the leading side.
    ContractSet lead = ContractSet::full(u);
    ContractSet lead_choice = leading(lead);

    SolveOutcome out{ContractSet::empty(u), lead, lead,
                     IterationTrace{IterationStyle::Alternating, side, {}}, 0, side};
    auto push = [&](int index, ContractSet value, bool lead_column) {
        TraceStep ts;
        ts.index = index;
        const bool is_a_column = (side == Side::Worker) == lead_column;
        if (is_a_column) {
            ts.a = std::move(value);
        } else {
            ts.b = std::move(value);
        }
        out.trace.steps.push_back(std::move(ts));
    };
    push(0, lead, true);

    for (int n = 1; n + 1 <= cap; n += 2) {
        ContractSet mid = lead.complement() | lead_choice;
        push(n, mid, false);
        ContractSet next = mid.complement() | trailing(mid);
        push(n + 1, next, true);
        out.iterations = n + 1;
        if (next == lead) {
            out.stable_set = lead_choice;
            if (side == Side::Worker) {
                out.witness_worker = std::move(lead);
                out.witness_firm = std::move(mid);
            } else {
                out.witness_worker = std::move(mid);
                out.witness_firm = std::move(lead);
            }
            return out;
        }
        lead = std::move(next);
        lead_choice = leading(lead);
    }
    throw ConvergenceFailure(
        "alternating iteration exceeded its bound; an input map's rejection map is not "
        "monotone");
}

}  // namespace

SolveOutcome solve(const ChoiceFunction& worker, const ChoiceFunction& firm, Side side,
                   const SolveOptions& options) {
    check_pair(worker, firm);
    const int n = worker.universe()->size();
    const int cap = 2 * n + 4;

    SolveOutcome out = options.style == IterationStyle::Pair
                           ? solve_pair_style(worker, firm, side, cap)
                           : solve_alternating_style(worker, firm, side, cap);

    if (options.check_revealing) {
        const ClassifyBudget budget = n <= kClassifyExhaustiveCap
                                          ? ClassifyBudget::exhaustive()
                                          : ClassifyBudget::sampled(2000);
        out.precondition_checked = true;
        out.precondition_ok =
            classify(worker, budget).revealing.holds() &&
            classify(firm, budget).revealing.holds();
    }
    return out;
}

std::vector<std::pair<ContractSet, ContractSet>> enumerate_fixed_points(
    const ChoiceFunction& worker, const ChoiceFunction& firm) {
    check_pair(worker, firm);
    const UniversePtr& u = worker.universe();
    const int n = u->size();
    if (n > kFixedPointEnumerationCap) {
        throw CapExceeded("fixed-point enumeration is capped at " +
                          std::to_string(kFixedPointEnumerationCap) +
                          " contracts, universe has " + std::to_string(n));
    }

    const std::uint32_t count = std::uint32_t{1} << n;
    const std::uint32_t all = count - 1;
    std::vector<std::uint32_t> cw(count), cf(count);
    for (std::uint32_t m = 0; m < count; ++m) {
        ContractSet s = ContractSet::from_mask(u, m);
        cw[m] = worker(s).to_mask();
        cf[m] = firm(s).to_mask();
    }

    std::vector<std::pair<ContractSet, ContractSet>> fixed;
    for (std::uint32_t a = 0; a < count; ++a) {
        const std::uint32_t b_image = all & ~(a & ~cw[a]);
        for (std::uint32_t b = 0; b < count; ++b) {
            const std::uint32_t a_image = all & ~(b & ~cf[b]);
            if (a_image == a && b_image == b) {
                fixed.emplace_back(ContractSet::from_mask(u, a),
                                   ContractSet::from_mask(u, b));
            }
        }
    }
    return fixed;
}

}  // namespace stablematch

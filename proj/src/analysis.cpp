#include "stablematch/analysis.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace stablematch {

namespace {

Verdict pass(bool sampled) {
    return Verdict{sampled ? VerdictState::TrueSampled : VerdictState::True, std::nullopt};
}

Verdict fail(ContractSet a) {
    return Verdict{VerdictState::False, Witness{std::move(a), std::nullopt}};
}

Verdict fail(ContractSet a, ContractSet b) {
    return Verdict{VerdictState::False, Witness{std::move(a), std::move(b)}};
}

// ---- exhaustive classification over bitmask tables -------------------------

struct MaskTable {
    UniversePtr universe;
    int n = 0;
    std::uint32_t count = 0;                  // 2^n
    std::vector<std::uint32_t> choice;        // choice[mask] = C(mask)
};

// Evaluates C on every subset. Returns std::nullopt and fills `violation`
// when the evaluator breaks C(A) ⊆ A somewhere.
std::optional<MaskTable> build_mask_table(const ChoiceFunction& c,
                                          std::optional<ContractSet>& violation) {
    MaskTable t;
    t.universe = c.universe();
    t.n = t.universe->size();
    t.count = std::uint32_t{1} << t.n;
    t.choice.resize(t.count);
    for (std::uint32_t m = 0; m < t.count; ++m) {
        ContractSet a = ContractSet::from_mask(t.universe, m);
        try {
            t.choice[m] = c(a).to_mask();
        } catch (const InclusionViolation&) {
            violation = a;
            return std::nullopt;
        }
    }
    return t;
}

PropertyReport classify_exhaustive(const ChoiceFunction& c) {
    PropertyReport rep;
    std::optional<ContractSet> violation;
    auto table = build_mask_table(c, violation);
    if (!table) {
        rep.is_choice_map = fail(*violation);
        return rep;  // the other properties are meaningless; leave NotEvaluated
    }
    const MaskTable& t = *table;
    rep.is_choice_map = pass(false);

    auto set_of = [&](std::uint32_t m) { return ContractSet::from_mask(t.universe, m); };

    rep.idempotent = pass(false);
    for (std::uint32_t a = 0; a < t.count; ++a) {
        if (t.choice[t.choice[a]] != t.choice[a]) {
            rep.idempotent = fail(set_of(a));
            break;
        }
    }

    rep.revealing = pass(false);
    for (std::uint32_t a = 0; a < t.count && !rep.revealing.failed(); ++a) {
        const std::uint32_t ca = t.choice[a];
        for (std::uint32_t b = 0; b < t.count; ++b) {
            if ((ca & ~b) == 0 && (a & t.choice[b] & ~ca) != 0) {
                rep.revealing = fail(set_of(a), set_of(b));
                break;
            }
        }
    }

    // B ranges over C(A) ∪ (subset of A \ C(A)), i.e. exactly C(A) ⊆ B ⊆ A.
    rep.consistent = pass(false);
    for (std::uint32_t a = 0; a < t.count && !rep.consistent.failed(); ++a) {
        const std::uint32_t ca = t.choice[a];
        const std::uint32_t free = a & ~ca;
        for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
            const std::uint32_t b = ca | sub;
            if (t.choice[b] != ca) {
                rep.consistent = fail(set_of(a), set_of(b));
                break;
            }
            if (sub == 0) break;
        }
    }

    rep.persistent = pass(false);
    for (std::uint32_t b = 0; b < t.count && !rep.persistent.failed(); ++b) {
        const std::uint32_t cb = t.choice[b];
        for (std::uint32_t a = b;; a = (a - 1) & b) {
            if ((a & cb & ~t.choice[a]) != 0) {
                rep.persistent = fail(set_of(a), set_of(b));
                break;
            }
            if (a == 0) break;
        }
    }

    rep.rejection_monotone = pass(false);
    for (std::uint32_t b = 0; b < t.count && !rep.rejection_monotone.failed(); ++b) {
        const std::uint32_t rb = b & ~t.choice[b];
        for (std::uint32_t a = b;; a = (a - 1) & b) {
            const std::uint32_t ra = a & ~t.choice[a];
            if ((ra & ~rb) != 0) {
                rep.rejection_monotone = fail(set_of(a), set_of(b));
                break;
            }
            if (a == 0) break;
        }
    }

    return rep;
}

// ---- sampled classification (any universe size) ----------------------------

struct ViolationCaught {
    ContractSet offered;
};

ContractSet random_subset(std::mt19937_64& rng, const UniversePtr& u) {
    ContractSet s = ContractSet::empty(u);
    for (int i = 0; i < u->size(); ++i) {
        if (rng() & 1u) s.insert(i);
    }
    return s;
}

ContractSet random_subset_of(std::mt19937_64& rng, const ContractSet& base) {
    ContractSet s = ContractSet::empty(base.universe());
    for (int i : base.members()) {
        if (rng() & 1u) s.insert(i);
    }
    return s;
}

PropertyReport classify_sampled(const ChoiceFunction& c, int samples, std::uint64_t seed) {
    PropertyReport rep;
    const UniversePtr& u = c.universe();
    const int n = u->size();
    std::mt19937_64 rng(seed);

    auto eval = [&](const ContractSet& a) -> ContractSet {
        try {
            return c(a);
        } catch (const InclusionViolation&) {
            throw ViolationCaught{a};
        }
    };

    std::optional<Witness> w_rev, w_con, w_per, w_mon, w_ide;
    try {
        for (int trial = 0; trial < samples; ++trial) {
            // revealing: premise C(A) ⊆ B
            if (!w_rev) {
                ContractSet a = random_subset(rng, u);
                ContractSet ca = eval(a);
                ContractSet b = ca | random_subset_of(rng, ca.complement());
                if (!revealing_pair_holds(c, a, b)) w_rev = Witness{a, b};
            }
            // consistent: premise C(A) ⊆ B ⊆ A
            if (!w_con) {
                ContractSet a = random_subset(rng, u);
                ContractSet ca = eval(a);
                ContractSet b = ca | random_subset_of(rng, a - ca);
                if (eval(b) != ca) w_con = Witness{a, b};
            }
            // persistent and rejection monotonicity: premise A ⊆ B
            ContractSet b = random_subset(rng, u);
            ContractSet a = random_subset_of(rng, b);
            if (!w_per && !persistent_pair_holds(c, a, b)) w_per = Witness{a, b};
            if (!w_mon && !rejection_monotone_pair_holds(c, a, b)) w_mon = Witness{a, b};
            if (!w_ide) {
                ContractSet x = random_subset(rng, u);
                if (!idempotent_at(c, x)) w_ide = Witness{x, std::nullopt};
            }
        }

        // Exhaustive pair sweeps inside small random restrictions; these catch
        // violations that independent uniform draws practically never hit.
        const int restrictions = std::max(1, samples / 64);
        std::vector<int> all_indices(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) all_indices[static_cast<std::size_t>(i)] = i;
        for (int rtrial = 0; rtrial < restrictions; ++rtrial) {
            const int r = std::min(n, 5);
            std::vector<int> picked;
            std::sample(all_indices.begin(), all_indices.end(), std::back_inserter(picked),
                        r, rng);
            const std::uint32_t count = std::uint32_t{1} << r;
            std::vector<ContractSet> sets;
            std::vector<ContractSet> chosen;
            sets.reserve(count);
            chosen.reserve(count);
            for (std::uint32_t m = 0; m < count; ++m) {
                ContractSet s = ContractSet::empty(u);
                for (int j = 0; j < r; ++j) {
                    if (m & (1u << j)) s.insert(picked[static_cast<std::size_t>(j)]);
                }
                sets.push_back(s);
                chosen.push_back(eval(s));
            }
            for (std::uint32_t am = 0; am < count; ++am) {
                if (!w_ide && eval(chosen[am]) != chosen[am]) {
                    w_ide = Witness{sets[am], std::nullopt};
                }
                for (std::uint32_t bm = 0; bm < count; ++bm) {
                    const ContractSet& a = sets[am];
                    const ContractSet& b = sets[bm];
                    const ContractSet& ca = chosen[am];
                    const ContractSet& cb = chosen[bm];
                    if (!w_rev && ca.is_subset_of(b) && !((a & cb) - ca).is_empty()) {
                        w_rev = Witness{a, b};
                    }
                    if (!w_con && ca.is_subset_of(b) && b.is_subset_of(a) && cb != ca) {
                        w_con = Witness{a, b};
                    }
                    if (a.is_subset_of(b)) {
                        if (!w_per && !((a & cb) - ca).is_empty()) w_per = Witness{a, b};
                        if (!w_mon && !((a - ca) - (b - cb)).is_empty()) w_mon = Witness{a, b};
                    }
                }
            }
        }
    } catch (const ViolationCaught& v) {
        rep.is_choice_map = fail(v.offered);
        return rep;
    }

    rep.is_choice_map = pass(true);
    auto finish = [](std::optional<Witness>& w) {
        return w ? Verdict{VerdictState::False, std::move(w)} : pass(true);
    };
    rep.revealing = finish(w_rev);
    rep.consistent = finish(w_con);
    rep.persistent = finish(w_per);
    rep.rejection_monotone = finish(w_mon);
    rep.idempotent = finish(w_ide);
    return rep;
}

}  // namespace

PropertyReport classify(const ChoiceFunction& choice, const ClassifyBudget& budget,
                        std::uint64_t seed) {
    if (budget.kind == ClassifyBudget::Kind::Exhaustive) {
        if (choice.universe()->size() > kClassifyExhaustiveCap) {
            throw CapExceeded("exhaustive classification is capped at " +
                              std::to_string(kClassifyExhaustiveCap) +
                              " contracts; use a sampled budget");
        }
        return classify_exhaustive(choice);
    }
    if (budget.samples < 0) throw ValidationError("sample budget must be >= 0");
    return classify_sampled(choice, budget.samples, seed);
}

bool revealing_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                          const ContractSet& b) {
    ContractSet ca = c(a);
    if (!ca.is_subset_of(b)) return true;  // premise fails, nothing required
    return ((a & c(b)) - ca).is_empty();
}

bool consistent_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                           const ContractSet& b) {
    ContractSet ca = c(a);
    if (!(ca.is_subset_of(b) && b.is_subset_of(a))) return true;
    return c(b) == ca;
}

bool persistent_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                           const ContractSet& b) {
    if (!a.is_subset_of(b)) return true;
    return ((a & c(b)) - c(a)).is_empty();
}

bool rejection_monotone_pair_holds(const ChoiceFunction& c, const ContractSet& a,
                                   const ContractSet& b) {
    if (!a.is_subset_of(b)) return true;
    return ((a - c(a)) - (b - c(b))).is_empty();
}

bool idempotent_at(const ChoiceFunction& c, const ContractSet& a) {
    ContractSet ca = c(a);
    return c(ca) == ca;
}

namespace {

void check_market(const ChoiceFunction& worker, const ChoiceFunction& firm,
                  const ContractSet* s) {
    if (worker.universe() != firm.universe()) {
        throw UniverseMismatch("worker and firm choice maps use different universes");
    }
    if (s && s->universe() != worker.universe()) {
        throw UniverseMismatch("candidate set is from another universe");
    }
}

}  // namespace

bool is_individually_rational(const ChoiceFunction& worker, const ChoiceFunction& firm,
                              const ContractSet& s) {
    check_market(worker, firm, &s);
    return worker(s) == s && firm(s) == s;
}

std::optional<int> find_blocker(const ChoiceFunction& worker, const ChoiceFunction& firm,
                                const ContractSet& s) {
    check_market(worker, firm, &s);
    for (int x : s.complement().members()) {
        ContractSet with = s;
        with.insert(x);
        if (worker(with) != s && firm(with) != s) return x;
    }
    return std::nullopt;
}

namespace {

std::string witness_text(const Witness& w) {
    std::string out = "A=" + to_string(w.a);
    if (w.b) out += ", B=" + to_string(*w.b);
    return out;
}

void require_map_property(const ChoiceFunction& c, const std::string& role,
                          bool need_revealing) {
    const char* prop = need_revealing ? "revealing" : "consistent";
    if (c.universe()->size() > kClassifyExhaustiveCap) {
        throw PreconditionFailed(
            std::string("cannot verify that the ") + role + " choice map is " + prop +
            ": universe exceeds the exhaustive classification cap; classify it "
            "separately and use PreconditionPolicy::Assume");
    }
    PropertyReport rep = classify(c, ClassifyBudget::exhaustive());
    const Verdict& v = need_revealing ? rep.revealing : rep.consistent;
    if (!v.holds()) {
        std::string msg = role + " choice map is not " + prop;
        if (!rep.is_choice_map.holds() && rep.is_choice_map.witness) {
            msg = role + " map is not a choice map, witness " +
                  witness_text(*rep.is_choice_map.witness);
        } else if (v.witness) {
            msg += ", witness " + witness_text(*v.witness);
        }
        throw PreconditionFailed(msg);
    }
}

void check_method_preconditions(const ChoiceFunction& worker, const ChoiceFunction& firm,
                                StabilityMethod method, PreconditionPolicy policy) {
    if (policy == PreconditionPolicy::Assume) return;
    switch (method) {
        case StabilityMethod::Definitional:
            return;  // sound for arbitrary choice maps
        case StabilityMethod::ConsistentWitness:
            require_map_property(worker, "worker", false);
            require_map_property(firm, "firm", false);
            return;
        case StabilityMethod::RevealingFast:
            require_map_property(worker, "worker", true);
            require_map_property(firm, "firm", true);
            return;
    }
}

// Set S plus the elements of `members` selected by the compressed mask m.
ContractSet expand(const ContractSet& s, const std::vector<int>& members, std::uint32_t m) {
    ContractSet out = s;
    for (std::size_t j = 0; j < members.size(); ++j) {
        if (m & (std::uint32_t{1} << j)) out.insert(members[j]);
    }
    return out;
}

StabilityVerdict definitional_check(const ChoiceFunction& worker, const ChoiceFunction& firm,
                                    const ContractSet& s) {
    StabilityVerdict verdict;
    verdict.method = StabilityMethod::Definitional;

    // A witness cover must contain S on both sides, so A := S is always inside
    // the quantified range: a side rejecting part of S rules everything out.
    ContractSet cw = worker(s);
    if (cw != s) {
        verdict.ir_violation = true;
        verdict.detail = "worker side does not keep S: C_W(S) = " + to_string(cw);
        return verdict;
    }
    ContractSet cf = firm(s);
    if (cf != s) {
        verdict.ir_violation = true;
        verdict.detail = "firm side does not keep S: C_F(S) = " + to_string(cf);
        return verdict;
    }

    const std::vector<int> outside = s.complement().members();
    const int u = static_cast<int>(outside.size());
    if (u > kDefinitionalFreeCap) {
        throw CapExceeded("definitional stability check is capped at " +
                          std::to_string(kDefinitionalFreeCap) +
                          " contracts outside S, got " + std::to_string(u));
    }

    // Single-contract screen: x can join S_W only if C_W(S ∪ {x}) = S (take
    // A = S ∪ {x}), and likewise for S_F. An x admissible on neither side is
    // a blocker and no cover can absorb it.
    std::vector<char> w_ok_single(static_cast<std::size_t>(u));
    std::vector<char> f_ok_single(static_cast<std::size_t>(u));
    for (int j = 0; j < u; ++j) {
        ContractSet with = s;
        with.insert(outside[static_cast<std::size_t>(j)]);
        w_ok_single[static_cast<std::size_t>(j)] = worker(with) == s;
        f_ok_single[static_cast<std::size_t>(j)] = firm(with) == s;
        if (!w_ok_single[static_cast<std::size_t>(j)] &&
            !f_ok_single[static_cast<std::size_t>(j)]) {
            verdict.blocker = outside[static_cast<std::size_t>(j)];
            verdict.detail = "blocked by " +
                             worker.universe()->label(*verdict.blocker) +
                             ": both sides would act on it";
            return verdict;
        }
    }

    // ok[m]: the quantified condition holds at the single set S ∪ m.
    // valid[m]: it holds on every set between S and S ∪ m, i.e. S ∪ m is a
    // usable witness side. Because shrinking a witness only shrinks the
    // quantified range, the minimal partner S_F = S ∪ (complement of m in
    // X \ S) is fully general, so scanning m covers every cover.
    const std::uint32_t count = std::uint32_t{1} << u;
    std::vector<char> valid_w(count), valid_f(count);
    for (std::uint32_t m = 0; m < count; ++m) {
        ContractSet candidate = expand(s, outside, m);
        bool vw = worker(candidate) == s;
        bool vf = firm(candidate) == s;
        for (int j = 0; j < u && (vw || vf); ++j) {
            if (m & (std::uint32_t{1} << j)) {
                const std::uint32_t parent = m & ~(std::uint32_t{1} << j);
                vw = vw && valid_w[parent];
                vf = vf && valid_f[parent];
            }
        }
        valid_w[m] = vw;
        valid_f[m] = vf;
    }

    const std::uint32_t all = count - 1;
    for (std::uint32_t m = 0; m < count; ++m) {
        if (valid_w[m] && valid_f[all & ~m]) {
            verdict.stable = true;
            verdict.witnesses = {expand(s, outside, m), expand(s, outside, all & ~m)};
            return verdict;
        }
    }
    verdict.detail = "no cover (S_W, S_F) satisfies the acceptance conditions";
    return verdict;
}

StabilityVerdict consistent_witness_check(const ChoiceFunction& worker,
                                          const ChoiceFunction& firm,
                                          const ContractSet& s) {
    StabilityVerdict verdict;
    verdict.method = StabilityMethod::ConsistentWitness;

    ContractSet cw = worker(s);
    if (cw != s) {
        verdict.ir_violation = true;
        verdict.detail = "worker side does not keep S: C_W(S) = " + to_string(cw);
        return verdict;
    }
    ContractSet cf = firm(s);
    if (cf != s) {
        verdict.ir_violation = true;
        verdict.detail = "firm side does not keep S: C_F(S) = " + to_string(cf);
        return verdict;
    }

    const std::vector<int> outside = s.complement().members();
    const int u = static_cast<int>(outside.size());
    if (u > kConsistentFreeCap) {
        throw CapExceeded("consistent-witness stability check is capped at " +
                          std::to_string(kConsistentFreeCap) +
                          " contracts outside S, got " + std::to_string(u));
    }

    // With both maps consistent, a cover may be normalized to S_W ∩ S_F = S,
    // so it is enough to split X \ S between the two sides and test the two
    // endpoint conditions C_W(S_W) = S = C_F(S_F).
    const std::uint32_t count = std::uint32_t{1} << u;
    const std::uint32_t all = count - 1;
    for (std::uint32_t m = 0; m < count; ++m) {
        ContractSet sw = expand(s, outside, m);
        if (worker(sw) != s) continue;
        ContractSet sf = expand(s, outside, all & ~m);
        if (firm(sf) != s) continue;
        verdict.stable = true;
        verdict.witnesses = {std::move(sw), std::move(sf)};
        return verdict;
    }
    verdict.detail = "no split cover (S_W, S_F) has C_W(S_W) = S = C_F(S_F)";
    return verdict;
}

StabilityVerdict revealing_fast_check(const ChoiceFunction& worker,
                                      const ChoiceFunction& firm, const ContractSet& s) {
    StabilityVerdict verdict;
    verdict.method = StabilityMethod::RevealingFast;

    ContractSet cw = worker(s);
    if (cw != s) {
        verdict.ir_violation = true;
        verdict.detail = "worker side does not keep S: C_W(S) = " + to_string(cw);
        return verdict;
    }
    ContractSet cf = firm(s);
    if (cf != s) {
        verdict.ir_violation = true;
        verdict.detail = "firm side does not keep S: C_F(S) = " + to_string(cf);
        return verdict;
    }

    // For revealing maps, individual rationality plus the absence of a
    // single-contract blocker is equivalent to stability, and the admissible
    // contracts per side assemble the witness cover directly.
    ContractSet sw = s;
    ContractSet sf = s;
    for (int x : s.complement().members()) {
        ContractSet with = s;
        with.insert(x);
        const bool w_keeps = worker(with) == s;
        const bool f_keeps = firm(with) == s;
        if (!w_keeps && !f_keeps) {
            verdict.blocker = x;
            verdict.detail = "blocked by " + worker.universe()->label(x) +
                             ": both sides would act on it";
            return verdict;
        }
        if (w_keeps) sw.insert(x);
        if (f_keeps) sf.insert(x);
    }
    verdict.stable = true;
    verdict.witnesses = {std::move(sw), std::move(sf)};
    return verdict;
}

}  // namespace

StabilityVerdict is_stable(const ChoiceFunction& worker, const ChoiceFunction& firm,
                           const ContractSet& s, StabilityMethod method,
                           PreconditionPolicy policy) {
    check_market(worker, firm, &s);
    check_method_preconditions(worker, firm, method, policy);
    switch (method) {
        case StabilityMethod::Definitional:
            return definitional_check(worker, firm, s);
        case StabilityMethod::ConsistentWitness:
            return consistent_witness_check(worker, firm, s);
        case StabilityMethod::RevealingFast:
            return revealing_fast_check(worker, firm, s);
    }
    throw Error("unreachable stability method");
}

std::vector<ContractSet> enumerate_stable(const ChoiceFunction& worker,
                                          const ChoiceFunction& firm,
                                          StabilityMethod method,
                                          PreconditionPolicy policy,
                                          std::optional<int> cap_override) {
    check_market(worker, firm, nullptr);
    int cap = 0;
    switch (method) {
        case StabilityMethod::Definitional: cap = kEnumerateDefinitionalCap; break;
        case StabilityMethod::ConsistentWitness: cap = kEnumerateConsistentCap; break;
        case StabilityMethod::RevealingFast: cap = kEnumerateRevealingCap; break;
    }
    if (cap_override) cap = *cap_override;
    const UniversePtr& u = worker.universe();
    const int n = u->size();
    if (n > cap) {
        throw CapExceeded("stable-set enumeration is capped at " + std::to_string(cap) +
                          " contracts for this method, universe has " + std::to_string(n));
    }
    if (n > 32) {
        throw CapExceeded("stable-set enumeration is limited to 32 contracts");
    }

    check_method_preconditions(worker, firm, method, policy);

    std::vector<ContractSet> stable;
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < count; ++m) {
        ContractSet s = ContractSet::from_mask(u, static_cast<std::uint32_t>(m));
        if (is_stable(worker, firm, s, method, PreconditionPolicy::Assume).stable) {
            stable.push_back(std::move(s));
        }
    }
    return stable;
}

bool range_equals_fixed_points(const ChoiceFunction& choice) {
    const int n = choice.universe()->size();
    if (n > kClassifyExhaustiveCap) {
        throw CapExceeded("range/fixed-point comparison is capped at " +
                          std::to_string(kClassifyExhaustiveCap) + " contracts");
    }
    std::optional<ContractSet> violation;
    auto table = build_mask_table(choice, violation);
    if (!table) {
        throw InclusionViolation("map is not a choice map on " + to_string(*violation));
    }
    std::unordered_set<std::uint32_t> range;
    std::unordered_set<std::uint32_t> fixed;
    for (std::uint32_t m = 0; m < table->count; ++m) {
        range.insert(table->choice[m]);
        if (table->choice[m] == m) fixed.insert(m);
    }
    return range == fixed;
}

}  // namespace stablematch

#include <doctest.h>

#include <algorithm>

#include "stablematch/analysis.hpp"
#include "stablematch/schedule.hpp"
#include "stablematch/solver.hpp"

using namespace stablematch;

namespace {

ScheduleProblem marriage_week() {
    ScheduleProblem p;
    p.workers = {"w1", "w2"};
    p.firms = {"f1", "f2"};
    p.days = {"d1"};
    p.worker_specs = {
        {"w1", {{"f1", "d1"}, {"f2", "d1"}}, 1, {}, {}},
        {"w2", {{"f2", "d1"}, {"f1", "d1"}}, 1, {}, {}},
    };
    p.firm_specs = {
        {"f1", {{"w2", "d1"}, {"w1", "d1"}}, 1, {}, {}},
        {"f2", {{"w1", "d1"}, {"w2", "d1"}}, 1, {}, {}},
    };
    return p;
}

HoursEncoding two_worker_hours() {
    HoursEncoding enc;
    enc.workers = {
        {"w1", {"f1", "f2"}, {{"f1", 2}, {"f2", 1}}},
        {"w2", {"f1"}, {{"f1", 3}}},
    };
    enc.firms = {
        {"f1", {"w2", "w1"}, {{"w2", 2}, {"w1", 3}}},
        {"f2", {}, {}},  // ranks nobody, so (w1, f2) is not mutual
    };
    return enc;
}

}  // namespace

TEST_SUITE("schedule") {

TEST_CASE("universe is the declaration-ordered product unless restricted") {
    ScheduleProblem p;
    p.workers = {"w1", "w2"};
    p.firms = {"f1"};
    p.days = {"d1", "d2"};
    auto u = build_universe(p);
    REQUIRE(u->size() == 4);
    CHECK(u->label(0) == "(w1,f1,d1)");
    CHECK(u->label(1) == "(w1,f1,d2)");
    CHECK(u->label(2) == "(w2,f1,d1)");
    CHECK(u->label(3) == "(w2,f1,d2)");

    p.contracts = std::vector<std::tuple<std::string, std::string, std::string>>{
        {"w2", "f1", "d2"}, {"w1", "f1", "d1"}};
    auto restricted = build_universe(p);
    REQUIRE(restricted->size() == 2);
    CHECK(restricted->label(0) == "(w2,f1,d2)");
    CHECK(restricted->label(1) == "(w1,f1,d1)");
}

TEST_CASE("compile_worker translates caps into quota groups over Y") {
    ScheduleProblem p;
    p.workers = {"w1"};
    p.firms = {"f1", "f2"};
    p.days = {"d1", "d2"};
    WorkerSpec ws{"w1", {{"f1", "d1"}, {"f1", "d2"}, {"f2", "d1"}}, std::nullopt,
                  {{"d1", 1}}, {}};
    p.worker_specs = {ws};
    auto u = build_universe(p);
    // universe order: (w1,f1,d1) (w1,f1,d2) (w1,f2,d1) (w1,f2,d2)
    auto spec = compile_worker(p, u, ws);
    CHECK(spec.preference == std::vector<int>{0, 1, 2});
    CHECK(spec.global_quota == 3);  // defaults to |Y|
    REQUIRE(spec.groups.size() == 1);
    CHECK(spec.groups[0].members == std::vector<int>{0, 2});  // the two d1 contracts
    CHECK(spec.groups[0].quota == 1);

    auto c = build_quota_choice(spec);
    CHECK(c(ContractSet::full(u)) == ContractSet::of(u, {0, 1}));
    CHECK(c(ContractSet::of(u, {1, 2, 3})) == ContractSet::of(u, {1, 2}));
}

TEST_CASE("day caps on one side, counterparty caps on the other") {
    ScheduleProblem p;
    p.workers = {"w1", "w2"};
    p.firms = {"f1"};
    p.days = {"d1", "d2", "d3"};
    WorkerSpec ws{"w1",
                  {{"f1", "d1"}, {"f1", "d2"}, {"f1", "d3"}},
                  2,
                  {{"d1", 1}, {"d2", 1}, {"d3", 1}},
                  {}};
    FirmSpec fs{"f1",
                {{"w1", "d1"}, {"w2", "d1"}, {"w1", "d2"}, {"w2", "d2"}},
                3,
                {},
                {{"w1", 1}, {"w2", 1}}};
    p.worker_specs = {ws};
    p.firm_specs = {fs};
    auto u = build_universe(p);

    auto wc = build_quota_choice(compile_worker(p, u, ws));
    auto fc = build_quota_choice(compile_firm(p, u, fs));
    const auto day_of = [&](int idx) { return std::get<2>(universe_triples(p)[idx]); };
    const auto worker_of = [&](int idx) { return std::get<0>(universe_triples(p)[idx]); };
    for (std::uint32_t m = 0; m < 64; ++m) {
        auto offered = ContractSet::from_mask(u, m);
        auto w_chosen = wc(offered).members();
        CHECK(w_chosen.size() <= 2);
        for (std::size_t i = 0; i < w_chosen.size(); ++i) {
            for (std::size_t j = i + 1; j < w_chosen.size(); ++j) {
                CHECK(day_of(w_chosen[i]) != day_of(w_chosen[j]));
            }
        }
        auto f_chosen = fc(offered).members();
        CHECK(f_chosen.size() <= 3);
        for (std::size_t i = 0; i < f_chosen.size(); ++i) {
            for (std::size_t j = i + 1; j < f_chosen.size(); ++j) {
                CHECK(worker_of(f_chosen[i]) != worker_of(f_chosen[j]));
            }
        }
    }
}

TEST_CASE("binding caps of both kinds on one agent are rejected") {
    ScheduleProblem p;
    p.workers = {"w1"};
    p.firms = {"f1", "f2"};
    p.days = {"d1", "d2"};
    WorkerSpec both{"w1",
                    {{"f1", "d1"}, {"f1", "d2"}, {"f2", "d1"}},
                    3,
                    {{"d1", 1}},
                    {{"f1", 1}}};
    p.worker_specs = {both};
    auto u = build_universe(p);
    CHECK_THROWS_WITH_AS((void)build_quota_choice(compile_worker(p, u, both)),
                         doctest::Contains("cannot both bind"), ValidationError);

    // with a global quota of 1 neither cap can bind, so the same declaration
    // becomes legal
    WorkerSpec harmless = both;
    harmless.quota = 1;
    p.worker_specs = {harmless};
    auto c = build_quota_choice(compile_worker(p, u, harmless));
    CHECK(c(ContractSet::full(u)) == ContractSet::of(u, {0}));
}

TEST_CASE("problem validation catches malformed declarations") {
    ScheduleProblem p;
    p.workers = {"w1", "w1"};
    p.firms = {"f1"};
    p.days = {"d1"};
    CHECK_THROWS_WITH_AS((void)build_universe(p), doctest::Contains("duplicate worker"),
                         ValidationError);

    p.workers = {"w1"};
    p.worker_specs = {{"ghost", {}, std::nullopt, {}, {}}};
    CHECK_THROWS_WITH_AS((void)build_universe(p), doctest::Contains("undeclared worker"),
                         ValidationError);

    p.worker_specs = {{"w1", {{"f9", "d1"}}, std::nullopt, {}, {}}};
    CHECK_THROWS_WITH_AS((void)build_universe(p), doctest::Contains("undeclared firm"),
                         ValidationError);

    p.worker_specs = {{"w1", {}, -1, {}, {}}};
    CHECK_THROWS_WITH_AS((void)build_universe(p), doctest::Contains("quota must be >= 0"),
                         ValidationError);

    p.worker_specs = {{"w1", {{"f1", "d1"}, {"f1", "d1"}}, std::nullopt, {}, {}}};
    CHECK_THROWS_WITH_AS((void)build_universe(p), doctest::Contains("twice"),
                         ValidationError);

    p.worker_specs = {{"w1", {}, std::nullopt, {}, {}}, {"w1", {}, std::nullopt, {}, {}}};
    CHECK_THROWS_WITH_AS((void)build_universe(p), doctest::Contains("two specs"),
                         ValidationError);

    p.worker_specs.clear();
    p.contracts = std::vector<std::tuple<std::string, std::string, std::string>>{
        {"w1", "f1", "d1"}, {"w1", "f1", "d1"}};
    CHECK_THROWS_WITH_AS((void)build_universe(p), doctest::Contains("repeats"),
                         ValidationError);
}

TEST_CASE("a compiled market reproduces the marriage solution") {
    auto market = build_market(marriage_week());
    const auto& u = market.universe;
    REQUIRE(u->size() == 4);

    CHECK(market.worker_choice(ContractSet::full(u)) ==
          ContractSet::of_labels(u, {"(w1,f1,d1)", "(w2,f2,d1)"}));
    CHECK(market.firm_choice(ContractSet::full(u)) ==
          ContractSet::of_labels(u, {"(w2,f1,d1)", "(w1,f2,d1)"}));

    auto w = solve(market.worker_choice, market.firm_choice, Side::Worker);
    CHECK(w.stable_set == ContractSet::of_labels(u, {"(w1,f1,d1)", "(w2,f2,d1)"}));
    auto f = solve(market.worker_choice, market.firm_choice, Side::Firm);
    CHECK(f.stable_set == ContractSet::of_labels(u, {"(w1,f2,d1)", "(w2,f1,d1)"}));
    CHECK(is_stable(market.worker_choice, market.firm_choice, w.stable_set,
                    StabilityMethod::RevealingFast).stable);
}

TEST_CASE("compiled side maps classify as revealing") {
    auto market = build_market(marriage_week());
    auto wr = classify(market.worker_choice, ClassifyBudget::exhaustive());
    CHECK(wr.revealing.holds());
    auto fr = classify(market.firm_choice, ClassifyBudget::exhaustive());
    CHECK(fr.revealing.holds());
}

TEST_CASE("declared agents without a spec accept nothing") {
    ScheduleProblem p;
    p.workers = {"w1", "w2"};
    p.firms = {"f1"};
    p.days = {"d1"};
    p.worker_specs = {{"w1", {{"f1", "d1"}}, 1, {}, {}}};
    p.firm_specs = {{"f1", {{"w1", "d1"}, {"w2", "d1"}}, 2, {}, {}}};
    auto market = build_market(p);
    auto chosen = market.worker_choice(ContractSet::full(market.universe));
    CHECK(chosen == ContractSet::of_labels(market.universe, {"(w1,f1,d1)"}));
}

TEST_CASE("hours expansion keeps mutual pairs and the larger cap's slots") {
    auto expanded = expand_hours(two_worker_hours());
    CHECK(expanded.workers == std::vector<std::string>{"w1", "w2"});
    CHECK(expanded.firms == std::vector<std::string>{"f1", "f2"});
    CHECK(expanded.days == std::vector<std::string>{"1", "2", "3"});
    REQUIRE(expanded.contracts);
    REQUIRE(expanded.contracts->size() == 6);  // two mutual pairs, three slots each

    // a side's preference stops at its own cap even when the universe has more
    REQUIRE(expanded.worker_specs.size() == 2);
    CHECK(expanded.worker_specs[0].preference ==
          std::vector<std::pair<std::string, std::string>>{{"f1", "1"}, {"f1", "2"}});
    CHECK(expanded.worker_specs[1].preference ==
          std::vector<std::pair<std::string, std::string>>{
              {"f1", "1"}, {"f1", "2"}, {"f1", "3"}});
    REQUIRE(expanded.firm_specs.size() == 2);
    CHECK(expanded.firm_specs[0].preference ==
          std::vector<std::pair<std::string, std::string>>{
              {"w2", "1"}, {"w2", "2"}, {"w1", "1"}, {"w1", "2"}, {"w1", "3"}});
    CHECK(expanded.firm_specs[1].preference.empty());

    auto market = build_market(expanded);
    CHECK(market.universe->label(0) == "(w1,f1,1)");
}

TEST_CASE("hours are read back as the highest selected slot") {
    auto enc = two_worker_hours();
    auto u = build_universe(expand_hours(enc));

    auto s = ContractSet::of_labels(u, {"(w1,f1,1)", "(w1,f1,3)", "(w2,f1,1)"});
    auto table = interpret_hours(s, enc);
    REQUIRE(table.entries.size() == 2);
    CHECK(table.entries[0] == HoursAssignment{"w1", "f1", 3});
    CHECK(table.entries[1] == HoursAssignment{"w2", "f1", 1});
    REQUIRE(table.warnings.size() == 1);
    CHECK(table.warnings[0].find("w1") != std::string::npos);
    CHECK(table.warnings[0].find("2") != std::string::npos);

    auto empty = interpret_hours(ContractSet::empty(u), enc);
    REQUIRE(empty.entries.size() == 2);
    CHECK(empty.entries[0].hours == 0);
    CHECK(empty.warnings.empty());

    auto other = make_universe({"a", "b", "c", "d", "e", "f"});
    CHECK_THROWS_AS((void)interpret_hours(ContractSet::empty(other), enc),
                    UniverseMismatch);
}

TEST_CASE("hours validation rejects inconsistent agents") {
    HoursEncoding enc = two_worker_hours();
    enc.workers[0].max_hours.erase("f2");
    CHECK_THROWS_WITH_AS((void)expand_hours(enc),
                         doctest::Contains("declares no max hours"), ValidationError);

    enc = two_worker_hours();
    enc.workers[0].max_hours["f1"] = -1;
    CHECK_THROWS_WITH_AS((void)expand_hours(enc),
                         doctest::Contains("max hours must be >= 0"), ValidationError);

    enc = two_worker_hours();
    enc.workers[0].max_hours["f3"] = 2;
    CHECK_THROWS_WITH_AS((void)expand_hours(enc),
                         doctest::Contains("declares max hours for unranked"),
                         ValidationError);

    enc = two_worker_hours();
    enc.workers[0].ranking.push_back("f9");
    CHECK_THROWS_AS((void)expand_hours(enc), ValidationError);
}

TEST_CASE("solving an expanded hours market yields contiguous hour counts") {
    auto enc = two_worker_hours();
    auto expanded = expand_hours(enc);
    auto market = build_market(expanded);
    auto out = solve(market.worker_choice, market.firm_choice, Side::Worker);

    CHECK(is_stable(market.worker_choice, market.firm_choice, out.stable_set,
                    StabilityMethod::RevealingFast).stable);
    auto table = interpret_hours(out.stable_set, enc);
    CHECK(table.warnings.empty());
    REQUIRE(table.entries.size() == 2);
    // w1 works its own cap of 2; w2 is capped at 2 by the firm's side
    CHECK(table.entries[0] == HoursAssignment{"w1", "f1", 2});
    CHECK(table.entries[1] == HoursAssignment{"w2", "f1", 2});
}

}  // TEST_SUITE schedule

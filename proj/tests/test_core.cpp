#include <doctest.h>

#include "stablematch/core.hpp"

using namespace stablematch;

TEST_SUITE("core") {

TEST_CASE("universe keeps declaration order and resolves labels") {
    auto u = make_universe({"x", "a", "m"});
    CHECK(u->size() == 3);
    CHECK(u->label(0) == "x");
    CHECK(u->label(2) == "m");
    CHECK(u->index_of("a") == 1);
    CHECK(!u->index_of("q").has_value());
    CHECK(u->require_index("m") == 2);
    CHECK_THROWS_AS((void)u->require_index("q"), ValidationError);
}

TEST_CASE("duplicate labels are rejected by name") {
    CHECK_THROWS_WITH_AS((void)make_universe({"a", "b", "a"}),
                         doctest::Contains("\"a\""), ValidationError);
}

TEST_CASE("set construction, membership and counting") {
    auto u = make_universe({"a", "b", "c", "d"});
    auto s = ContractSet::of_labels(u, {"b", "d"});
    CHECK(s.count() == 2);
    CHECK(s.contains(1));
    CHECK(!s.contains(0));
    s.insert(0);
    s.erase(3);
    CHECK(s.members() == std::vector<int>{0, 1});
    CHECK(s.member_labels() == std::vector<std::string>{"a", "b"});
    CHECK(ContractSet::empty(u).is_empty());
    CHECK(ContractSet::full(u).count() == 4);
}

TEST_CASE("set algebra") {
    auto u = make_universe({"a", "b", "c", "d"});
    auto s = ContractSet::of_labels(u, {"a", "b"});
    auto t = ContractSet::of_labels(u, {"b", "c"});
    CHECK((s | t) == ContractSet::of_labels(u, {"a", "b", "c"}));
    CHECK((s & t) == ContractSet::of_labels(u, {"b"}));
    CHECK((s - t) == ContractSet::of_labels(u, {"a"}));
    CHECK(s.complement() == ContractSet::of_labels(u, {"c", "d"}));
    CHECK((s & t).is_subset_of(s));
    CHECK(!s.is_subset_of(t));
    CHECK(s.is_subset_of(s));
}

TEST_CASE("sets from different universes do not mix, even with equal labels") {
    auto u1 = make_universe({"a", "b"});
    auto u2 = make_universe({"a", "b"});
    auto s1 = ContractSet::full(u1);
    auto s2 = ContractSet::full(u2);
    CHECK_THROWS_AS((void)(s1 | s2), UniverseMismatch);
    CHECK_THROWS_AS((void)(s1 == s2), UniverseMismatch);
}

TEST_CASE("mask view round-trips and validates") {
    auto u = make_universe({"a", "b", "c"});
    for (std::uint32_t m = 0; m < 8; ++m) {
        CHECK(ContractSet::from_mask(u, m).to_mask() == m);
    }
    CHECK_THROWS_AS((void)ContractSet::from_mask(u, 8u), ValidationError);

    std::vector<std::string> big;
    for (int i = 0; i < 40; ++i) big.push_back("c" + std::to_string(i));
    auto wide = ContractSet::empty(make_universe(big));
    CHECK_THROWS_AS((void)wide.to_mask(), CapExceeded);
}

TEST_CASE("set rendering") {
    auto u = make_universe({"a", "b", "c"});
    CHECK(to_string(ContractSet::of_labels(u, {"c", "a"})) == "{a, c}");
    CHECK(to_string(ContractSet::empty(u)) == "{}");
}

TEST_CASE("choice wrapper enforces the inclusion C(A) ⊆ A") {
    auto u = make_universe({"a", "b"});
    ChoiceFunction bad(u, [u](const ContractSet&) { return ContractSet::full(u); },
                       "bad");
    CHECK_THROWS_WITH_AS((void)bad(ContractSet::of_labels(u, {"a"})),
                         doctest::Contains("bad"), InclusionViolation);

    ChoiceFunction id(u, [](const ContractSet& a) { return a; });
    auto s = ContractSet::of_labels(u, {"b"});
    CHECK(id(s) == s);
}

TEST_CASE("choice wrapper rejects arguments over a foreign universe") {
    auto u1 = make_universe({"a"});
    auto u2 = make_universe({"a"});
    ChoiceFunction id(u1, [](const ContractSet& a) { return a; });
    CHECK_THROWS_AS((void)id(ContractSet::full(u2)), UniverseMismatch);
}

TEST_CASE("rejection complements the choice within the offer") {
    auto u = make_universe({"a", "b", "c"});
    ChoiceFunction first_only(u, [u](const ContractSet& a) {
        ContractSet out = ContractSet::empty(u);
        if (!a.members().empty()) out.insert(a.members().front());
        return out;
    });
    auto offered = ContractSet::of_labels(u, {"b", "c"});
    CHECK(rejection(first_only, offered) == ContractSet::of_labels(u, {"c"}));
    RejectionView view(first_only);
    CHECK(view(offered) == ContractSet::of_labels(u, {"c"}));
    CHECK((first_only(offered) | rejection(first_only, offered)) == offered);
}

}  // TEST_SUITE core

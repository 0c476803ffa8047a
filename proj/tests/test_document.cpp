#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "stablematch/document.hpp"

using namespace stablematch;

namespace {

std::string data_path(const std::string& name) {
    return std::string(STABLEMATCH_DATA_DIR) + "/" + name;
}

const std::vector<std::string> kCorpus = {
    "gale_shapley_1962.json", "section2_jobmarket.json", "section4_jobmarket.json",
    "problem1.json",          "problem2.json",           "problem3.json",
    "problem4.json",          "example_3_12.json",       "example_6_1.json",
    "example_6_3a.json",      "example_6_3b.json",       "example_6_5.json",
};

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    out.close();
    return path.string();
}

const char* kHoursDoc = R"({
  "kind": "hours",
  "description": "two workers sharing one firm",
  "workers": [
    {"id": "w1", "ranking": ["f1", "f2"], "max_hours": {"f1": 2, "f2": 1}},
    {"id": "w2", "ranking": ["f1"], "max_hours": {"f1": 3}}
  ],
  "firms": [
    {"id": "f1", "ranking": ["w2", "w1"], "max_hours": {"w2": 2, "w1": 3}},
    {"id": "f2", "ranking": [], "max_hours": {}}
  ]
})";

}  // namespace

TEST_SUITE("document") {

TEST_CASE("every corpus file parses, renders, and re-parses identically") {
    for (const auto& name : kCorpus) {
        CAPTURE(name);
        auto doc = parse_problem_file(data_path(name));
        auto text = render_problem(doc);
        auto reparsed = parse_problem(text);
        CHECK(reparsed == doc);
        CHECK(render_problem(reparsed) == text);
    }
}

TEST_CASE("corpus documents compile to the expected universes") {
    auto marriage = compile_problem(parse_problem_file(data_path("gale_shapley_1962.json")));
    CHECK(marriage.universe->size() == 9);  // 3 workers x 3 firms x 1 day
    CHECK(marriage.schedule.has_value());
    CHECK_FALSE(marriage.hours.has_value());

    auto week = compile_problem(parse_problem_file(data_path("section4_jobmarket.json")));
    CHECK(week.universe->size() == 18);  // 3 x 3 x 2

    auto big = compile_problem(parse_problem_file(data_path("problem1.json")));
    CHECK(big.universe->size() == 84);  // 4 x 3 x 7

    auto raw = compile_problem(parse_problem_file(data_path("example_6_1.json")));
    CHECK(raw.universe->size() == 2);
    CHECK_FALSE(raw.schedule.has_value());
    CHECK_FALSE(raw.hours.has_value());
}

TEST_CASE("raw quota documents compile to the documented map values") {
    auto inst = compile_problem(parse_problem_file(data_path("example_3_12.json")));
    const auto& u = inst.universe;
    CHECK(inst.worker_choice(ContractSet::of_labels(u, {"b", "c"})) ==
          ContractSet::of_labels(u, {"b"}));
    CHECK(inst.worker_choice(ContractSet::full(u)) ==
          ContractSet::of_labels(u, {"a", "c"}));
}

TEST_CASE("hours documents parse, compile, and round trip") {
    auto doc = parse_problem(kHoursDoc);
    CHECK(parse_problem(render_problem(doc)) == doc);

    auto compiled = compile_problem(doc);
    REQUIRE(compiled.hours.has_value());
    REQUIRE(compiled.schedule.has_value());
    CHECK(compiled.universe->size() == 6);  // two mutual pairs, three slots each
    CHECK(compiled.universe->label(0) == "(w1,f1,1)");
}

TEST_CASE("syntax errors report the line") {
    CHECK_THROWS_WITH_AS((void)parse_problem("{\n  \"kind\": ,\n}"),
                         doctest::Contains("line 2"), ParseError);
}

TEST_CASE("structural errors name the offending field") {
    CHECK_THROWS_WITH_AS((void)parse_problem("{}"), doctest::Contains("kind"), ParseError);
    CHECK_THROWS_WITH_AS((void)parse_problem(R"({"kind": "mystery"})"),
                         doctest::Contains("mystery"), ParseError);
    CHECK_THROWS_WITH_AS(
        (void)parse_problem(
            R"({"kind": "schedule", "workers": 5, "firms": [], "days": []})"),
        doctest::Contains("workers"), ParseError);
    CHECK_THROWS_WITH_AS(
        (void)parse_problem(
            R"({"kind": "schedule", "workers": [], "firms": [], "days": [], "bogus": 1})"),
        doctest::Contains("bogus"), ParseError);
}

TEST_CASE("semantic spec violations surface as parse errors with context") {
    const char* negative_quota = R"({
      "kind": "schedule",
      "workers": ["w1"], "firms": ["f1"], "days": ["d1"],
      "worker_specs": [{"id": "w1", "preference": [["f1", "d1"]], "quota": -1}]
    })";
    CHECK_THROWS_WITH_AS((void)parse_problem(negative_quota),
                         doctest::Contains("quota must be >= 0"), ParseError);
}

TEST_CASE("file errors carry the path") {
    CHECK_THROWS_WITH_AS((void)parse_problem_file("/nonexistent/market.json"),
                         doctest::Contains("/nonexistent/market.json"), ParseError);
    auto path = write_temp("stablematch_bad.json", "{\n  broken\n}");
    CHECK_THROWS_WITH_AS((void)parse_problem_file(path), doctest::Contains(path.c_str()),
                         ParseError);
}

TEST_CASE("table entries accept any key order but render canonically") {
    const char* shuffled = R"({
      "kind": "raw",
      "labels": ["a", "b"],
      "worker_choice": {"type": "table",
                        "entries": {"": "", "b": "", "a": "", "b,a": "b,a"}},
      "firm_choice": {"type": "quota", "preference": ["a"]}
    })";
    auto doc = parse_problem(shuffled);
    auto text = render_problem(doc);
    CHECK(text.find("\"b,a\"") == std::string::npos);
    CHECK(text.find("\"a,b\": \"a,b\"") != std::string::npos);

    auto compiled = compile_problem(doc);
    CHECK(compiled.worker_choice(ContractSet::full(compiled.universe)) ==
          ContractSet::full(compiled.universe));
}

TEST_CASE("table documents are checked for completeness and label sanity") {
    const char* missing = R"({
      "kind": "raw",
      "labels": ["a", "b"],
      "worker_choice": {"type": "table", "entries": {"": "", "a": "", "b": ""}},
      "firm_choice": {"type": "quota", "preference": []}
    })";
    CHECK_THROWS_WITH_AS((void)parse_problem(missing),
                         doctest::Contains("missing entry for subset \"a,b\""), ParseError);

    const char* unknown = R"({
      "kind": "raw",
      "labels": ["a", "b"],
      "worker_choice": {"type": "table", "entries": {"": "", "a": "", "b": "", "a,z": ""}},
      "firm_choice": {"type": "quota", "preference": []}
    })";
    CHECK_THROWS_WITH_AS((void)parse_problem(unknown),
                         doctest::Contains("unknown contract label \"z\""), ParseError);

    const char* comma_label = R"({
      "kind": "raw",
      "labels": ["a,b", "c"],
      "worker_choice": {"type": "quota", "preference": []},
      "firm_choice": {"type": "quota", "preference": []}
    })";
    CHECK_THROWS_WITH_AS((void)parse_problem(comma_label),
                         doctest::Contains("must not contain a comma"), ParseError);
}

TEST_CASE("raw overlap flags are honored end to end") {
    const char* overlapping = R"({
      "kind": "raw",
      "labels": ["a", "b", "c"],
      "worker_choice": {"type": "quota", "preference": ["a", "b", "c"], "q": 2,
                        "groups": [{"members": ["a", "b"], "q": 1},
                                   {"members": ["b", "c"], "q": 1}]},
      "firm_choice": {"type": "quota", "preference": []}
    })";
    // without allow_overlap the compiled spec is invalid
    CHECK_THROWS_AS((void)parse_problem(overlapping), ParseError);
}

TEST_CASE("candidate set files accept both accepted shapes") {
    auto doc = parse_problem_file(data_path("example_3_12.json"));
    auto universe = compile_problem(doc).universe;

    auto array_form = write_temp("stablematch_set1.json", R"(["a", "c"])");
    CHECK(parse_set_file(array_form, universe) ==
          ContractSet::of_labels(universe, {"a", "c"}));

    auto object_form = write_temp("stablematch_set2.json", R"({"set": ["b"]})");
    CHECK(parse_set_file(object_form, universe) ==
          ContractSet::of_labels(universe, {"b"}));

    auto unknown = write_temp("stablematch_set3.json", R"(["a", "z"])");
    CHECK_THROWS_WITH_AS((void)parse_set_file(unknown, universe),
                         doctest::Contains("\"z\""), ParseError);

    auto wrong_shape = write_temp("stablematch_set4.json", R"("a")");
    CHECK_THROWS_AS((void)parse_set_file(wrong_shape, universe), ParseError);
}

}  // TEST_SUITE document

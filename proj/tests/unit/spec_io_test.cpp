#include "../support.hpp"

#include "runsec/rational.hpp"

#include <doctest.h>

using namespace runsec;
using testing::q;

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>> kFixtures{
    {"EX1", {}},
    {"EX2", {}},
    {"EX3", {}},
    {"NONMEASURABLE", {}},
    {"COSMIC", {"1", "1/3"}},
    {"COSMIC", {"3", "1/5"}},
    {"XOR", {"1"}},
    {"XOR", {"2"}},
    {"GS-XOR", {"1"}},
    {"GS-XOR", {"3"}},
    {"L_O_ONCE", {"1"}},
    {"L_O_ONCE", {"2"}},
    {"SHUFFLE-PRODUCT", {"1", "1"}},
    {"SHUFFLE-PRODUCT", {"2", "1"}},
    {"SEP-GAP", {"2"}},
    {"SEP-GAP", {"4"}},
};

std::string label(const std::pair<std::string, std::vector<std::string>>& f) {
    std::string out = f.first;
    for (const auto& p : f.second)
        out += " " + p;
    return out;
}

} // namespace

TEST_CASE("rationals") {
    CHECK(parse_rational("6/8") == q("3/4"));
    CHECK(to_string(parse_rational("6/8")) == "3/4");
    CHECK(to_string(parse_rational("4/2")) == "2");
    CHECK(to_string(parse_rational("-1/3")) == "-1/3");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK(pow2(10) == 1024);
}

TEST_CASE("every fixture meets its expect block") {
    for (const auto& f : kFixtures) {
        CAPTURE(label(f));
        Loaded l = testing::fixture(f.first, f.second);
        CHECK_FALSE(l.expect.empty());
        Report r = run_checks(l);
        CHECK(r.all_match());
        for (const auto& rec : r.records)
            CHECK_MESSAGE(rec.matches, rec.check);
    }
}

TEST_CASE("fixtures survive emit and load") {
    for (const auto& f : kFixtures) {
        CAPTURE(label(f));
        Loaded l = testing::fixture(f.first, f.second);
        Loaded again = load_json(emit(l));
        Report a = run_checks(l), b = run_checks(again);
        REQUIRE(a.records.size() == b.records.size());
        for (std::size_t k = 0; k < a.records.size(); ++k) {
            CHECK(a.records[k].holds == b.records[k].holds);
            CHECK(a.records[k].failure == b.records[k].failure);
        }
        CHECK(emit(again) == emit(l));
    }
}

TEST_CASE("fixture parameters are checked") {
    CHECK_THROWS_AS(fixture("COSMIC", {"2", "1"}), Error);
    CHECK_THROWS_AS(fixture("COSMIC", {"2", "0"}), Error);
    CHECK_THROWS_AS(fixture("COSMIC", {"0", "1/2"}), Error);
    CHECK_THROWS_AS(fixture("XOR", {"9"}), Error);
    CHECK_THROWS_AS(fixture("XOR", {"two"}), Error);
    CHECK_THROWS_AS(fixture("NOPE"), Error);
    CHECK(fixture_names().size() == 10);
}

TEST_CASE("COSMIC run weights") {
    Loaded l = testing::fixture("COSMIC", {"4", "1/10"});
    const System& sys = *l.system;
    CHECK(sys.run_count() == 4 + 16);
    CHECK(l.measure->weight(sys.run_index("n_w2")) == q("9/40"));
    CHECK(l.measure->weight(sys.run_index("c_w2_w3")) == q("1/160"));
}

TEST_CASE("load errors carry a location") {
    auto message = [](const Json& doc) {
        try {
            load_json(doc);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    Json doc = fixture("EX1");
    doc["runs"][1]["states"] = Json::array();
    CHECK(message(doc).find("/runs/1/states") != std::string::npos);
    doc = fixture("EX1");
    doc["measure"]["r1"] = "2/3";
    CHECK_FALSE(message(doc).empty());
    doc = fixture("EX1");
    Json point_mass = Json::object();
    for (const auto& run : doc["runs"])
        point_mass[run["id"].get<std::string>()] = "0";
    point_mass[doc["runs"][0]["id"].get<std::string>()] = "1";
    doc["measures"] = Json::array({doc["measure"], point_mass});
    CHECK(message(doc).find("/measures/1") != std::string::npos);
    doc["measures"].erase(1);
    CHECK(message(doc).empty());
    doc = fixture("EX1");
    doc["mode"] = "sometimes";
    CHECK(message(doc).find("/mode") != std::string::npos);
    doc = fixture("EX1");
    doc["expect"][0]["check"] = "no_such_check";
    Loaded l = load_json(doc);
    CHECK_THROWS_AS(run_checks(l), Error);
    CHECK_THROWS_AS(load("/nonexistent/spec.json"), Error);
}

TEST_CASE("points and reports") {
    Loaded l = testing::fixture("EX1");
    const System& sys = *l.system;
    CHECK(parse_point(sys, "r2,1") == Point{1, 1});
    CHECK(point_text(sys, {1, 1}) == "r2,1");
    CHECK_THROWS_AS(parse_point(sys, "r9,0"), Error);
    CHECK_THROWS_AS(parse_point(sys, "r1,7"), Error);
    CHECK_THROWS_AS(parse_point(sys, "r1"), Error);

    CheckRecord rec = run_check(l, Json{{"check", "run_based_secrecy"}, {"i", "1"}, {"j", "2"}});
    CHECK_FALSE(rec.holds);
    CHECK_FALSE(rec.expected);
    REQUIRE(rec.reverified);
    CHECK(*rec.reverified);
    Report r = run_checks(l, {"synchronous_secrecy"});
    CHECK(r.records.size() == 1);
    Json j = report_json(r);
    CHECK(j["records"][0]["check"] == "synchronous_secrecy");
    CHECK(report_text(r).find("synchronous_secrecy") != std::string::npos);
}

TEST_CASE("mismatched expectations are reported") {
    Json doc = fixture("EX1");
    doc["expect"] = Json::array({Json{{"check", "run_based_secrecy"}, {"i", "1"}, {"j", "2"}, {"holds", true}}});
    Report r = run_checks(load_json(doc));
    CHECK_FALSE(r.all_match());
    CHECK_FALSE(r.records[0].matches);
}

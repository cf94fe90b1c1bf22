#include "../support.hpp"

#include "runsec/generators.hpp"
#include "runsec/secrecy.hpp"
#include "runsec/traces.hpp"

#include <doctest.h>

#include <set>

using namespace runsec;
using testing::q;

namespace {

SyncTraceSystem xor_traces(int k) { return *testing::fixture("XOR", {std::to_string(k)}).sync_traces; }

} // namespace

TEST_CASE("XOR(1) has a zero low output at the first step") {
    SyncTraceSystem s = xor_traces(1);
    CHECK(s.traces.size() == 8);
    for (const auto& t : s.traces)
        CHECK(t.at(0).lo == "0");
}

TEST_CASE("XOR truth table at the second step of XOR(2)") {
    SyncTraceSystem s = xor_traces(2);
    CHECK(s.traces.size() == 64);
    // (h_i now, h_o before) -> l_o now
    const std::map<std::pair<std::string, std::string>, std::string> table{
        {{"0", "0"}, "0"}, {{"0", "1"}, "1"}, {{"1", "0"}, "1"}, {{"1", "1"}, "0"}};
    std::set<std::pair<std::string, std::string>> rows;
    for (const auto& t : s.traces) {
        auto key = std::pair{t.at(1).hi, t.at(0).ho};
        CHECK(t.at(1).lo == table.at(key));
        rows.insert(key);
    }
    CHECK(rows.size() == 4);
}

TEST_CASE("XOR traces: noninterference without separability") {
    for (int k : {1, 2}) {
        SyncTraceSystem s = xor_traces(k);
        CHECK(check_gni_sync(s).holds);
        CHECK(check_separability(s).holds == (k < 2));
        System sys = runs_from_sync(s);
        CHECK(sys.agents() == std::vector<std::string>{"L", "H"});
        CHECK(is_synchronous(sys));
        CHECK(has_perfect_recall(sys, 0));
        CHECK(has_perfect_recall(sys, 1));
        CHECK(check_f_secrecy(sys, 0, high_input_function(sys), Allowability::make_synchronous()).holds);
    }
}

TEST_CASE("XOR(2): the bit-transmitting strategy defeats nondeducibility") {
    SyncTraceSystem s = xor_traces(2);
    auto strategies = enumerate_strategies(s);
    CHECK_FALSE(strategies.empty());
    for (const auto& p : strategies) {
        bool used = false;
        for (const auto& t : s.traces)
            used = used || is_consistent(p, t);
        CHECK(used);
    }
    NosReport rep = nos_report(s, strategies);
    CHECK(rep.covered);
    CHECK_FALSE(rep.verdict.holds);
    CHECK(rep.agree());
    CHECK_THROWS_AS(enumerate_strategies(s, 1), Error);
}

TEST_CASE("views and validation") {
    SyncTrace t{{"0", "1", "0", "1"}, {"1", "0", "1", "0"}};
    CHECK(low_view(t, 0) == "<>");
    CHECK(low_view(t, 2) == "<0/0,1/1>");
    CHECK(high_view(t, 1) == "<1/1>");
    CHECK(high_input_view(t, 2) == "<1,0>");

    SyncTraceSystem s{{"0"}, {"0"}, {"0"}, {"0"}, {{{"0", "0", "0", "0"}}}};
    CHECK_NOTHROW(validate(s));
    s.traces.push_back(s.traces[0]);
    CHECK_THROWS_AS(validate(s), Error);
    s.traces = {{{"0", "1", "0", "0"}}};
    CHECK_THROWS_AS(validate(s), Error);
    s.traces = {{{"0", "0", "0", "0"}}, {{"0", "0", "0", "0"}, {"0", "0", "0", "0"}}};
    CHECK_THROWS_AS(validate(s), Error);
}

TEST_CASE("horizon completeness") {
    SyncTraceSystem s = xor_traces(2);
    CHECK(is_horizon_complete(s, 2)); // full length: nothing to extend
    CHECK_FALSE(is_horizon_complete(s, 1)); // l_o is constrained
    CHECK_THROWS_AS(is_horizon_complete(s, 3), Error);
    Loaded gap = testing::fixture("SEP-GAP", {"3"});
    CHECK_FALSE(is_horizon_complete(*gap.sync_traces, 2));
    SyncTraceSystem all{{"0"}, {"0", "1"}, {"0"}, {"0"}, {}};
    for (const char* a : {"0", "1"})
        for (const char* b : {"0", "1"})
            all.traces.push_back({{"0", a, "0", "0"}, {"0", b, "0", "0"}});
    CHECK(is_horizon_complete(all, 0));
    CHECK(is_horizon_complete(all, 1));
    all.traces.pop_back();
    CHECK(is_horizon_complete(all, 2));
    CHECK_FALSE(is_horizon_complete(all, 1));
    CHECK_FALSE(is_horizon_complete(all, 0));
}

TEST_CASE("separability implies noninterference on random trace systems") {
    std::mt19937_64 rng(4);
    int sep = 0;
    for (int k = 0; k < 200; ++k) {
        Loaded l = load_json(random_sync_trace_spec(rng, SyncTraceKind(k % 3)));
        const SyncTraceSystem& s = *l.sync_traces;
        bool separable = check_separability(s).holds;
        sep += separable;
        if (separable)
            CHECK(check_gni_sync(s).holds);
    }
    CHECK(sep > 0);
}

TEST_CASE("interleavings") {
    std::vector<AsyncTrace> out;
    for_each_interleaving({"a", "b"}, {"x", "y", "z"}, [&](const AsyncTrace& t) {
        out.push_back(t);
        return true;
    });
    CHECK(out.size() == 10);
    CHECK(std::set<AsyncTrace>(out.begin(), out.end()).size() == 10);
    int seen = 0;
    for_each_interleaving({"a"}, {"x"}, [&](const AsyncTrace&) { return ++seen < 1; });
    CHECK(seen == 1);
}

TEST_CASE("L_O_ONCE: total secrecy without separability") {
    Loaded l = testing::fixture("L_O_ONCE", {"2"});
    const AsyncTraceSystem& s = *l.async_traces;
    CHECK_NOTHROW(validate(s));
    CHECK_FALSE(check_async_separability(s).holds);
    CHECK_FALSE(check_async_gni(s).holds);
    CHECK_FALSE(is_closed_under_interleavings(s));
    CHECK(check_total_secrecy(*l.system, 0, 1).holds);
    AsyncTraceSystem closed = close_under_interleavings(s);
    CHECK(is_closed_under_interleavings(closed));
    CHECK(check_async_separability(closed).holds);
    CHECK(closed.traces.size() > s.traces.size());
}

TEST_CASE("asynchronous systems need prefix closure and disjoint alphabets") {
    AsyncTraceSystem s{{"l"}, {"h"}, {}, {{"l", "h"}}};
    CHECK_THROWS_AS(validate(s), Error);
    s.traces = {{"l"}, {"l", "h"}};
    CHECK_NOTHROW(validate(s));
    CHECK(is_low(s, "l"));
    CHECK(is_high_input(s, "h"));
    CHECK_FALSE(is_high(s, "l"));
    System sys = runs_from_async(s);
    CHECK(sys.run_count() == 1); // one maximal chain
    CHECK(event_token({"l", "h"}) == "<l,h>");
    AsyncTraceSystem overlap{{"l"}, {"l"}, {}, {{"l"}}};
    CHECK_THROWS_AS(validate(overlap), Error);
    AsyncTraceSystem unknown{{"l"}, {"h"}, {}, {{"x"}}};
    CHECK_THROWS_AS(validate(unknown), Error);
}

TEST_CASE("shuffle products are separable") {
    Loaded l = testing::fixture("SHUFFLE-PRODUCT", {"1", "2"});
    const AsyncTraceSystem& s = *l.async_traces;
    CHECK(is_closed_under_interleavings(s));
    CHECK(check_async_separability(s).holds);
    CHECK(check_async_gni(s).holds);
    CHECK(check_total_secrecy(*l.system, 0, 1).holds);
}

TEST_CASE("GS-XOR: likelihoods reveal the strategy") {
    Loaded l = testing::fixture("GS-XOR", {"2"});
    const ProbProtocolSystem& pps = *l.gray_syverson;
    AdversarialSystem gs = build_gray_syverson(pps);
    CHECK(gs.cell_count() == 2);
    auto traces = gray_syverson_traces(pps);
    CHECK(traces.size() == gs.base().run_count());
    // fair high-output coin: each trace has probability 1/2^k in its cell
    for (std::size_t c = 0; c < gs.cell_count(); ++c)
        for (std::size_t r = 0; r < gs.base().run_count(); ++r)
            if (gs.cell_of(r) == c)
                CHECK(gs.cell_measure(c).weight(r) == q("1/4"));
    CHECK_FALSE(check_pni(pps).holds);
    PniReport rep = pni_report(pps, {2, 1, false});
    CHECK(rep.agree());
    CHECK_FALSE(rep.no_evidence);
}

TEST_CASE("blind protocols satisfy PNI") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 20; ++k) {
        Loaded l = load_json(random_pps_spec(rng, true));
        PniReport rep = pni_report(*l.gray_syverson, {2, 1, false});
        CHECK(rep.pni.holds);
        CHECK(rep.agree());
    }
}

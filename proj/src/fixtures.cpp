#include "runsec/fixtures.hpp"

#include <array>
#include <functional>
#include <map>

namespace runsec {

namespace {

Json expect(const std::string& check, bool holds, Json params = Json::object()) {
    Json e = {{"check", check}};
    for (auto& [k, v] : params.items())
        e[k] = v;
    e["holds"] = holds;
    return e;
}

Json states(std::initializer_list<std::pair<const char*, const char*>> locals) {
    Json out = Json::array();
    for (const auto& [a, b] : locals)
        out.push_back(Json::array({a, b}));
    return out;
}

Json two(const std::string& i, const std::string& j) { return {{"i", i}, {"j", j}}; }

std::size_t count_param(const std::vector<std::string>& params, std::size_t k, std::size_t dflt, std::size_t lo,
                        std::size_t hi, const char* what) {
    if (params.size() <= k)
        return dflt;
    std::size_t v;
    try {
        std::size_t used = 0;
        v = std::stoul(params[k], &used);
        if (used != params[k].size())
            throw std::invalid_argument(what);
    } catch (const std::exception&) {
        throw Error(std::string("bad parameter ") + what + " '" + params[k] + "'");
    }
    if (v < lo || v > hi)
        throw Error(std::string("parameter ") + what + " must lie in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
    return v;
}

Json ex1() {
    Json doc = {{"name", "EX1"}, {"agents", {"1", "2"}}, {"mode", "synchronous"}, {"horizon", 2}};
    doc["runs"] = {{{"id", "r1"}, {"states", states({{"X", "A"}, {"Y1", "B1"}, {"Y2", "B2"}})}},
                   {{"id", "r2"}, {"states", states({{"Z", "A"}, {"Y1", "C1"}, {"Y2", "C2"}})}}};
    doc["measure"] = {{"r1", "1/2"}, {"r2", "1/2"}};
    doc["expect"] = {expect("is_synchronous", true),
                     expect("synchronous_secrecy", true, two("1", "2")),
                     expect("run_based_secrecy", false, two("1", "2")),
                     expect("perfect_recall", false, {{"i", "1"}}),
                     expect("perfect_recall", true, {{"i", "2"}}),
                     expect("prob_sync_secrecy", true, two("1", "2")),
                     expect("run_based_prob_secrecy", false, two("1", "2"))};
    return doc;
}

Json ex2() {
    Json doc = {{"name", "EX2"}, {"agents", {"1", "2"}}, {"mode", "asynchronous"}, {"horizon", 1}};
    doc["runs"] = {{{"id", "r1"}, {"states", states({{"X", "A"}})}},
                   {{"id", "r2"}, {"states", states({{"X", "B"}, {"Y", "A"}})}},
                   {{"id", "r3"}, {"states", states({{"Y", "A"}})}}};
    doc["measure"] = {{"r1", "2/5"}, {"r2", "1/5"}, {"r3", "2/5"}};
    doc["expect"] = {expect("run_based_secrecy", true, two("1", "2")),
                     expect("total_secrecy", false, two("1", "2")),
                     expect("run_based_prob_secrecy", true, two("1", "2")),
                     expect("run_based_prob_secrecy", false, {{"i", "2"}, {"j", "1"}, {"values", {"3/5", "1"}}}),
                     expect("independence", false, two("1", "2"))};
    return doc;
}

Json ex3() {
    Json doc = {{"name", "EX3"}, {"agents", {"1", "2"}}, {"mode", "synchronous"}, {"horizon", 2}};
    doc["runs"] = {{{"id", "r1"}, {"states", states({{"X", "A"}, {"Y1", "C1"}, {"Y2", "C2"}})}},
                   {{"id", "r2"}, {"states", states({{"X", "B"}, {"Y1", "D1"}, {"Y2", "D2"}})}},
                   {{"id", "r3"}, {"states", states({{"Q", "A"}, {"R1", "D1"}, {"R2", "D2"}})}},
                   {{"id", "r4"}, {"states", states({{"Q", "B"}, {"R1", "C1"}, {"R2", "C2"}})}}};
    doc["measure"] = {{"r1", "1/4"}, {"r2", "1/4"}, {"r3", "1/4"}, {"r4", "1/4"}};
    doc["interpretation"] = {{"p", {{{"agent", "2"}, {"tokens", {"A", "D1"}}}}}};
    doc["expect"] = {expect("run_based_prob_secrecy", true, two("1", "2")),
                     expect("prob_syntactic", false, {{"i", "1"}, {"j", "2"}, {"variant", "run_based"}}),
                     expect("perfect_recall", true, {{"i", "1"}}),
                     expect("perfect_recall", false, {{"i", "2"}}),
                     expect("formula", true, {{"formula", "(pr 1 (once p) = 1)"}, {"at", "r1,0"}}),
                     expect("formula", true, {{"formula", "(pr 1 (once p) = 1/2)"}, {"at", "r3,0"}})};
    return doc;
}

Json nonmeasurable() {
    Json doc = {{"name", "NONMEASURABLE"}, {"agents", {"1", "2"}}, {"mode", "asynchronous"}, {"horizon", 1}};
    doc["runs"] = {{{"id", "r1"}, {"states", states({{"l1", "a"}, {"l1", "b"}})}},
                   {{"id", "r2"}, {"states", states({{"l2", "a"}, {"l2", "a"}})}}};
    doc["measure"] = {{"r1", "1/2"}, {"r2", "1/2"}};
    doc["expect"] = {expect("prob_total_secrecy", false, two("1", "2"))};
    return doc;
}

Json cosmic(std::size_t n, const Rational& eps) {
    // Zero-weight runs would break positivity on information sets.
    if (eps <= 0 || eps >= 1)
        throw Error("COSMIC: eps must lie strictly between 0 and 1");
    Json doc = {{"name", "COSMIC(" + std::to_string(n) + "," + to_string(eps) + ")"},
                {"agents", {"Bob", "Alice"}},
                {"mode", "synchronous"},
                {"horizon", 2}};
    Json runs = Json::array(), mu = Json::object(), cells = Json::array();
    auto word = [](std::size_t k) { return "w" + std::to_string(k + 1); };
    auto state = [](const std::string& env, const std::string& b, const std::string& a) {
        return Json{{"env", env}, {"locals", {b, a}}};
    };
    const Rational none = (1 - eps) / n, hit = eps / (n * n);
    for (std::size_t x = 0; x < n; ++x) {
        Json cell_runs = Json::array(), cell_mu = Json::object();
        std::string id = "n_" + word(x);
        runs.push_back({{"id", id},
                        {"states",
                         {state("norm", "b0", "a0"), state("norm", word(x) + "@1", "a1"),
                          state("norm", word(x) + "@2", word(x) + "@2")}}});
        mu[id] = to_string(none);
        cell_runs.push_back(id);
        cell_mu[id] = to_string(Rational(1 - eps));
        for (std::size_t y = 0; y < n; ++y) {
            std::string rid = "c_" + word(x) + "_" + word(y);
            runs.push_back({{"id", rid},
                            {"states",
                             {state("ray", "b0", "a0"), state("ray", word(x) + "@1", "a1"),
                              state("ray", word(x) + "@2", word(y) + "@2")}}});
            mu[rid] = to_string(hit);
            cell_runs.push_back(rid);
            cell_mu[rid] = to_string(Rational(eps / n));
        }
        cells.push_back({{"id", "D(" + word(x) + ")"}, {"runs", cell_runs}, {"measure", cell_mu}});
    }
    doc["runs"] = runs;
    doc["measure"] = mu;
    doc["adversarial"] = {{"cells", cells}};
    doc["expect"] = {expect("synchronous_secrecy", true, two("Alice", "Bob")),
                     expect("prob_sync_secrecy", n == 1, two("Alice", "Bob")),
                     expect("no_evidence", n == 1, {{"i", "Alice"}})};
    return doc;
}

std::string bit(unsigned b) { return b ? "1" : "0"; }

Json xor_channel(std::size_t k) {
    Json traces = Json::array();
    const std::size_t total = std::size_t{1} << (3 * k);
    for (std::size_t code = 0; code < total; ++code) {
        Json t = Json::array();
        unsigned prev_ho = 0;
        for (std::size_t s = 0; s < k; ++s) {
            unsigned li = code >> (3 * s) & 1, hi = code >> (3 * s + 1) & 1, ho = code >> (3 * s + 2) & 1;
            unsigned lo = s == 0 ? 0 : (prev_ho ^ hi);
            t.push_back({bit(li), bit(hi), bit(lo), bit(ho)});
            prev_ho = ho;
        }
        traces.push_back(t);
    }
    Json doc = {{"name", "XOR(" + std::to_string(k) + ")"}};
    doc["sync_traces"] = {{"LI", {"0", "1"}}, {"HI", {"0", "1"}}, {"LO", {"0", "1"}}, {"HO", {"0", "1"}},
                          {"traces", traces}};
    doc["strategies"] = "all";
    doc["expect"] = {expect("gni", true),
                     expect("separability", k < 2),
                     expect("is_synchronous", true),
                     expect("perfect_recall", true, {{"i", "L"}}),
                     expect("perfect_recall", true, {{"i", "H"}}),
                     expect("f_secrecy", true, {{"i", "L"}, {"f", "f_hi"}, {"allowability", "synchronous"}}),
                     expect("synchronous_secrecy", k < 2, two("L", "H")),
                     expect("nos", k < 2),
                     expect("nos_reduction", true)};
    return doc;
}

Json gs_xor(std::size_t k) {
    // H views and full prefixes consistent with the channel, up to length k-1.
    std::vector<std::vector<std::array<unsigned, 4>>> prefixes{{}};
    for (std::size_t len = 0; len + 1 < k; ++len) {
        std::vector<std::vector<std::array<unsigned, 4>>> next;
        for (const auto& p : prefixes) {
            if (p.size() != len)
                continue;
            for (unsigned hi = 0; hi < 2; ++hi)
                for (unsigned ho = 0; ho < 2; ++ho) {
                    unsigned lo = len == 0 ? 0 : (p.back()[3] ^ hi);
                    auto q = p;
                    q.push_back({0, hi, lo, ho});
                    next.push_back(q);
                }
        }
        prefixes.insert(prefixes.end(), next.begin(), next.end());
    }
    auto view_of = [](const std::vector<std::array<unsigned, 4>>& p) {
        std::string out = "<";
        for (std::size_t s = 0; s < p.size(); ++s)
            out += (s ? "," : "") + bit(p[s][1]) + "/" + bit(p[s][3]);
        return out + ">";
    };
    auto prefix_of = [](const std::vector<std::array<unsigned, 4>>& p) {
        std::string out = "<";
        for (std::size_t s = 0; s < p.size(); ++s)
            out += (s ? "," : "") + bit(p[s][0]) + "/" + bit(p[s][1]) + "/" + bit(p[s][2]) + "/" + bit(p[s][3]);
        return out + ">";
    };
    Json high = Json::array();
    for (unsigned x = 0; x < 2; ++x) {
        Json table = Json::object();
        for (const auto& p : prefixes) {
            unsigned h = p.empty() ? x : (x ^ p.back()[3]);
            table[view_of(p)] = {{bit(h), "1"}};
        }
        high.push_back({{"name", "transmit" + bit(x)}, {"table", table}});
    }
    Json output = Json::object();
    for (const auto& p : prefixes)
        for (unsigned hi = 0; hi < 2; ++hi) {
            unsigned lo = p.empty() ? 0 : (p.back()[3] ^ hi);
            output[prefix_of(p) + "|0," + bit(hi)] = {{bit(lo) + ",0", "1/2"}, {bit(lo) + ",1", "1/2"}};
        }
    Json doc = {{"name", "GS-XOR(" + std::to_string(k) + ")"}};
    doc["gray_syverson"] = {{"LI", {"0"}},
                            {"HI", {"0", "1"}},
                            {"LO", {"0", "1"}},
                            {"HO", {"0", "1"}},
                            {"horizon", k},
                            {"low", {{{"name", "idle"}, {"table", {{"*", {{"0", "1"}}}}}}}},
                            {"high", high},
                            {"output", output}};
    const bool leaks = k >= 2;
    doc["expect"] = {expect("pni", !leaks), expect("no_evidence", !leaks, {{"i", "L"}}), expect("pni_chain", true),
                     expect("is_synchronous", true)};
    return doc;
}

Json l_o_once(std::size_t m) {
    // low events li, lo; high input hi; at most m events of each class.
    std::vector<std::vector<std::string>> traces;
    std::function<void(std::vector<std::string>&, std::size_t, std::size_t, bool, bool)> grow =
        [&](std::vector<std::string>& t, std::size_t nl, std::size_t nh, bool seen_lo, bool seen_hi) {
            if (!t.empty())
                traces.push_back(t);
            if (nl < m) {
                t.push_back("li");
                grow(t, nl + 1, nh, seen_lo, seen_hi);
                t.pop_back();
                if (!seen_lo && !seen_hi) {
                    t.push_back("lo");
                    grow(t, nl + 1, nh, true, seen_hi);
                    t.pop_back();
                }
            }
            if (nh < m) {
                t.push_back("hi");
                grow(t, nl, nh + 1, seen_lo, true);
                t.pop_back();
            }
        };
    std::vector<std::string> t;
    grow(t, 0, 0, false, false);
    Json doc = {{"name", "L_O_ONCE(" + std::to_string(m) + ")"}};
    doc["async_traces"] = {{"low", {"li", "lo"}}, {"high_inputs", {"hi"}}, {"high_outputs", Json::array()},
                           {"traces", traces}};
    doc["expect"] = {expect("total_secrecy", true, two("L", "H")),
                     expect("f_secrecy", true, {{"i", "L"}, {"f", "f_hi"}, {"allowability", "total"}}),
                     expect("async_separability", false),
                     expect("async_gni", false),
                     expect("interleaving_closed", false)};
    return doc;
}

Json shuffle_product(std::size_t a, std::size_t b) {
    auto words = [](std::size_t len, const std::string& x, const std::string& y) {
        std::vector<std::vector<std::string>> out;
        for (std::size_t code = 0; code < (std::size_t{1} << len); ++code) {
            std::vector<std::string> w;
            for (std::size_t s = 0; s < len; ++s)
                w.push_back(code >> s & 1 ? y : x);
            out.push_back(w);
        }
        return out;
    };
    Json doc = {{"name", "SHUFFLE-PRODUCT(" + std::to_string(a) + "," + std::to_string(b) + ")"}};
    doc["async_traces"] = {{"low", {"la", "lb"}},
                           {"high_inputs", {"h"}},
                           {"high_outputs", {"o"}},
                           {"generator", {{"kind", "shuffle"}, {"low", words(a, "la", "lb")}, {"high", words(b, "h", "o")}}}};
    doc["expect"] = {expect("async_separability", true), expect("async_gni", true),
                     expect("interleaving_closed", true), expect("total_secrecy", true, two("L", "H")),
                     expect("f_secrecy", true, {{"i", "L"}, {"f", "f_hi"}, {"allowability", "total"}})};
    return doc;
}

Json sep_gap(std::size_t n) {
    Json traces = Json::array();
    auto trace = [&](std::size_t zeros, const std::string& h) {
        Json t = Json::array();
        for (std::size_t s = 0; s < n; ++s)
            t.push_back({"0", h, s < zeros ? "0" : "1", "0"});
        return t;
    };
    for (std::size_t k = 0; k < n; ++k) {
        traces.push_back(trace(k, "0"));
        traces.push_back(trace(k, "1"));
    }
    traces.push_back(trace(n, "0"));
    Json doc = {{"name", "SEP-GAP(" + std::to_string(n) + ")"}};
    doc["sync_traces"] = {{"LI", {"0"}}, {"HI", {"0", "1"}}, {"LO", {"0", "1"}}, {"HO", {"0"}},
                          {"traces", traces}, {"horizon", n - 1}};
    doc["expect"] = {expect("separability", false),
                     expect("gni", false),
                     expect("synchronous_secrecy", true, two("L", "H")),
                     expect("f_secrecy", true, {{"i", "L"}, {"f", "f_hi"}, {"allowability", "synchronous"}}),
                     expect("horizon_complete", false, {{"horizon", n - 1}})};
    return doc;
}

} // namespace

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"EX1",       "EX2",      "EX3",   "NONMEASURABLE",
                                                   "COSMIC",    "XOR",      "GS-XOR", "L_O_ONCE",
                                                   "SHUFFLE-PRODUCT", "SEP-GAP"};
    return names;
}

Json fixture(const std::string& name, const std::vector<std::string>& params) {
    auto none = [&] {
        if (!params.empty())
            throw Error(name + " takes no parameters");
    };
    if (name == "EX1")
        return none(), ex1();
    if (name == "EX2")
        return none(), ex2();
    if (name == "EX3")
        return none(), ex3();
    if (name == "NONMEASURABLE")
        return none(), nonmeasurable();
    if (name == "COSMIC") {
        std::size_t n = count_param(params, 0, 2, 1, 40, "n");
        Rational eps(1, 2);
        if (params.size() > 1) {
            try {
                eps = parse_rational(params[1]);
            } catch (const std::exception&) {
                throw Error("bad parameter eps '" + params[1] + "'");
            }
        }
        if (params.size() > 2)
            throw Error("COSMIC takes n and eps");
        return cosmic(n, eps);
    }
    if (name == "XOR")
        return xor_channel(count_param(params, 0, 3, 1, 4, "k"));
    if (name == "GS-XOR")
        return gs_xor(count_param(params, 0, 3, 1, 6, "k"));
    if (name == "L_O_ONCE")
        return l_o_once(count_param(params, 0, 2, 1, 3, "m"));
    if (name == "SHUFFLE-PRODUCT")
        return shuffle_product(count_param(params, 0, 2, 0, 3, "a"), count_param(params, 1, 2, 0, 3, "b"));
    if (name == "SEP-GAP")
        return sep_gap(count_param(params, 0, 3, 2, 8, "n"));
    throw Error("unknown fixture '" + name + "'");
}

} // namespace runsec

#include "runsec/spec_io.hpp"

#include "runsec/plaus.hpp"
#include "runsec/secrecy.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

namespace runsec {

namespace {

// ---- located parsing helpers ----

[[noreturn]] void fail_at(const std::string& where, const std::string& what) {
    throw Error(where.empty() ? what : where + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key))
        fail_at(where, "missing field '" + key + "'");
    return j.at(key);
}

std::string str(const Json& j, const std::string& where) {
    if (!j.is_string())
        fail_at(where, "expected a string");
    return j.get<std::string>();
}

std::size_t uint_of(const Json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        fail_at(where, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

std::vector<std::string> strings(const Json& j, const std::string& where) {
    if (!j.is_array())
        fail_at(where, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(str(j[k], where + "/" + std::to_string(k)));
    return out;
}

Rational rational(const Json& j, const std::string& where) {
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        fail_at(where, "rationals are written as strings \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        fail_at(where, e.what());
    }
}

template <class F>
auto located(const std::string& where, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        fail_at(where, e.what());
    } catch (const std::invalid_argument& e) {
        fail_at(where, e.what());
    }
}

AgentId agent_of(const System& sys, const Json& j, const std::string& where) {
    auto name = str(j, where);
    if (!sys.has_agent(name))
        fail_at(where, "unknown agent '" + name + "'");
    return sys.agent(name);
}

RunMeasure measure_of(const System& sys, const Json& j, const std::string& where) {
    std::vector<Rational> w(sys.run_count(), Rational(0));
    if (j.is_array()) {
        if (j.size() != sys.run_count())
            fail_at(where, "expected " + std::to_string(sys.run_count()) + " weights");
        for (std::size_t k = 0; k < j.size(); ++k)
            w[k] = rational(j[k], where + "/" + std::to_string(k));
    } else if (j.is_object()) {
        for (const auto& [id, v] : j.items()) {
            std::size_t r = located(where, [&] { return sys.run_index(id); });
            w[r] = rational(v, where + "/" + id);
        }
    } else {
        fail_at(where, "a measure is an array or an object of run weights");
    }
    return located(where, [&] { return RunMeasure(std::move(w)); });
}

Json measure_json(const System& sys, const RunMeasure& mu) {
    Json out = Json::object();
    for (std::size_t r = 0; r < sys.run_count(); ++r)
        if (mu.weight(r) != 0)
            out[sys.run(r).id] = to_string(mu.weight(r));
    return out;
}

System system_of(const Json& doc) {
    auto agents = strings(field(doc, "agents", ""), "/agents");
    const auto& runs_j = field(doc, "runs", "");
    if (!runs_j.is_array() || runs_j.empty())
        fail_at("/runs", "expected a nonempty array");
    std::vector<Run> runs;
    std::size_t longest = 0;
    for (std::size_t k = 0; k < runs_j.size(); ++k) {
        std::string w = "/runs/" + std::to_string(k);
        const auto& rj = runs_j[k];
        Run r{rj.contains("id") ? str(rj["id"], w + "/id") : "r" + std::to_string(k + 1), {}};
        const auto& st = field(rj, "states", w);
        if (!st.is_array() || st.empty())
            fail_at(w + "/states", "expected a nonempty array");
        for (std::size_t m = 0; m < st.size(); ++m) {
            std::string ws = w + "/states/" + std::to_string(m);
            GlobalState g;
            if (st[m].is_array()) {
                g.locals = strings(st[m], ws);
            } else {
                g.env = st[m].contains("env") ? str(st[m]["env"], ws + "/env") : "";
                g.locals = strings(field(st[m], "locals", ws), ws + "/locals");
            }
            if (g.locals.size() != agents.size())
                fail_at(ws, "expected " + std::to_string(agents.size()) + " local states");
            r.states.push_back(std::move(g));
        }
        longest = std::max(longest, r.states.size());
        runs.push_back(std::move(r));
    }
    std::size_t horizon = doc.contains("horizon") ? uint_of(doc["horizon"], "/horizon") : longest - 1;
    std::string mode = doc.contains("mode") ? str(doc["mode"], "/mode") : "synchronous";
    TimeMode tm;
    if (mode == "synchronous")
        tm = TimeMode::synchronous;
    else if (mode == "asynchronous")
        tm = TimeMode::asynchronous_stutter;
    else
        fail_at("/mode", "mode is 'synchronous' or 'asynchronous'");
    return located("/runs", [&] { return System(agents, std::move(runs), horizon, tm); });
}

Allowability allowability_of(const System& sys, const Json& j, const std::string& where) {
    auto kind = str(field(j, "kind", where), where + "/kind");
    if (kind == "total")
        return Allowability::make_total();
    if (kind == "synchronous")
        return Allowability::make_synchronous();
    if (kind == "semisynchronous")
        return Allowability::make_semisynchronous(uint_of(field(j, "epsilon", where), where + "/epsilon"));
    if (kind == "explicit") {
        std::map<Point, std::vector<Point>> table;
        const auto& t = field(j, "table", where);
        if (!t.is_object())
            fail_at(where + "/table", "expected an object from points to point lists");
        for (const auto& [at, list] : t.items()) {
            Point p = located(where + "/table", [&] { return parse_point(sys, at); });
            for (const auto& q : strings(list, where + "/table/" + at))
                table[p].push_back(located(where + "/table/" + at, [&] { return parse_point(sys, q); }));
        }
        return Allowability::make_explicit(std::move(table));
    }
    fail_at(where + "/kind", "unknown allowability kind '" + kind + "'");
}

Json allowability_json(const System& sys, const Allowability& c) {
    switch (c.kind) {
    case Allowability::Kind::total: return {{"kind", "total"}};
    case Allowability::Kind::synchronous: return {{"kind", "synchronous"}};
    case Allowability::Kind::semisynchronous: return {{"kind", "semisynchronous"}, {"epsilon", c.epsilon}};
    case Allowability::Kind::explicit_table: {
        Json t = Json::object();
        for (const auto& [p, qs] : c.table) {
            Json list = Json::array();
            for (auto q : qs)
                list.push_back(point_text(sys, q));
            t[point_text(sys, p)] = list;
        }
        return {{"kind", "explicit"}, {"table", t}};
    }
    }
    return {};
}

SyncTraceSystem sync_traces_of(const Json& j, const std::string& where) {
    SyncTraceSystem s;
    s.LI = strings(field(j, "LI", where), where + "/LI");
    s.HI = strings(field(j, "HI", where), where + "/HI");
    s.LO = strings(field(j, "LO", where), where + "/LO");
    s.HO = strings(field(j, "HO", where), where + "/HO");
    if (j.contains("traces")) {
        const auto& ts = j["traces"];
        for (std::size_t k = 0; k < ts.size(); ++k) {
            std::string w = where + "/traces/" + std::to_string(k);
            SyncTrace t;
            for (std::size_t m = 0; m < ts[k].size(); ++m) {
                auto v = strings(ts[k][m], w + "/" + std::to_string(m));
                if (v.size() != 4)
                    fail_at(w + "/" + std::to_string(m), "a trace tuple is [l_i, h_i, l_o, h_o]");
                t.push_back({v[0], v[1], v[2], v[3]});
            }
            s.traces.push_back(std::move(t));
        }
    }
    if (j.contains("generator")) {
        std::string w = where + "/generator";
        const auto& g = j["generator"];
        if (str(field(g, "kind", w), w + "/kind") != "product")
            fail_at(w + "/kind", "synchronous trace generators: 'product'");
        auto seqs = [&](const char* key) {
            std::vector<std::vector<std::pair<std::string, std::string>>> out;
            const auto& a = field(g, key, w);
            for (std::size_t k = 0; k < a.size(); ++k) {
                std::vector<std::pair<std::string, std::string>> seq;
                for (std::size_t m = 0; m < a[k].size(); ++m) {
                    auto v = strings(a[k][m], w + "/" + key + "/" + std::to_string(k) + "/" + std::to_string(m));
                    if (v.size() != 2)
                        fail_at(w + "/" + key, "product components are [input, output] pairs");
                    seq.emplace_back(v[0], v[1]);
                }
                out.push_back(std::move(seq));
            }
            return out;
        };
        auto lows = seqs("low");
        auto highs = seqs("high");
        for (const auto& l : lows)
            for (const auto& h : highs) {
                if (l.size() != h.size())
                    fail_at(w, "product components must share one length");
                SyncTrace t;
                for (std::size_t m = 0; m < l.size(); ++m)
                    t.push_back({l[m].first, h[m].first, l[m].second, h[m].second});
                if (std::find(s.traces.begin(), s.traces.end(), t) == s.traces.end())
                    s.traces.push_back(std::move(t));
            }
    }
    located(where, [&] { validate(s); });
    return s;
}

Json sync_traces_json(const SyncTraceSystem& s) {
    Json ts = Json::array();
    for (const auto& t : s.traces) {
        Json tj = Json::array();
        for (const auto& x : t)
            tj.push_back({x.li, x.hi, x.lo, x.ho});
        ts.push_back(tj);
    }
    return {{"LI", s.LI}, {"HI", s.HI}, {"LO", s.LO}, {"HO", s.HO}, {"traces", ts}};
}

AsyncTraceSystem async_traces_of(const Json& j, const std::string& where) {
    AsyncTraceSystem s;
    s.low = strings(field(j, "low", where), where + "/low");
    s.high_inputs = j.contains("high_inputs") ? strings(j["high_inputs"], where + "/high_inputs")
                                              : std::vector<std::string>{};
    s.high_outputs = j.contains("high_outputs") ? strings(j["high_outputs"], where + "/high_outputs")
                                                : std::vector<std::string>{};
    std::set<AsyncTrace> all;
    if (j.contains("traces")) {
        const auto& ts = j["traces"];
        for (std::size_t k = 0; k < ts.size(); ++k)
            all.insert(strings(ts[k], where + "/traces/" + std::to_string(k)));
    }
    if (j.contains("generator")) {
        std::string w = where + "/generator";
        const auto& g = j["generator"];
        if (str(field(g, "kind", w), w + "/kind") != "shuffle")
            fail_at(w + "/kind", "asynchronous trace generators: 'shuffle'");
        const auto& lows = field(g, "low", w);
        const auto& highs = field(g, "high", w);
        for (std::size_t a = 0; a < lows.size(); ++a)
            for (std::size_t b = 0; b < highs.size(); ++b)
                for_each_interleaving(strings(lows[a], w + "/low"), strings(highs[b], w + "/high"),
                                      [&](const AsyncTrace& t) {
                                          for (std::size_t k = 1; k <= t.size(); ++k)
                                              all.insert(AsyncTrace(t.begin(), t.begin() + static_cast<long>(k)));
                                          return true;
                                      });
    }
    all.erase(AsyncTrace{});
    s.traces.assign(all.begin(), all.end());
    located(where, [&] { validate(s); });
    return s;
}

Json async_traces_json(const AsyncTraceSystem& s) {
    Json ts = Json::array();
    for (const auto& t : s.traces)
        ts.push_back(t);
    return {{"low", s.low}, {"high_inputs", s.high_inputs}, {"high_outputs", s.high_outputs}, {"traces", ts}};
}

std::string view_key(const View& v) {
    std::string out = "<";
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? "," : "") + v[k].first + "/" + v[k].second;
    return out + ">";
}

std::string prefix_key(const SyncTrace& t) {
    std::string out = "<";
    for (std::size_t k = 0; k < t.size(); ++k)
        out += (k ? "," : "") + t[k].li + "/" + t[k].hi + "/" + t[k].lo + "/" + t[k].ho;
    return out + ">";
}

Dist dist_of(const Json& row, const std::string& where) {
    Dist d;
    if (!row.is_object())
        fail_at(where, "a distribution row maps values to probabilities");
    for (const auto& [v, p] : row.items())
        d[v] = rational(p, where + "/" + v);
    return d;
}

ProbProtocol prob_protocol_of(const Json& j, const std::string& where) {
    ProbProtocol p;
    p.name = str(field(j, "name", where), where + "/name");
    auto table = std::make_shared<std::map<std::string, Dist>>();
    const auto& t = field(j, "table", where);
    for (const auto& [key, row] : t.items())
        (*table)[key] = dist_of(row, where + "/table/" + key);
    std::string name = p.name;
    p.next = [table, name](const View& v) {
        auto it = table->find(view_key(v));
        if (it == table->end())
            it = table->find("*");
        if (it == table->end())
            throw Error("protocol '" + name + "' has no row for view " + view_key(v));
        return it->second;
    };
    return p;
}

ProbProtocolSystem gray_syverson_of(const Json& j, const std::string& where) {
    ProbProtocolSystem pps;
    pps.LI = strings(field(j, "LI", where), where + "/LI");
    pps.HI = strings(field(j, "HI", where), where + "/HI");
    pps.LO = strings(field(j, "LO", where), where + "/LO");
    pps.HO = strings(field(j, "HO", where), where + "/HO");
    pps.horizon = uint_of(field(j, "horizon", where), where + "/horizon");
    const auto& lows = field(j, "low", where);
    for (std::size_t k = 0; k < lows.size(); ++k)
        pps.low.push_back(prob_protocol_of(lows[k], where + "/low/" + std::to_string(k)));
    const auto& highs = field(j, "high", where);
    for (std::size_t k = 0; k < highs.size(); ++k)
        pps.high.push_back(prob_protocol_of(highs[k], where + "/high/" + std::to_string(k)));
    auto table = std::make_shared<std::map<std::string, OutputDist>>();
    const auto& out = field(j, "output", where);
    for (const auto& [key, row] : out.items()) {
        std::string w = where + "/output/" + key;
        OutputDist d;
        if (!row.is_object())
            fail_at(w, "an output row maps \"l_o,h_o\" to probabilities");
        for (const auto& [pair, p] : row.items()) {
            auto c = pair.find(',');
            if (c == std::string::npos)
                fail_at(w + "/" + pair, "output keys are \"l_o,h_o\"");
            d[{pair.substr(0, c), pair.substr(c + 1)}] = rational(p, w + "/" + pair);
        }
        (*table)[key] = std::move(d);
    }
    pps.output = [table](const SyncTrace& t, const std::string& li, const std::string& hi) {
        for (const auto& key : {prefix_key(t) + "|" + li + "," + hi, "*|" + li + "," + hi, std::string("*")}) {
            auto it = table->find(key);
            if (it != table->end())
                return it->second;
        }
        throw Error("output model has no row for " + prefix_key(t) + " with inputs " + li + "," + hi);
    };
    return pps;
}

InfoFunction info_function_of(const System& sys, const Json& j, const std::string& where) {
    InfoFunction f{agent_of(sys, field(j, "agent", where), where + "/agent"), {}};
    const auto& m = field(j, "map", where);
    for (const auto& [k, v] : m.items())
        f.map[k] = str(v, where + "/map/" + k);
    located(where, [&] { validate_info_function(f, sys); });
    return f;
}

StatePredicate predicate_of(const System& sys, const Json& j, const std::string& where) {
    StatePredicate sp;
    if (j.contains("agent") && !j["agent"].is_null()) {
        auto a = str(j["agent"], where + "/agent");
        if (!sys.has_agent(a))
            fail_at(where + "/agent", "unknown agent '" + a + "'");
        sp.agent = a;
    }
    auto toks = strings(field(j, "tokens", where), where + "/tokens");
    sp.tokens.insert(toks.begin(), toks.end());
    return sp;
}

AdversarialSystem adversarial_of(const System& sys, const Json& doc) {
    if (doc.contains("init")) {
        const std::string w = "/init";
        const auto& ij = doc["init"];
        InitStructure init;
        const auto& vals = field(ij, "values", w);
        for (std::size_t k = 0; k < vals.size(); ++k)
            init.values.push_back(strings(vals[k], w + "/values/" + std::to_string(k)));
        const auto& ch = field(ij, "choice", w);
        init.choice.resize(sys.run_count());
        for (const auto& [id, v] : ch.items()) {
            std::size_t r = located(w + "/choice", [&] { return sys.run_index(id); });
            init.choice[r] = strings(v, w + "/choice/" + id);
        }
        std::map<std::string, RunMeasure> ms;
        for (const auto& [key, m] : field(ij, "measures", w).items())
            ms.emplace(key, measure_of(sys, m, w + "/measures/" + key));
        return located(w, [&] { return AdversarialSystem::from_init(sys, init, ms); });
    }
    const std::string w = "/adversarial/cells";
    const auto& cells = field(field(doc, "adversarial", ""), "cells", "/adversarial");
    std::vector<std::string> ids;
    std::vector<std::vector<std::size_t>> runs;
    std::vector<RunMeasure> ms;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::string wc = w + "/" + std::to_string(c);
        ids.push_back(str(field(cells[c], "id", wc), wc + "/id"));
        std::vector<std::size_t> rs;
        for (const auto& id : strings(field(cells[c], "runs", wc), wc + "/runs"))
            rs.push_back(located(wc + "/runs", [&] { return sys.run_index(id); }));
        runs.push_back(std::move(rs));
        ms.push_back(measure_of(sys, field(cells[c], "measure", wc), wc + "/measure"));
    }
    return located(w, [&] { return AdversarialSystem(sys, ids, runs, ms); });
}

Json adversarial_json(const AdversarialSystem& adv) {
    const System& sys = adv.base();
    if (adv.init()) {
        const auto& init = *adv.init();
        Json choice = Json::object(), ms = Json::object();
        for (std::size_t r = 0; r < sys.run_count(); ++r)
            choice[sys.run(r).id] = init.choice[r];
        for (std::size_t c = 0; c < adv.cell_count(); ++c)
            ms[adv.cell_id(c)] = measure_json(sys, adv.cell_measure(c));
        return {{"init", {{"values", init.values}, {"choice", choice}, {"measures", ms}}}};
    }
    Json cells = Json::array();
    for (std::size_t c = 0; c < adv.cell_count(); ++c) {
        Json rs = Json::array();
        const auto& cr = adv.cell_runs(c);
        for (auto r = cr.find_first(); r != RunSet::npos; r = cr.find_next(r))
            rs.push_back(sys.run(r).id);
        cells.push_back({{"id", adv.cell_id(c)}, {"runs", rs}, {"measure", measure_json(sys, adv.cell_measure(c))}});
    }
    return {{"adversarial", {{"cells", cells}}}};
}

} // namespace

Point parse_point(const System& sys, const std::string& text) {
    auto c = text.rfind(',');
    if (c == std::string::npos)
        throw Error("point '" + text + "' is not 'run,time'");
    std::size_t r = sys.run_index(text.substr(0, c));
    std::size_t m;
    try {
        m = std::stoul(text.substr(c + 1));
    } catch (const std::exception&) {
        throw Error("point '" + text + "' has a bad time");
    }
    Point p{r, m};
    sys.check_point(p);
    return p;
}

std::string point_text(const System& sys, Point p) { return sys.run(p.run).id + "," + std::to_string(p.time); }

Loaded load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(path + ": " + e.what());
    }
    try {
        return load_json(doc);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

Loaded load_json(const Json& doc) {
    if (!doc.is_object())
        fail_at("", "a spec document is a JSON object");
    Loaded l;
    l.source = doc;
    l.name = doc.contains("name") ? str(doc["name"], "/name") : "";
    if (doc.contains("sync_traces"))
        l.sync_traces = sync_traces_of(doc["sync_traces"], "/sync_traces");
    if (doc.contains("async_traces"))
        l.async_traces = async_traces_of(doc["async_traces"], "/async_traces");
    if (doc.contains("gray_syverson")) {
        l.gray_syverson = gray_syverson_of(doc["gray_syverson"], "/gray_syverson");
        l.adversarial = located("/gray_syverson", [&] { return build_gray_syverson(*l.gray_syverson); });
    }
    if (doc.contains("runs")) {
        l.system = system_of(doc);
    } else if (l.sync_traces) {
        std::optional<std::size_t> h;
        if (doc["sync_traces"].contains("horizon"))
            h = uint_of(doc["sync_traces"]["horizon"], "/sync_traces/horizon");
        l.system = located("/sync_traces", [&] { return runs_from_sync(*l.sync_traces, h); });
    } else if (l.async_traces) {
        std::optional<std::size_t> h;
        if (doc["async_traces"].contains("horizon"))
            h = uint_of(doc["async_traces"]["horizon"], "/async_traces/horizon");
        l.system = located("/async_traces", [&] { return runs_from_async(*l.async_traces, h); });
    } else if (l.adversarial) {
        l.system = l.adversarial->base();
    }
    if (doc.contains("strategies")) {
        const auto& s = doc["strategies"];
        if (s.is_string()) {
            if (s.get<std::string>() != "all")
                fail_at("/strategies", "strategies are \"all\" or a list of tables");
        } else {
            std::vector<Protocol> ps;
            for (std::size_t k = 0; k < s.size(); ++k) {
                std::string w = "/strategies/" + std::to_string(k);
                Protocol p{str(field(s[k], "name", w), w + "/name"), {}};
                for (const auto& [v, x] : field(s[k], "table", w).items())
                    p.table[v] = str(x, w + "/table/" + v);
                ps.push_back(std::move(p));
            }
            l.strategies = std::move(ps);
        }
    }
    const bool has_sys = l.system.has_value();
    auto need_sys = [&](const char* what) {
        if (!has_sys)
            fail_at(std::string("/") + what, "needs runs or a trace block");
    };
    if (doc.contains("measure")) {
        need_sys("measure");
        l.measure = measure_of(*l.system, doc["measure"], "/measure");
        located("/measure", [&] { validate_run_measure(*l.measure, *l.system); });
    }
    if (doc.contains("measures")) {
        need_sys("measures");
        for (std::size_t k = 0; k < doc["measures"].size(); ++k) {
            std::string at = "/measures/" + std::to_string(k);
            l.measures.push_back(measure_of(*l.system, doc["measures"][k], at));
            located(at, [&] { validate_run_measure(l.measures.back(), *l.system); });
        }
    }
    if (doc.contains("info_functions")) {
        need_sys("info_functions");
        for (const auto& [name, f] : doc["info_functions"].items())
            l.info_functions.emplace(name, info_function_of(*l.system, f, "/info_functions/" + name));
    }
    if (doc.contains("allowability")) {
        need_sys("allowability");
        for (const auto& [name, c] : doc["allowability"].items())
            l.allowability.emplace(name, allowability_of(*l.system, c, "/allowability/" + name));
    }
    if (doc.contains("interpretation")) {
        need_sys("interpretation");
        for (const auto& [prop, preds] : doc["interpretation"].items()) {
            std::vector<StatePredicate> ps;
            for (std::size_t k = 0; k < preds.size(); ++k)
                ps.push_back(predicate_of(*l.system, preds[k], "/interpretation/" + prop + "/" + std::to_string(k)));
            l.interpretation[prop] = std::move(ps);
        }
    }
    if (doc.contains("init") || doc.contains("adversarial")) {
        need_sys("adversarial");
        l.adversarial = adversarial_of(*l.system, doc);
    }
    if (doc.contains("expect")) {
        const auto& ex = doc["expect"];
        if (!ex.is_array())
            fail_at("/expect", "expected an array");
        for (std::size_t k = 0; k < ex.size(); ++k) {
            std::string w = "/expect/" + std::to_string(k);
            Expectation e;
            e.check = str(field(ex[k], "check", w), w + "/check");
            e.params = ex[k];
            if (!ex[k].contains("holds") || !ex[k]["holds"].is_boolean())
                fail_at(w, "missing boolean 'holds'");
            e.holds = ex[k]["holds"].get<bool>();
            if (ex[k].contains("values"))
                for (std::size_t v = 0; v < ex[k]["values"].size(); ++v)
                    e.values.push_back(rational(ex[k]["values"][v], w + "/values/" + std::to_string(v)));
            l.expect.push_back(std::move(e));
        }
    }
    return l;
}

Json system_json(const System& sys, const RunMeasure* mu) {
    Json runs = Json::array();
    for (const auto& r : sys.runs()) {
        Json states = Json::array();
        for (const auto& g : r.states) {
            if (g.env.empty())
                states.push_back(g.locals);
            else
                states.push_back({{"env", g.env}, {"locals", g.locals}});
        }
        runs.push_back({{"id", r.id}, {"states", states}});
    }
    Json out = {{"agents", sys.agents()},
                {"horizon", sys.horizon()},
                {"mode", sys.mode() == TimeMode::synchronous ? "synchronous" : "asynchronous"},
                {"runs", runs}};
    if (mu)
        out["measure"] = measure_json(sys, *mu);
    return out;
}

Json emit(const Loaded& l) {
    Json out = Json::object();
    if (!l.name.empty())
        out["name"] = l.name;
    const bool explicit_runs = l.source.contains("runs") || (!l.sync_traces && !l.async_traces && !l.gray_syverson);
    if (l.system && explicit_runs) {
        Json sys = system_json(*l.system);
        for (auto& [k, v] : sys.items())
            out[k] = v;
    }
    if (l.sync_traces) {
        out["sync_traces"] = sync_traces_json(*l.sync_traces);
        if (l.source.contains("sync_traces") && l.source["sync_traces"].contains("horizon"))
            out["sync_traces"]["horizon"] = l.source["sync_traces"]["horizon"];
    }
    if (l.async_traces) {
        out["async_traces"] = async_traces_json(*l.async_traces);
        if (l.source.contains("async_traces") && l.source["async_traces"].contains("horizon"))
            out["async_traces"]["horizon"] = l.source["async_traces"]["horizon"];
    }
    if (l.gray_syverson)
        out["gray_syverson"] = l.source.at("gray_syverson");
    if (l.strategies) {
        Json ss = Json::array();
        for (const auto& p : *l.strategies)
            ss.push_back({{"name", p.name}, {"table", p.table}});
        out["strategies"] = ss;
    } else if (l.source.contains("strategies")) {
        out["strategies"] = "all";
    }
    if (l.system && l.measure)
        out["measure"] = measure_json(*l.system, *l.measure);
    if (l.system && !l.measures.empty()) {
        Json ms = Json::array();
        for (const auto& m : l.measures)
            ms.push_back(measure_json(*l.system, m));
        out["measures"] = ms;
    }
    if (!l.info_functions.empty()) {
        Json fs = Json::object();
        for (const auto& [name, f] : l.info_functions)
            fs[name] = {{"agent", l.system->agent_name(f.agent)}, {"map", f.map}};
        out["info_functions"] = fs;
    }
    if (!l.allowability.empty()) {
        Json cs = Json::object();
        for (const auto& [name, c] : l.allowability)
            cs[name] = allowability_json(*l.system, c);
        out["allowability"] = cs;
    }
    if (!l.interpretation.empty()) {
        Json is = Json::object();
        for (const auto& [prop, preds] : l.interpretation) {
            Json ps = Json::array();
            for (const auto& sp : preds) {
                Json pj = {{"agent", sp.agent ? Json(*sp.agent) : Json(nullptr)}, {"tokens", sp.tokens}};
                ps.push_back(pj);
            }
            is[prop] = ps;
        }
        out["interpretation"] = is;
    }
    if (l.adversarial && !l.gray_syverson) {
        Json adv = adversarial_json(*l.adversarial);
        for (auto& [k, v] : adv.items())
            out[k] = v;
    }
    if (!l.expect.empty()) {
        Json ex = Json::array();
        for (const auto& e : l.expect)
            ex.push_back(e.params);
        out["expect"] = ex;
    }
    return out;
}

// ---- checks ----

namespace {

struct Ctx {
    const Loaded& l;
    const Json& e;

    std::string where() const { return "check '" + e.value("check", std::string("?")) + "'"; }
    const System& sys() const {
        if (!l.system)
            fail_at(where(), "the spec has no run system");
        return *l.system;
    }
    AgentId agent(const char* key) const {
        if (!e.contains(key))
            fail_at(where(), std::string("missing parameter '") + key + "'");
        return agent_of(sys(), e[key], where() + "/" + key);
    }
    const RunMeasure& mu() const {
        if (!l.measure)
            fail_at(where(), "the spec has no measure");
        return *l.measure;
    }
    const AdversarialSystem& adv() const {
        if (!l.adversarial)
            fail_at(where(), "the spec has no adversarial structure");
        return *l.adversarial;
    }
    const SyncTraceSystem& sync() const {
        if (!l.sync_traces)
            fail_at(where(), "the spec has no synchronous trace block");
        return *l.sync_traces;
    }
    const AsyncTraceSystem& async() const {
        if (!l.async_traces)
            fail_at(where(), "the spec has no asynchronous trace block");
        return *l.async_traces;
    }
    std::string text(const char* key, const std::string& dflt) const {
        return e.contains(key) ? str(e[key], where() + "/" + key) : dflt;
    }
    Allowability allowability() const {
        auto name = text("allowability", "total");
        auto it = l.allowability.find(name);
        if (it != l.allowability.end())
            return it->second;
        if (name == "total")
            return Allowability::make_total();
        if (name == "synchronous")
            return Allowability::make_synchronous();
        fail_at(where(), "unknown allowability function '" + name + "'");
    }
    InfoFunction info_function() const {
        auto name = text("f", "");
        auto it = l.info_functions.find(name);
        if (it != l.info_functions.end())
            return it->second;
        if (name == "f_hi" && l.sync_traces && !l.source.contains("runs"))
            return high_input_function(sys());
        if (name == "f_hi" && l.async_traces && !l.source.contains("runs"))
            return async_high_input_function(*l.async_traces, sys());
        fail_at(where(), "unknown information function '" + name + "'");
    }
};

void record_verdict(CheckRecord& rec, const SecrecyVerdict& v) {
    rec.holds = v.holds;
    rec.failure = to_string(v.failure);
    rec.counterexample = v.counterexample;
    rec.note = v.note;
}

// Independent re-check of a possibilistic point counterexample (p, q).
bool reverify(const System& sys, AgentId i, AgentId j, const Counterexample& cx, const Allowability* c) {
    if (cx.points.size() != 2)
        return false;
    PointSet ki = info_set(sys, i, cx.points[0]).points;
    PointSet kj = info_set(sys, j, cx.points[1]).points;
    if (!c)
        return !runs_through(sys, ki).intersects(runs_through(sys, kj));
    PointSet cp = allowability_points(*c, sys, cx.points[0]);
    return cp.test(sys.index(cx.points[1])) && !(ki & kj & cp).any();
}

template <class D>
SecrecyVerdict plaus_check(const PlausibilitySpace<D>& space, const System& sys, AgentId i, AgentId j,
                           PlausVariant v) {
    return check_plaus_secrecy(space, sys, i, j, v);
}

} // namespace

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {
        "total_secrecy",        "synchronous_secrecy",  "c_secrecy",         "run_based_secrecy",
        "f_secrecy",            "f_run_based_secrecy",  "prob_total_secrecy", "prob_sync_secrecy",
        "run_based_prob_secrecy", "independence",       "prob_syntactic",    "oracle_c_secrecy",
        "oracle_run_based",     "no_evidence",          "generalized_secrecy", "evidential_equivalence",
        "separability",         "gni",                  "horizon_complete",  "async_separability",
        "async_gni",            "interleaving_closed",  "nos",               "nos_reduction",
        "pni",                  "pni_chain",            "is_synchronous",    "perfect_recall",
        "timing_only",          "plaus_secrecy",        "formula"};
    return names;
}

CheckRecord run_check(const Loaded& l, const Json& entry) {
    Ctx x{l, entry};
    CheckRecord rec;
    rec.check = str(field(entry, "check", "expect entry"), "expect entry/check");
    rec.params = entry;
    const auto start = std::chrono::steady_clock::now();
    const std::string& c = rec.check;
    if (c == "total_secrecy" || c == "synchronous_secrecy" || c == "c_secrecy") {
        const System& sys = x.sys();
        AgentId i = x.agent("i"), j = x.agent("j");
        Allowability al = c == "total_secrecy"         ? Allowability::make_total()
                          : c == "synchronous_secrecy" ? Allowability::make_synchronous()
                                                       : x.allowability();
        auto v = c == "synchronous_secrecy" ? check_synchronous_secrecy(sys, i, j)
                 : c == "total_secrecy"     ? check_total_secrecy(sys, i, j)
                                            : check_C_secrecy(sys, i, j, al);
        record_verdict(rec, v);
        if (v.counterexample)
            rec.reverified = reverify(sys, i, j, *v.counterexample, &al);
    } else if (c == "run_based_secrecy") {
        AgentId i = x.agent("i"), j = x.agent("j");
        auto v = check_run_based_secrecy(x.sys(), i, j);
        record_verdict(rec, v);
        if (v.counterexample)
            rec.reverified = reverify(x.sys(), i, j, *v.counterexample, nullptr);
    } else if (c == "f_secrecy") {
        record_verdict(rec, check_f_secrecy(x.sys(), x.agent("i"), x.info_function(), x.allowability()));
    } else if (c == "f_run_based_secrecy") {
        record_verdict(rec, check_f_run_based_secrecy(x.sys(), x.agent("i"), x.info_function()));
    } else if (c == "prob_total_secrecy") {
        record_verdict(rec, check_prob_total_secrecy(x.sys(), ht_assignment(x.sys(), x.mu()), x.agent("i"),
                                                     x.agent("j")));
    } else if (c == "prob_sync_secrecy") {
        record_verdict(rec, check_prob_sync_secrecy(x.sys(), x.mu(), x.agent("i"), x.agent("j")));
    } else if (c == "run_based_prob_secrecy") {
        record_verdict(rec, check_run_based_prob_secrecy(x.sys(), x.mu(), x.agent("i"), x.agent("j")));
    } else if (c == "independence") {
        rec.holds = check_independence(x.sys(), x.mu(), x.agent("i"), x.agent("j"));
    } else if (c == "prob_syntactic") {
        auto variant = x.text("variant", "run_based");
        if (variant != "run_based" && variant != "sync")
            fail_at(x.where(), "variant is 'sync' or 'run_based'");
        auto r = oracle_prob_syntactic(x.sys(), x.mu(), x.agent("i"), x.agent("j"),
                                       variant == "sync" ? ProbVariant::sync : ProbVariant::run_based);
        rec.holds = r.holds;
        if (!r.holds) {
            Counterexample cx{{*r.first, *r.second}, {r.first_value, r.second_value}, {}, {}};
            cx.detail = "j-local extension {";
            for (std::size_t k = 0; k < r.extension.size(); ++k)
                cx.detail += (k ? "," : "") + r.extension[k];
            cx.detail += "} has probability " + to_string(r.first_value) + " at " + x.sys().point_label(*r.first) +
                         " but " + to_string(r.second_value) + " at " + x.sys().point_label(*r.second);
            rec.counterexample = cx;
            rec.failure = to_string(Failure::unequal);
        }
    } else if (c == "oracle_c_secrecy") {
        rec.holds = oracle_C_secrecy(x.sys(), x.agent("i"), x.agent("j"), x.allowability());
    } else if (c == "oracle_run_based") {
        rec.holds = oracle_run_based_secrecy(x.sys(), x.agent("i"), x.agent("j"));
    } else if (c == "no_evidence") {
        auto reading = x.text("reading", "compatible_cells");
        if (reading != "compatible_cells" && reading != "meeting_cells")
            fail_at(x.where(), "reading is 'compatible_cells' or 'meeting_cells'");
        record_verdict(rec, check_no_evidence(x.adv(), x.agent("i"), reading == "compatible_cells"
                                                                        ? NoEvidenceReading::compatible_cells
                                                                        : NoEvidenceReading::meeting_cells));
    } else if (c == "generalized_secrecy") {
        MeasureFamily fam;
        auto kind = x.text("family", "cells");
        if (kind == "cells")
            fam.kind = MeasureFamily::Kind::cells;
        else if (kind == "init_product")
            fam = {MeasureFamily::Kind::init_product, x.agent("i"), {}};
        else
            fail_at(x.where(), "family is 'cells' or 'init_product'");
        GeneralizedOptions opt;
        opt.synchronous = entry.value("synchronous", false);
        opt.samples = entry.value("samples", opt.samples);
        opt.seed = entry.value("seed", opt.seed);
        record_verdict(rec, check_generalized_secrecy(x.adv(), x.agent("i"), x.agent("j"), fam, opt));
    } else if (c == "evidential_equivalence") {
        auto r = check_evidential_equivalence(x.adv(), x.agent("i"));
        rec.holds = r.hypothesis_met && r.agree();
        rec.note = r.label + "; no evidence: " + (r.no_evidence ? "yes" : "no") +
                   ", generalized secrecy: " + (r.generalized ? "yes" : "no");
    } else if (c == "separability") {
        record_verdict(rec, check_separability(x.sync()));
    } else if (c == "gni") {
        record_verdict(rec, check_gni_sync(x.sync()));
    } else if (c == "horizon_complete") {
        rec.holds = is_horizon_complete(x.sync(), entry.value("horizon", trace_length(x.sync())));
    } else if (c == "async_separability") {
        record_verdict(rec, check_async_separability(x.async()));
    } else if (c == "async_gni") {
        record_verdict(rec, check_async_gni(x.async()));
    } else if (c == "interleaving_closed") {
        rec.holds = is_closed_under_interleavings(x.async());
    } else if (c == "nos" || c == "nos_reduction") {
        auto strategies = l.strategies ? *l.strategies : enumerate_strategies(x.sync());
        auto r = nos_report(x.sync(), strategies);
        if (c == "nos") {
            record_verdict(rec, r.verdict);
            rec.note += std::string(rec.note.empty() ? "" : "; ") +
                        (r.agree() ? "agrees with synchronous f_strat-secrecy"
                                   : "differs from synchronous f_strat-secrecy");
        } else {
            rec.holds = r.agree();
            rec.note = std::string("trace definition ") + (r.verdict.holds ? "holds" : "fails") +
                       ", f_strat-secrecy " + (r.reduction.holds ? "holds" : "fails") +
                       (r.covered ? "" : "; some traces follow no supplied strategy");
        }
    } else if (c == "pni" || c == "pni_chain") {
        if (!l.gray_syverson)
            fail_at(x.where(), "the spec has no gray_syverson block");
        if (c == "pni") {
            record_verdict(rec, check_pni(x.adv()));
        } else {
            GeneralizedOptions opt;
            opt.samples = entry.value("samples", opt.samples);
            opt.seed = entry.value("seed", opt.seed);
            auto r = pni_report(*l.gray_syverson, opt);
            rec.holds = r.agree();
            auto yn = [](bool b) { return b ? "holds" : "fails"; };
            rec.note = std::string("pni ") + yn(r.pni.holds) + ", no evidence " + yn(r.no_evidence) +
                       ", generalized run-based " + yn(r.generalized_run_based) + ", generalized synchronous " +
                       yn(r.generalized_sync);
        }
    } else if (c == "is_synchronous") {
        rec.holds = is_synchronous(x.sys());
    } else if (c == "perfect_recall") {
        rec.holds = has_perfect_recall(x.sys(), x.agent("i"));
    } else if (c == "timing_only") {
        rec.holds = depends_only_on_timing(x.allowability(), x.sys());
    } else if (c == "plaus_secrecy") {
        const System& sys = x.sys();
        AgentId i = x.agent("i"), j = x.agent("j");
        auto vs = x.text("variant", "run_based");
        PlausVariant v = vs == "total" ? PlausVariant::total
                         : vs == "sync" ? PlausVariant::sync
                         : vs == "run_based" ? PlausVariant::run_based
                                             : (fail_at(x.where(), "variant is total, sync or run_based"),
                                                PlausVariant::total);
        const bool runs = v == PlausVariant::run_based;
        auto domain = x.text("domain", "trivial");
        if (domain == "trivial") {
            record_verdict(rec, runs ? plaus_check(trivial_run_space(sys), sys, i, j, v)
                                     : plaus_check(trivial_point_space(sys), sys, i, j, v));
        } else if (domain == "probability") {
            record_verdict(rec, runs ? plaus_check(probability_run_space(x.mu()), sys, i, j, v)
                                     : plaus_check(probability_point_space(common_prior_for_sync_standard(sys, x.mu())),
                                                   sys, i, j, v));
        } else if (domain == "measure_vector") {
            std::vector<RunMeasure> ms = l.measures;
            if (ms.empty())
                ms.push_back(x.mu());
            if (runs) {
                record_verdict(rec, plaus_check(measure_vector_run_space(ms), sys, i, j, v));
            } else {
                std::vector<CommonPrior> cps;
                for (const auto& m : ms)
                    cps.push_back(common_prior_for_sync_standard(sys, m));
                record_verdict(rec, plaus_check(measure_vector_point_space(cps), sys, i, j, v));
            }
        } else {
            fail_at(x.where(), "domain is trivial, probability or measure_vector");
        }
    } else if (c == "formula") {
        auto f = located(x.where(), [&] { return parse_formula(x.text("formula", "")); });
        Point p = located(x.where(), [&] { return parse_point(x.sys(), x.text("at", "")); });
        InterpretedSystem is{x.sys(), l.interpretation, l.measure ? &*l.measure : nullptr};
        rec.holds = eval(is, p, *f);
    } else {
        throw Error("unknown check name '" + c + "'");
    }
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

bool Report::all_match() const {
    for (const auto& r : records)
        if (!r.matches)
            return false;
    return true;
}

Report run_checks(const Loaded& l, const std::vector<std::string>& only) {
    for (const auto& n : only)
        if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
            throw Error("unknown check name '" + n + "'");
    Report rep;
    rep.spec = l.name;
    for (const auto& e : l.expect) {
        if (!only.empty() && std::find(only.begin(), only.end(), e.check) == only.end())
            continue;
        auto rec = run_check(l, e.params);
        rec.expected = e.holds;
        rec.matches = rec.holds == e.holds;
        if (!e.values.empty())
            rec.matches = rec.matches && rec.counterexample && rec.counterexample->values == e.values;
        if (rec.reverified && !*rec.reverified)
            rec.matches = false;
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

namespace {

std::string params_text(const Json& p) {
    std::string out;
    for (const auto& [k, v] : p.items()) {
        if (k == "check" || k == "holds" || k == "values")
            continue;
        out += " " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
    }
    return out;
}

} // namespace

std::string report_text(const Report& r) {
    std::ostringstream out;
    if (!r.spec.empty())
        out << "spec " << r.spec << "\n";
    for (const auto& c : r.records) {
        out << (c.matches ? "[ok]   " : "[DIFF] ") << c.check << params_text(c.params) << ": "
            << (c.holds ? "holds" : "fails");
        if (c.expected)
            out << " (expected " << (*c.expected ? "holds" : "fails") << ")";
        out << "\n";
        if (c.counterexample) {
            const auto& cx = *c.counterexample;
            if (!cx.detail.empty())
                out << "       " << cx.detail << "\n";
            if (!cx.values.empty()) {
                out << "       values:";
                for (const auto& v : cx.values)
                    out << " " << to_string(v);
                out << "\n";
            }
        }
        if (!c.note.empty())
            out << "       " << c.note << "\n";
    }
    std::size_t bad = 0;
    for (const auto& c : r.records)
        bad += !c.matches;
    out << r.records.size() << " checks, " << bad << " mismatches\n";
    return out.str();
}

Json report_json(const Report& r) {
    Json recs = Json::array();
    for (const auto& c : r.records) {
        Json j = {{"check", c.check}, {"params", c.params}, {"holds", c.holds}, {"matches", c.matches},
                  {"elapsed_ms", c.elapsed_ms}};
        if (c.expected)
            j["expected"] = *c.expected;
        if (!c.failure.empty() && !c.holds)
            j["failure"] = c.failure;
        if (c.counterexample) {
            Json cx = {{"detail", c.counterexample->detail}};
            Json pts = Json::array();
            for (auto p : c.counterexample->points)
                pts.push_back({p.run, p.time});
            cx["points"] = pts;
            Json vals = Json::array();
            for (const auto& v : c.counterexample->values)
                vals.push_back(to_string(v));
            cx["values"] = vals;
            cx["indices"] = c.counterexample->indices;
            j["counterexample"] = cx;
        }
        if (c.reverified)
            j["reverified"] = *c.reverified;
        if (!c.note.empty())
            j["note"] = c.note;
        recs.push_back(j);
    }
    return {{"spec", r.spec}, {"records", recs}, {"all_match", r.all_match()}};
}

} // namespace runsec

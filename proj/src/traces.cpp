#include "runsec/traces.hpp"

#include "runsec/secrecy.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace runsec {

namespace {

const std::regex value_re("[A-Za-z0-9_]+");
const std::regex name_re("[A-Za-z0-9_.+-]+");

void check_alphabet(const std::vector<std::string>& a, const char* what) {
    if (a.empty())
        throw Error(std::string("alphabet ") + what + " is empty");
    std::set<std::string> seen;
    for (const auto& v : a) {
        if (!std::regex_match(v, value_re))
            throw Error(std::string("value '") + v + "' in " + what + " must match [A-Za-z0-9_]+");
        if (!seen.insert(v).second)
            throw Error(std::string("value '") + v + "' repeated in " + what);
    }
}

bool contains(const std::vector<std::string>& a, const std::string& v) {
    return std::find(a.begin(), a.end(), v) != a.end();
}

template <class F>
std::string view(const SyncTrace& t, std::size_t k, F part) {
    std::string out = "<";
    for (std::size_t n = 0; n < k && n < t.size(); ++n)
        out += (n ? "," : "") + part(t[n]);
    return out + ">";
}

std::vector<std::string> split_token(const std::string& tok) {
    std::vector<std::string> out;
    std::string body = tok.substr(1, tok.size() - 2);
    if (body.empty())
        return out;
    std::size_t start = 0;
    for (;;) {
        auto c = body.find(',', start);
        out.push_back(body.substr(start, c - start));
        if (c == std::string::npos)
            break;
        start = c + 1;
    }
    return out;
}

std::string join_token(const std::vector<std::string>& parts) {
    std::string out = "<";
    for (std::size_t k = 0; k < parts.size(); ++k)
        out += (k ? "," : "") + parts[k];
    return out + ">";
}

SecrecyVerdict pairwise(const SyncTraceSystem& s, bool inputs_only, const char* what) {
    validate(s);
    const std::size_t n = trace_length(s);
    std::vector<std::string> g, h;
    for (const auto& t : s.traces) {
        g.push_back(low_view(t, n));
        h.push_back(inputs_only ? high_input_view(t, n) : high_view(t, n));
    }
    auto v = check_nondeducibility(g, h);
    if (v.holds)
        v.note = std::string(what) + ": every low view pairs with every high view";
    else
        v.counterexample->detail = std::string(what) + ": no trace with low view " + g[v.counterexample->indices[0]] +
                                   " and high view " + h[v.counterexample->indices[1]];
    return v;
}

AsyncTrace project(const AsyncTraceSystem& s, const AsyncTrace& t, bool (*keep)(const AsyncTraceSystem&, const Event&)) {
    AsyncTrace out;
    for (const auto& e : t)
        if (keep(s, e))
            out.push_back(e);
    return out;
}

bool keep_low(const AsyncTraceSystem& s, const Event& e) { return is_low(s, e); }
bool keep_high(const AsyncTraceSystem& s, const Event& e) { return is_high(s, e); }
bool keep_high_input(const AsyncTraceSystem& s, const Event& e) { return is_high_input(s, e); }
bool keep_low_or_hi(const AsyncTraceSystem& s, const Event& e) { return is_low(s, e) || is_high_input(s, e); }

std::set<AsyncTrace> trace_set(const AsyncTraceSystem& s) {
    std::set<AsyncTrace> out(s.traces.begin(), s.traces.end());
    out.insert(AsyncTrace{});
    return out;
}

// First trace index with the given projection, or traces.size() for the
// implicit empty trace.
std::size_t witness(const AsyncTraceSystem& s, const AsyncTrace& proj,
                    bool (*keep)(const AsyncTraceSystem&, const Event&)) {
    for (std::size_t k = 0; k < s.traces.size(); ++k)
        if (project(s, s.traces[k], keep) == proj)
            return k;
    return s.traces.size();
}

SecrecyVerdict async_pairwise(const AsyncTraceSystem& s, bool gni) {
    validate(s);
    auto all = trace_set(s);
    std::set<AsyncTrace> lows, highs, target;
    for (const auto& t : all) {
        lows.insert(project(s, t, keep_low));
        highs.insert(project(s, t, gni ? keep_high_input : keep_high));
        target.insert(gni ? project(s, t, keep_low_or_hi) : t);
    }
    for (const auto& a : lows)
        for (const auto& b : highs) {
            std::optional<AsyncTrace> missing;
            for_each_interleaving(a, b, [&](const AsyncTrace& t) {
                if (target.count(t))
                    return true;
                missing = t;
                return false;
            });
            if (missing) {
                Counterexample cx;
                cx.indices = {witness(s, a, keep_low), witness(s, b, gni ? keep_high_input : keep_high)};
                cx.detail = std::string(gni ? "no trace projects onto " : "missing interleaving ") +
                            event_token(*missing) + " of " + event_token(a) + " and " + event_token(b);
                return SecrecyVerdict::fail(Failure::empty_intersection, std::move(cx));
            }
        }
    return SecrecyVerdict::pass(gni ? "every low/high-input interleaving is realized"
                                    : "every low/high interleaving is a trace");
}

void check_dist(const Dist& d, const std::vector<std::string>& alphabet, const std::string& where) {
    Rational sum = 0;
    for (const auto& [v, p] : d) {
        if (!contains(alphabet, v))
            throw Error("malformed distribution row at " + where + ": value '" + v + "' outside the alphabet");
        if (p < 0)
            throw Error("malformed distribution row at " + where + ": negative probability");
        sum += p;
    }
    if (sum != 1)
        throw Error("malformed distribution row at " + where + ": sums to " + to_string(sum));
}

void check_output(const OutputDist& d, const ProbProtocolSystem& pps, const std::string& where) {
    Rational sum = 0;
    for (const auto& [v, p] : d) {
        if (!contains(pps.LO, v.first) || !contains(pps.HO, v.second))
            throw Error("malformed distribution row at " + where + ": output (" + v.first + "," + v.second +
                        ") outside the alphabets");
        if (p < 0)
            throw Error("malformed distribution row at " + where + ": negative probability");
        sum += p;
    }
    if (sum != 1)
        throw Error("malformed distribution row at " + where + ": sums to " + to_string(sum));
}

struct GsRun {
    std::size_t low, high;
    SyncTrace trace;
    Rational weight;
};

std::vector<GsRun> generate(const ProbProtocolSystem& pps) {
    check_alphabet(pps.LI, "LI");
    check_alphabet(pps.HI, "HI");
    check_alphabet(pps.LO, "LO");
    check_alphabet(pps.HO, "HO");
    if (pps.low.empty() || pps.high.empty())
        throw Error("both protocol sets must be nonempty");
    if (!pps.output)
        throw Error("no output model");
    for (const auto* side : {&pps.low, &pps.high}) {
        std::set<std::string> names;
        for (const auto& p : *side) {
            if (!std::regex_match(p.name, name_re))
                throw Error("protocol name '" + p.name + "' must match [A-Za-z0-9_.+-]+");
            if (!names.insert(p.name).second)
                throw Error("protocol name '" + p.name + "' repeated");
            if (!p.next)
                throw Error("protocol '" + p.name + "' has no distribution");
        }
    }
    std::vector<GsRun> out;
    for (std::size_t a = 0; a < pps.low.size(); ++a)
        for (std::size_t b = 0; b < pps.high.size(); ++b) {
            const auto& lp = pps.low[a];
            const auto& hp = pps.high[b];
            SyncTrace cur;
            std::function<void(const Rational&)> step = [&](const Rational& w) {
                if (cur.size() == pps.horizon) {
                    out.push_back({a, b, cur, w});
                    return;
                }
                View lv, hv;
                for (const auto& t : cur) {
                    lv.emplace_back(t.li, t.lo);
                    hv.emplace_back(t.hi, t.ho);
                }
                std::string at = " after " + low_view(cur, cur.size()) + " / " + high_view(cur, cur.size());
                auto dl = lp.next(lv);
                check_dist(dl, pps.LI, "protocol '" + lp.name + "'" + at);
                auto dh = hp.next(hv);
                check_dist(dh, pps.HI, "protocol '" + hp.name + "'" + at);
                for (const auto& [li, pl] : dl) {
                    if (pl == 0)
                        continue;
                    for (const auto& [hi, ph] : dh) {
                        if (ph == 0)
                            continue;
                        auto dout = pps.output(cur, li, hi);
                        check_output(dout, pps, "output model" + at + " with inputs " + li + "," + hi);
                        for (const auto& [o, po] : dout) {
                            if (po == 0)
                                continue;
                            cur.push_back({li, hi, o.first, o.second});
                            step(w * pl * ph * po);
                            cur.pop_back();
                        }
                    }
                }
            };
            step(Rational(1));
        }
    return out;
}

} // namespace

// ---- synchronous traces ----

void validate(const SyncTraceSystem& s) {
    check_alphabet(s.LI, "LI");
    check_alphabet(s.HI, "HI");
    check_alphabet(s.LO, "LO");
    check_alphabet(s.HO, "HO");
    if (s.traces.empty())
        throw Error("trace system has no traces");
    const std::size_t n = s.traces.front().size();
    std::set<SyncTrace> seen;
    for (std::size_t k = 0; k < s.traces.size(); ++k) {
        const auto& t = s.traces[k];
        if (t.size() != n)
            throw Error("trace " + std::to_string(k) + " has length " + std::to_string(t.size()) + ", expected " +
                        std::to_string(n));
        for (const auto& x : t)
            if (!contains(s.LI, x.li) || !contains(s.HI, x.hi) || !contains(s.LO, x.lo) || !contains(s.HO, x.ho))
                throw Error("trace " + std::to_string(k) + " uses a value outside the alphabets");
        if (!seen.insert(t).second)
            throw Error("trace " + std::to_string(k) + " is a duplicate");
    }
}

std::size_t trace_length(const SyncTraceSystem& s) { return s.traces.empty() ? 0 : s.traces.front().size(); }

std::string low_view(const SyncTrace& t, std::size_t k) {
    return view(t, k, [](const SyncTuple& x) { return x.li + "/" + x.lo; });
}

std::string high_view(const SyncTrace& t, std::size_t k) {
    return view(t, k, [](const SyncTuple& x) { return x.hi + "/" + x.ho; });
}

std::string high_input_view(const SyncTrace& t, std::size_t k) {
    return view(t, k, [](const SyncTuple& x) { return x.hi; });
}

System runs_from_sync(const SyncTraceSystem& s, std::optional<std::size_t> horizon) {
    validate(s);
    const std::size_t n = trace_length(s);
    const std::size_t m = horizon.value_or(n);
    if (m > n)
        throw Error("horizon " + std::to_string(m) + " exceeds the trace length " + std::to_string(n));
    std::vector<Run> runs;
    for (std::size_t k = 0; k < s.traces.size(); ++k) {
        Run r{"t" + std::to_string(k), {}};
        for (std::size_t t = 0; t <= m; ++t)
            r.states.push_back({"", {low_view(s.traces[k], t), high_view(s.traces[k], t)}});
        runs.push_back(std::move(r));
    }
    return System({"L", "H"}, std::move(runs), m, TimeMode::synchronous);
}

InfoFunction high_input_function(const System& sys) {
    InfoFunction f{sys.agent("H"), {}};
    for (LocalId l = 0; l < sys.local_count(f.agent); ++l) {
        const auto& tok = sys.local_token(f.agent, l);
        std::vector<std::string> parts;
        for (const auto& x : split_token(tok))
            parts.push_back(x.substr(0, x.find('/')));
        f.map[tok] = join_token(parts);
    }
    return f;
}

SecrecyVerdict check_separability(const SyncTraceSystem& s) { return pairwise(s, false, "separability"); }

SecrecyVerdict check_gni_sync(const SyncTraceSystem& s) {
    return pairwise(s, true, "generalized noninterference");
}

bool is_horizon_complete(const SyncTraceSystem& s, std::size_t horizon) {
    validate(s);
    const std::size_t n = trace_length(s);
    if (horizon > n)
        throw Error("horizon exceeds the trace length");
    const std::size_t per_step = s.LI.size() * s.HI.size() * s.LO.size() * s.HO.size();
    std::size_t need = 1;
    for (std::size_t k = horizon; k < n; ++k) {
        need *= per_step;
        if (need > s.traces.size())
            return false;
    }
    std::map<SyncTrace, std::size_t> groups;
    for (const auto& t : s.traces)
        ++groups[SyncTrace(t.begin(), t.begin() + static_cast<long>(horizon))];
    for (const auto& [p, c] : groups)
        if (c != need)
            return false;
    return true;
}

// ---- asynchronous traces ----

void validate(const AsyncTraceSystem& s) {
    std::set<Event> all;
    for (const auto* a : {&s.low, &s.high_inputs, &s.high_outputs})
        for (const auto& e : *a) {
            if (!std::regex_match(e, value_re))
                throw Error("event '" + e + "' must match [A-Za-z0-9_]+");
            if (!all.insert(e).second)
                throw Error("event '" + e + "' appears in more than one alphabet");
        }
    if (s.low.empty())
        throw Error("no low events");
    auto set = trace_set(s);
    if (set.size() != s.traces.size() + (std::find(s.traces.begin(), s.traces.end(), AsyncTrace{}) == s.traces.end()))
        throw Error("trace list contains duplicates");
    for (std::size_t k = 0; k < s.traces.size(); ++k) {
        const auto& t = s.traces[k];
        for (const auto& e : t)
            if (!all.count(e))
                throw Error("trace " + std::to_string(k) + " uses unknown event '" + e + "'");
        if (!t.empty() && !set.count(AsyncTrace(t.begin(), t.end() - 1)))
            throw Error("trace " + event_token(t) + " has a prefix outside the system");
    }
}

bool is_low(const AsyncTraceSystem& s, const Event& e) { return contains(s.low, e); }
bool is_high_input(const AsyncTraceSystem& s, const Event& e) { return contains(s.high_inputs, e); }
bool is_high(const AsyncTraceSystem& s, const Event& e) {
    return contains(s.high_inputs, e) || contains(s.high_outputs, e);
}

std::string event_token(const AsyncTrace& t) { return join_token(t); }

System runs_from_async(const AsyncTraceSystem& s, std::optional<std::size_t> horizon, std::size_t chain_bound) {
    validate(s);
    auto all = trace_set(s);
    std::size_t longest = 0;
    for (const auto& t : all)
        longest = std::max(longest, t.size());
    const std::size_t m = horizon.value_or(longest);
    std::set<AsyncTrace> inner;
    for (const auto& t : all)
        if (!t.empty() && t.size() <= m)
            inner.insert(AsyncTrace(t.begin(), t.end() - 1));
    std::vector<Run> runs;
    for (const auto& t : all) {
        if (t.size() > m || inner.count(t))
            continue;
        if (runs.size() == chain_bound)
            throw Error("more than " + std::to_string(chain_bound) + " maximal run-like chains");
        Run r{"c" + std::to_string(runs.size()), {}};
        for (std::size_t k = 0; k <= t.size(); ++k) {
            AsyncTrace pre(t.begin(), t.begin() + static_cast<long>(k));
            r.states.push_back({"", {event_token(project(s, pre, keep_low)), event_token(project(s, pre, keep_high))}});
        }
        runs.push_back(std::move(r));
    }
    return System({"L", "H"}, std::move(runs), m, TimeMode::asynchronous_stutter);
}

InfoFunction async_high_input_function(const AsyncTraceSystem& s, const System& sys) {
    InfoFunction f{sys.agent("H"), {}};
    for (LocalId l = 0; l < sys.local_count(f.agent); ++l) {
        const auto& tok = sys.local_token(f.agent, l);
        f.map[tok] = event_token(project(s, split_token(tok), keep_high_input));
    }
    return f;
}

SecrecyVerdict check_async_separability(const AsyncTraceSystem& s) { return async_pairwise(s, false); }
SecrecyVerdict check_async_gni(const AsyncTraceSystem& s) { return async_pairwise(s, true); }

bool is_closed_under_interleavings(const AsyncTraceSystem& s) {
    validate(s);
    auto all = trace_set(s);
    for (const auto& t : all) {
        bool ok = true;
        for_each_interleaving(project(s, t, keep_low), project(s, t, keep_high), [&](const AsyncTrace& u) {
            ok = all.count(u) > 0;
            return ok;
        });
        if (!ok)
            return false;
    }
    return true;
}

AsyncTraceSystem close_under_interleavings(AsyncTraceSystem s) {
    auto all = trace_set(s);
    for (;;) {
        std::set<AsyncTrace> next = all;
        for (const auto& t : all)
            for_each_interleaving(project(s, t, keep_low), project(s, t, keep_high), [&](const AsyncTrace& u) {
                for (std::size_t k = 0; k <= u.size(); ++k)
                    next.insert(AsyncTrace(u.begin(), u.begin() + static_cast<long>(k)));
                return true;
            });
        if (next.size() == all.size())
            break;
        all = std::move(next);
    }
    all.erase(AsyncTrace{});
    s.traces.assign(all.begin(), all.end());
    return s;
}

void for_each_interleaving(const AsyncTrace& a, const AsyncTrace& b,
                           const std::function<bool(const AsyncTrace&)>& out) {
    AsyncTrace cur;
    cur.reserve(a.size() + b.size());
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
        if (i == a.size() && j == b.size())
            return out(cur);
        if (i < a.size()) {
            cur.push_back(a[i]);
            bool go = rec(i + 1, j);
            cur.pop_back();
            if (!go)
                return false;
        }
        if (j < b.size()) {
            cur.push_back(b[j]);
            bool go = rec(i, j + 1);
            cur.pop_back();
            if (!go)
                return false;
        }
        return true;
    };
    rec(0, 0);
}

// ---- strategies ----

bool is_consistent(const Protocol& p, const SyncTrace& t) {
    for (std::size_t k = 0; k < t.size(); ++k) {
        auto it = p.table.find(high_view(t, k));
        if (it == p.table.end() || it->second != t[k].hi)
            return false;
    }
    return true;
}

std::vector<Protocol> enumerate_strategies(const SyncTraceSystem& s, std::size_t bound) {
    validate(s);
    const std::size_t n = trace_length(s);
    std::set<std::string> views;
    for (const auto& t : s.traces)
        for (std::size_t k = 0; k < n; ++k)
            views.insert(high_view(t, k));
    std::vector<Protocol> out;
    std::map<std::string, std::string> table;
    std::function<void(std::size_t, const std::vector<std::size_t>&)> depth = [&](std::size_t k,
                                                                                 const std::vector<std::size_t>& live) {
        if (k == n) {
            if (out.size() == bound)
                throw Error("more than " + std::to_string(bound) + " deterministic strategies");
            Protocol p{"s" + std::to_string(out.size()), table};
            for (const auto& v : views)
                p.table.emplace(v, s.HI.front());
            out.push_back(std::move(p));
            return;
        }
        // options per reachable view at depth k
        std::map<std::string, std::set<std::string>> options;
        for (auto idx : live)
            options[high_view(s.traces[idx], k)].insert(s.traces[idx].at(k).hi);
        std::vector<std::pair<std::string, std::vector<std::string>>> slots;
        for (const auto& [v, o] : options)
            slots.emplace_back(v, std::vector<std::string>(o.begin(), o.end()));
        std::function<void(std::size_t)> choose = [&](std::size_t slot) {
            if (slot == slots.size()) {
                std::vector<std::size_t> next;
                for (auto idx : live)
                    if (table.at(high_view(s.traces[idx], k)) == s.traces[idx][k].hi)
                        next.push_back(idx);
                depth(k + 1, next);
                return;
            }
            for (const auto& v : slots[slot].second) {
                table[slots[slot].first] = v;
                choose(slot + 1);
            }
            table.erase(slots[slot].first);
        };
        choose(0);
    };
    std::vector<std::size_t> all(s.traces.size());
    for (std::size_t k = 0; k < all.size(); ++k)
        all[k] = k;
    depth(0, all);
    return out;
}

System strategy_annotated_system(const SyncTraceSystem& s, const std::vector<Protocol>& strategies) {
    validate(s);
    const std::size_t n = trace_length(s);
    std::vector<Run> runs;
    for (const auto& p : strategies) {
        if (!std::regex_match(p.name, name_re))
            throw Error("strategy name '" + p.name + "' must match [A-Za-z0-9_.+-]+");
        for (std::size_t k = 0; k < s.traces.size(); ++k) {
            const auto& t = s.traces[k];
            if (!is_consistent(p, t))
                continue;
            Run r{p.name + "/t" + std::to_string(k), {}};
            for (std::size_t m = 0; m <= n; ++m)
                r.states.push_back({"", {low_view(t, m), p.name + "|" + high_view(t, m)}});
            runs.push_back(std::move(r));
        }
    }
    return System({"L", "H"}, std::move(runs), n, TimeMode::synchronous);
}

NosReport nos_report(const SyncTraceSystem& s, const std::vector<Protocol>& strategies) {
    validate(s);
    const std::size_t n = trace_length(s);
    NosReport rep;
    std::vector<std::set<std::string>> lows(strategies.size());
    std::vector<bool> covered(s.traces.size(), false);
    std::set<std::string> names;
    for (std::size_t k = 0; k < strategies.size(); ++k) {
        if (!names.insert(strategies[k].name).second)
            throw Error("strategy name '" + strategies[k].name + "' repeated");
        for (std::size_t t = 0; t < s.traces.size(); ++t)
            if (is_consistent(strategies[k], s.traces[t])) {
                lows[k].insert(low_view(s.traces[t], n));
                covered[t] = true;
            }
        if (lows[k].empty())
            throw Error("strategy '" + strategies[k].name + "' is consistent with no trace");
    }
    rep.covered = std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
    rep.verdict = SecrecyVerdict::pass("every low view is compatible with every strategy");
    for (std::size_t t = 0; t < s.traces.size() && rep.verdict.holds; ++t)
        for (std::size_t k = 0; k < strategies.size(); ++k)
            if (!lows[k].count(low_view(s.traces[t], n))) {
                Counterexample cx;
                cx.indices = {t, k};
                cx.detail = "no trace consistent with strategy " + strategies[k].name + " has low view " +
                            low_view(s.traces[t], n);
                rep.verdict = SecrecyVerdict::fail(Failure::empty_intersection, std::move(cx));
                break;
            }
    if (strategies.empty()) {
        rep.reduction = SecrecyVerdict::pass("no strategies");
        return rep;
    }
    System ann = strategy_annotated_system(s, strategies);
    InfoFunction f{ann.agent("H"), {}};
    for (LocalId l = 0; l < ann.local_count(f.agent); ++l) {
        const auto& tok = ann.local_token(f.agent, l);
        f.map[tok] = tok.substr(0, tok.find('|'));
    }
    System derived = derive_agent(ann, f, "strat(H)", true);
    rep.reduction = check_synchronous_secrecy(derived, derived.agent("L"), derived.agent("strat(H)"));
    return rep;
}

SecrecyVerdict check_nos(const SyncTraceSystem& s, const std::vector<Protocol>& strategies) {
    auto rep = nos_report(s, strategies);
    auto v = rep.verdict;
    v.note += rep.agree() ? "; agrees with synchronous f_strat-secrecy" : "; differs from synchronous f_strat-secrecy";
    return v;
}

// ---- probabilistic protocols ----

std::vector<SyncTrace> gray_syverson_traces(const ProbProtocolSystem& pps) {
    std::vector<SyncTrace> out;
    for (auto& r : generate(pps))
        out.push_back(std::move(r.trace));
    return out;
}

AdversarialSystem build_gray_syverson(const ProbProtocolSystem& pps) {
    auto gen = generate(pps);
    std::vector<Run> runs;
    InitStructure init;
    init.values.resize(2);
    for (const auto& p : pps.low)
        init.values[0].push_back(p.name);
    for (const auto& p : pps.high)
        init.values[1].push_back(p.name);
    std::map<std::string, std::vector<Rational>> weights;
    for (std::size_t k = 0; k < gen.size(); ++k) {
        const auto& g = gen[k];
        const auto& ln = pps.low[g.low].name;
        const auto& hn = pps.high[g.high].name;
        Run r{ln + "/" + hn + "/" + std::to_string(k), {}};
        for (std::size_t m = 0; m <= pps.horizon; ++m)
            r.states.push_back({"", {ln + "|" + low_view(g.trace, m), hn + "|" + high_view(g.trace, m)}});
        runs.push_back(std::move(r));
        init.choice.push_back({ln, hn});
    }
    for (std::size_t k = 0; k < gen.size(); ++k) {
        auto key = AdversarialSystem::cell_key(init.choice[k]);
        auto& w = weights[key];
        if (w.empty())
            w.assign(gen.size(), Rational(0));
        w[k] = gen[k].weight;
    }
    std::map<std::string, RunMeasure> measures;
    for (auto& [key, w] : weights)
        measures.emplace(key, RunMeasure(std::move(w)));
    System base({"L", "H"}, std::move(runs), pps.horizon, TimeMode::synchronous);
    return AdversarialSystem::from_init(std::move(base), std::move(init), measures);
}

SecrecyVerdict check_pni(const AdversarialSystem& gs) {
    const System& sys = gs.base();
    if (!gs.init() || !sys.has_agent("L") || !sys.has_agent("H"))
        throw Error("probabilistic noninterference needs a system built from protocol sets");
    const AgentId low = sys.agent("L");
    const auto& init = *gs.init();
    for (LocalId l = 0; l < sys.local_count(low); ++l) {
        RunSet rk = sys.info_runs(low, l);
        const auto& proto = init.choice[rk.find_first()][low];
        std::optional<std::pair<std::size_t, Rational>> first;
        for (std::size_t c = 0; c < gs.cell_count(); ++c) {
            if (init.choice[gs.cell_runs(c).find_first()][low] != proto)
                continue;
            Rational v = gs.cell_measure(c).measure(rk);
            if (!first) {
                first = std::pair{c, v};
            } else if (v != first->second) {
                Point p = sys.point(sys.members(low, l).front());
                Counterexample cx{{p}, {first->second, v}, {first->first, c},
                                  "K_L" + sys.point_label(p) + " has probability " + to_string(first->second) +
                                      " under " + gs.cell_id(first->first) + " but " + to_string(v) + " under " +
                                      gs.cell_id(c)};
                return SecrecyVerdict::fail(Failure::unequal, std::move(cx));
            }
        }
    }
    return SecrecyVerdict::pass("low observations have the same probability under every high protocol");
}

SecrecyVerdict check_pni(const ProbProtocolSystem& pps) { return check_pni(build_gray_syverson(pps)); }

PniReport pni_report(const ProbProtocolSystem& pps, const GeneralizedOptions& opt) {
    auto gs = build_gray_syverson(pps);
    PniReport rep;
    rep.pni = check_pni(gs);
    const AgentId low = gs.base().agent("L");
    rep.no_evidence = check_no_evidence(gs, low).holds;
    MeasureFamily fam{MeasureFamily::Kind::init_product, low, {}};
    const std::string name = "strat(H)";
    auto run_ext = with_others_choice_agent(gs, low, name);
    GeneralizedOptions o = opt;
    o.synchronous = false;
    rep.generalized_run_based = check_generalized_secrecy(run_ext, low, run_ext.base().agent(name), fam, o).holds;
    auto sync_ext = with_others_choice_agent(gs, low, name, true);
    o.synchronous = true;
    rep.generalized_sync = check_generalized_secrecy(sync_ext, low, sync_ext.base().agent(name), fam, o).holds;
    return rep;
}

} // namespace runsec

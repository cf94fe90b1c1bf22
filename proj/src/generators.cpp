#include "runsec/generators.hpp"

#include "runsec/traces.hpp"

#include <algorithm>
#include <set>

namespace runsec {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, unsigned num = 1, unsigned den = 2) { return uniform(rng, 1, den) <= num; }

std::vector<Rational> normalized(const std::vector<unsigned>& raw) {
    unsigned total = 0;
    for (unsigned w : raw)
        total += w;
    std::vector<Rational> out;
    for (unsigned w : raw)
        out.emplace_back(w, total);
    for (auto& q : out)
        q.canonicalize();
    return out;
}

std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t n, unsigned top = 9) {
    std::vector<unsigned> raw;
    for (std::size_t k = 0; k < n; ++k)
        raw.push_back(static_cast<unsigned>(uniform(rng, 1, top)));
    return normalized(raw);
}

using Behaviour = std::vector<std::string>;

Behaviour random_behaviour(std::mt19937_64& rng, std::size_t len, std::size_t symbols) {
    static const char* names[] = {"a", "b", "c", "d", "e"};
    Behaviour out;
    for (std::size_t m = 0; m < len; ++m)
        out.push_back(names[uniform(rng, 0, symbols - 1)]);
    return out;
}

std::string join(const std::vector<std::string>& xs, std::size_t upto, const std::string& sep) {
    std::string out;
    for (std::size_t k = 0; k <= upto && k < xs.size(); ++k)
        out += (k ? sep : "") + xs[k];
    return out;
}

std::string token(const Behaviour& obs, std::size_t m, bool synchronous, bool recall) {
    if (synchronous)
        return recall ? join(obs, m, ".") : obs[m] + "@" + std::to_string(m);
    if (!recall)
        return obs[m];
    std::vector<std::string> compressed;
    for (std::size_t k = 0; k <= m; ++k)
        if (compressed.empty() || compressed.back() != obs[k])
            compressed.push_back(obs[k]);
    return join(compressed, compressed.size(), ".");
}

std::string bit(std::size_t v) { return std::to_string(v); }

std::vector<std::string> alphabet(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k)
        out.push_back(bit(k));
    return out;
}

Json dist_json(const std::vector<std::string>& values, const std::vector<Rational>& w) {
    Json out = Json::object();
    for (std::size_t k = 0; k < values.size(); ++k)
        if (w[k] != 0)
            out[values[k]] = to_string(w[k]);
    return out;
}

// Random distribution over n values; sometimes a point mass.
std::vector<Rational> random_dist(std::mt19937_64& rng, std::size_t n) {
    if (coin(rng, 1, 4)) {
        std::vector<Rational> w(n, Rational(0));
        w[uniform(rng, 0, n - 1)] = 1;
        return w;
    }
    return random_weights(rng, n, 4);
}

} // namespace

RandomSystem random_system(std::mt19937_64& rng, const SystemShape& shape) {
    for (int attempt = 0;; ++attempt) {
        const std::size_t horizon = uniform(rng, 1, std::max<std::size_t>(1, shape.max_horizon));
        std::array<std::size_t, 2> symbols{uniform(rng, 1, shape.max_symbols), uniform(rng, 1, shape.max_symbols)};
        std::vector<std::array<Behaviour, 2>> behaviours;
        RandomSystem out{System({"x"}, {Run{"x", {GlobalState{"", {"x"}}}}}, 0, TimeMode::synchronous), {}, false};
        if (shape.product) {
            std::size_t a = uniform(rng, 1, 3);
            std::size_t b = uniform(rng, 1, std::max<std::size_t>(1, (shape.max_runs + 1) / a));
            std::vector<Behaviour> as, bs;
            for (std::size_t k = 0; k < a; ++k)
                as.push_back(random_behaviour(rng, horizon + 1, symbols[0]));
            for (std::size_t k = 0; k < b; ++k)
                bs.push_back(random_behaviour(rng, horizon + 1, symbols[1]));
            for (std::size_t x = 0; x < a; ++x)
                for (std::size_t y = 0; y < b; ++y) {
                    behaviours.push_back({as[x], bs[y]});
                    out.factors.push_back({x, y});
                }
            out.complete_product = true;
            if (behaviours.size() > 1 && coin(rng, 1, 4)) {
                std::size_t drop = uniform(rng, 0, behaviours.size() - 1);
                behaviours.erase(behaviours.begin() + static_cast<long>(drop));
                out.factors.erase(out.factors.begin() + static_cast<long>(drop));
                out.complete_product = false;
            }
        } else {
            std::size_t n = uniform(rng, 1, shape.max_runs);
            for (std::size_t r = 0; r < n; ++r)
                behaviours.push_back({random_behaviour(rng, horizon + 1, symbols[0]),
                                      random_behaviour(rng, horizon + 1, symbols[1])});
        }
        std::vector<Run> runs;
        for (std::size_t r = 0; r < behaviours.size(); ++r) {
            Run run{"r" + std::to_string(r + 1), {}};
            for (std::size_t m = 0; m <= horizon; ++m) {
                GlobalState g;
                for (std::size_t a = 0; a < 2; ++a)
                    g.locals.push_back(token(behaviours[r][a], m, shape.synchronous, shape.recall[a]));
                run.states.push_back(std::move(g));
            }
            runs.push_back(std::move(run));
        }
        out.sys = System({"1", "2"}, std::move(runs), horizon,
                         shape.synchronous ? TimeMode::synchronous : TimeMode::asynchronous_stutter);
        if ((out.sys.local_count(0) <= shape.max_locals && out.sys.local_count(1) <= shape.max_locals) ||
            attempt > 200)
            return out;
    }
}

RunMeasure random_measure(std::mt19937_64& rng, std::size_t runs) { return RunMeasure(random_weights(rng, runs)); }

RunMeasure product_measure(std::mt19937_64& rng, const RandomSystem& rs) {
    if (!rs.complete_product)
        throw Error("product_measure needs a complete product system");
    std::size_t a = 0, b = 0;
    for (const auto& f : rs.factors) {
        a = std::max(a, f[0] + 1);
        b = std::max(b, f[1] + 1);
    }
    auto p = random_weights(rng, a), q = random_weights(rng, b);
    std::vector<Rational> w;
    for (const auto& f : rs.factors)
        w.push_back(p[f[0]] * q[f[1]]);
    return RunMeasure(std::move(w));
}

RunMeasure near_miss(std::mt19937_64& rng, const RandomSystem& rs, const RunMeasure& mu) {
    const std::size_t n = mu.size();
    if (n < 2)
        return mu;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (x != y && x < rs.factors.size() && y < rs.factors.size() &&
                rs.factors[x][0] != rs.factors[y][0] && rs.factors[x][1] != rs.factors[y][1])
                pairs.emplace_back(x, y);
    if (pairs.empty())
        pairs.emplace_back(0, 1);
    auto [x, y] = pairs[uniform(rng, 0, pairs.size() - 1)];
    const Rational delta(1, 1000000000);
    auto w = mu.weights();
    w[x] += delta;
    w[y] -= delta;
    return RunMeasure(std::move(w));
}

Json random_init_spec(std::mt19937_64& rng, bool no_evidence) {
    const std::size_t n0 = uniform(rng, 1, 3), n1 = uniform(rng, 1, 3);
    const std::size_t horizon = uniform(rng, 1, 2);
    std::vector<std::string> u, v;
    for (std::size_t k = 0; k < n0; ++k)
        u.push_back("u" + std::to_string(k + 1));
    for (std::size_t k = 0; k < n1; ++k)
        v.push_back("v" + std::to_string(k + 1));
    struct Entry {
        Behaviour own;
        unsigned weight;
    };
    auto random_entries = [&] {
        std::vector<Entry> es;
        std::size_t count = uniform(rng, 1, 2);
        for (std::size_t e = 0; e < count; ++e)
            es.push_back({random_behaviour(rng, horizon + 1, 2), static_cast<unsigned>(uniform(rng, 1, 4))});
        return es;
    };
    std::vector<std::vector<Entry>> templates;
    for (std::size_t y0 = 0; y0 < n0; ++y0)
        templates.push_back(random_entries());

    Json runs = Json::array(), choice = Json::object(), measures = Json::object();
    for (std::size_t y0 = 0; y0 < n0; ++y0)
        for (std::size_t y1 = 0; y1 < n1; ++y1) {
            auto entries = no_evidence ? templates[y0] : random_entries();
            std::vector<unsigned> raw;
            for (const auto& e : entries)
                raw.push_back(e.weight);
            auto w = normalized(raw);
            Json cell = Json::object();
            for (std::size_t e = 0; e < entries.size(); ++e) {
                std::string id = "d" + std::to_string(y0 + 1) + "_" + std::to_string(y1 + 1) + "_" +
                                 std::to_string(e + 1);
                Behaviour other = random_behaviour(rng, horizon + 1, 2);
                Json states = Json::array();
                for (std::size_t m = 0; m <= horizon; ++m)
                    states.push_back(Json::array({u[y0] + ":" + token(entries[e].own, m, true, true),
                                                  v[y1] + ":" + token(other, m, true, true)}));
                runs.push_back({{"id", id}, {"states", states}});
                choice[id] = {u[y0], v[y1]};
                cell[id] = to_string(w[e]);
            }
            measures[AdversarialSystem::cell_key({u[y0], v[y1]})] = cell;
        }
    Json doc = {{"name", no_evidence ? "random INIT (no evidence)" : "random INIT"},
                {"agents", {"1", "2"}},
                {"mode", "synchronous"},
                {"horizon", horizon},
                {"runs", runs}};
    doc["init"] = {{"values", Json::array({Json(u), Json(v)})}, {"choice", choice}, {"measures", measures}};
    return doc;
}

Json random_sync_trace_spec(std::mt19937_64& rng, SyncTraceKind kind) {
    std::array<std::size_t, 4> sizes{};
    std::size_t step = 0;
    const std::size_t step_cap = kind == SyncTraceKind::complete ? 4 : 8;
    do {
        for (auto& s : sizes)
            s = uniform(rng, 1, 2);
        step = sizes[0] * sizes[1] * sizes[2] * sizes[3];
    } while (step > step_cap);
    auto LI = alphabet(sizes[0]), HI = alphabet(sizes[1]), LO = alphabet(sizes[2]), HO = alphabet(sizes[3]);
    auto tuple = [&](std::size_t code) {
        std::size_t li = code % sizes[0];
        code /= sizes[0];
        std::size_t hi = code % sizes[1];
        code /= sizes[1];
        std::size_t lo = code % sizes[2];
        code /= sizes[2];
        return Json::array({LI[li], HI[hi], LO[lo], HO[code % sizes[3]]});
    };
    auto trace_of = [&](std::size_t code, std::size_t len) {
        Json t = Json::array();
        for (std::size_t s = 0; s < len; ++s) {
            t.push_back(tuple(code % step));
            code /= step;
        }
        return t;
    };
    auto power = [](std::size_t b, std::size_t e) {
        std::size_t out = 1;
        while (e--)
            out *= b;
        return out;
    };
    Json spec = {{"LI", LI}, {"HI", HI}, {"LO", LO}, {"HO", HO}};
    std::set<std::size_t> chosen;
    std::size_t len = 0;
    if (kind == SyncTraceKind::random) {
        len = uniform(rng, 1, 3);
        while (len > 1 && power(step, len) > 64)
            --len;
        std::size_t total = power(step, len);
        std::size_t want = uniform(rng, 1, std::min<std::size_t>(total, 12));
        while (chosen.size() < want)
            chosen.insert(uniform(rng, 0, total - 1));
        Json traces = Json::array();
        for (auto c : chosen)
            traces.push_back(trace_of(c, len));
        spec["traces"] = traces;
    } else if (kind == SyncTraceKind::product) {
        len = uniform(rng, 1, 3);
        auto side = [&](std::size_t in, std::size_t outs, const std::vector<std::string>& I,
                        const std::vector<std::string>& O) {
            Json words = Json::array();
            std::size_t count = uniform(rng, 1, 3);
            for (std::size_t w = 0; w < count; ++w) {
                Json word = Json::array();
                for (std::size_t s = 0; s < len; ++s)
                    word.push_back(Json::array({I[uniform(rng, 0, in - 1)], O[uniform(rng, 0, outs - 1)]}));
                words.push_back(word);
            }
            return words;
        };
        Json low = side(sizes[0], sizes[2], LI, LO);
        Json high = side(sizes[1], sizes[3], HI, HO);
        spec["generator"] = {{"kind", "product"}, {"low", low}, {"high", high}};
    } else {
        len = uniform(rng, 2, 3);
        std::size_t horizon = uniform(rng, 1, len - 1);
        std::size_t prefixes = power(step, horizon);
        std::size_t want = uniform(rng, 1, std::min<std::size_t>(prefixes, 3));
        std::set<std::size_t> roots;
        while (roots.size() < want)
            roots.insert(uniform(rng, 0, prefixes - 1));
        Json traces = Json::array();
        std::size_t tails = power(step, len - horizon);
        for (auto root : roots)
            for (std::size_t tail = 0; tail < tails; ++tail)
                traces.push_back(trace_of(root + prefixes * tail, len));
        spec["traces"] = traces;
        spec["horizon"] = horizon;
    }
    return {{"name", "random sync traces"}, {"sync_traces", spec}};
}

Json random_async_trace_spec(std::mt19937_64& rng, AsyncTraceKind kind) {
    const std::vector<std::string> low{"la", "lb"}, hin{"h"}, hout{"o"};
    auto random_word = [&](const std::vector<std::string>& events, std::size_t max_len) {
        std::vector<std::string> w;
        std::size_t len = uniform(rng, 0, max_len);
        for (std::size_t k = 0; k < len; ++k)
            w.push_back(events[uniform(rng, 0, events.size() - 1)]);
        return w;
    };
    const std::vector<std::string> highs{"h", "o"};
    Json doc = {{"name", "random async traces"}};
    if (kind == AsyncTraceKind::shuffle) {
        Json lows = Json::array(), hs = Json::array();
        std::size_t a = uniform(rng, 1, 2), b = uniform(rng, 1, 2);
        for (std::size_t k = 0; k < a; ++k)
            lows.push_back(random_word(low, 2));
        for (std::size_t k = 0; k < b; ++k)
            hs.push_back(random_word(highs, 2));
        doc["async_traces"] = {{"low", low},
                               {"high_inputs", hin},
                               {"high_outputs", hout},
                               {"generator", {{"kind", "shuffle"}, {"low", lows}, {"high", hs}}}};
        return doc;
    }
    AsyncTraceSystem s{low, hin, hout, {}};
    std::set<AsyncTrace> all;
    std::size_t count = uniform(rng, 1, 4);
    for (std::size_t k = 0; k < count; ++k) {
        // At most two events of each class.
        auto l = random_word(low, 2), h = random_word(highs, 2);
        std::vector<std::string> t;
        std::size_t x = 0, y = 0;
        while (x < l.size() || y < h.size()) {
            if (y == h.size() || (x < l.size() && coin(rng)))
                t.push_back(l[x++]);
            else
                t.push_back(h[y++]);
        }
        for (std::size_t n = 1; n <= t.size(); ++n)
            all.insert(AsyncTrace(t.begin(), t.begin() + static_cast<long>(n)));
    }
    s.traces.assign(all.begin(), all.end());
    if (kind == AsyncTraceKind::closed)
        s = close_under_interleavings(std::move(s));
    Json traces = Json::array();
    for (const auto& t : s.traces)
        traces.push_back(t);
    doc["async_traces"] = {{"low", low}, {"high_inputs", hin}, {"high_outputs", hout}, {"traces", traces}};
    return doc;
}

Json random_pps_spec(std::mt19937_64& rng, bool blind) {
    const std::size_t horizon = uniform(rng, 1, 2);
    auto LI = alphabet(uniform(rng, 1, 2)), HI = alphabet(2), LO = alphabet(2), HO = alphabet(uniform(rng, 1, 2));
    // H views of length < horizon.
    std::vector<std::string> views{"<>"};
    if (horizon == 2)
        for (const auto& hi : HI)
            for (const auto& ho : HO)
                views.push_back("<" + hi + "/" + ho + ">");
    auto protocols = [&](const std::string& prefix, const std::vector<std::string>& inputs, bool per_view) {
        Json ps = Json::array();
        std::size_t count = uniform(rng, 1, 2);
        for (std::size_t k = 0; k < count; ++k) {
            Json table = Json::object();
            if (per_view)
                for (const auto& v : views)
                    table[v] = dist_json(inputs, random_dist(rng, inputs.size()));
            else
                table["*"] = dist_json(inputs, random_dist(rng, inputs.size()));
            ps.push_back({{"name", prefix + std::to_string(k + 1)}, {"table", table}});
        }
        return ps;
    };
    Json output = Json::object();
    for (const auto& li : LI) {
        auto lo_dist = random_dist(rng, LO.size());
        auto ho_dist = random_dist(rng, HO.size());
        for (const auto& hi : HI) {
            if (!blind) {
                lo_dist = random_dist(rng, LO.size());
                ho_dist = random_dist(rng, HO.size());
            }
            Json row = Json::object();
            for (std::size_t a = 0; a < LO.size(); ++a)
                for (std::size_t b = 0; b < HO.size(); ++b) {
                    Rational p = lo_dist[a] * ho_dist[b];
                    if (p != 0)
                        row[LO[a] + "," + HO[b]] = to_string(p);
                }
            output["*|" + li + "," + hi] = row;
        }
    }
    Json gs = {{"LI", LI},
               {"HI", HI},
               {"LO", LO},
               {"HO", HO},
               {"horizon", horizon},
               {"low", protocols("low", LI, false)},
               {"high", protocols("high", HI, true)},
               {"output", output}};
    return {{"name", blind ? "random protocols (blind output)" : "random protocols"}, {"gray_syverson", gs}};
}

} // namespace runsec

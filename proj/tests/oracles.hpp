#pragma once

// Brute-force reference implementations over plain tables. They share no code
// with the library beyond gmpxx.

#include <gmpxx.h>
#include <json.hpp>

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using Json = nlohmann::ordered_json;
using Q = mpq_class;

// runs[r][m][a] is agent a's local state at time m of run r.
struct Table {
    std::vector<std::string> agents;
    std::vector<std::string> ids;
    std::vector<std::vector<std::vector<std::string>>> runs;
    std::vector<Q> mu; // empty when the spec has no measure
    bool synchronous = true;
    std::size_t horizon = 0;
};

inline Table from_spec(const Json& doc) {
    Table t;
    for (const auto& a : doc.at("agents"))
        t.agents.push_back(a.get<std::string>());
    t.synchronous = doc.value("mode", std::string("synchronous")) == "synchronous";
    t.horizon = doc.at("horizon").get<std::size_t>();
    for (const auto& run : doc.at("runs")) {
        t.ids.push_back(run.at("id").get<std::string>());
        std::vector<std::vector<std::string>> states;
        for (const auto& s : run.at("states")) {
            const Json& locals = s.is_array() ? s : s.at("locals");
            std::vector<std::string> row;
            for (const auto& l : locals)
                row.push_back(l.get<std::string>());
            states.push_back(row);
        }
        // stutter-pad short asynchronous runs
        while (states.size() < t.horizon + 1)
            states.push_back(states.back());
        t.runs.push_back(states);
    }
    if (doc.contains("measure"))
        for (const auto& id : t.ids)
            t.mu.push_back(Q(doc.at("measure").at(id).get<std::string>()));
    return t;
}

struct Pt {
    std::size_t r, m;
};

inline std::vector<Pt> all_points(const Table& t) {
    std::vector<Pt> out;
    for (std::size_t r = 0; r < t.runs.size(); ++r)
        for (std::size_t m = 0; m <= t.horizon; ++m)
            out.push_back({r, m});
    return out;
}

inline const std::string& loc(const Table& t, std::size_t a, Pt p) { return t.runs[p.r][p.m][a]; }

// For every p, q (same time when sync) some point s matches i's state at p and j's at q.
inline bool total_secrecy(const Table& t, std::size_t i, std::size_t j, bool same_time) {
    auto pts = all_points(t);
    for (Pt p : pts)
        for (Pt q : pts) {
            if (same_time && p.m != q.m)
                continue;
            bool found = false;
            for (Pt s : pts)
                if ((!same_time || s.m == p.m) && loc(t, i, s) == loc(t, i, p) && loc(t, j, s) == loc(t, j, q))
                    found = true;
            if (!found)
                return false;
        }
    return true;
}

inline bool run_has(const Table& t, std::size_t r, std::size_t a, const std::string& l) {
    for (const auto& row : t.runs[r])
        if (row[a] == l)
            return true;
    return false;
}

inline std::set<std::string> locals_of(const Table& t, std::size_t a) {
    std::set<std::string> out;
    for (const auto& run : t.runs)
        for (const auto& row : run)
            out.insert(row[a]);
    return out;
}

inline bool run_based_secrecy(const Table& t, std::size_t i, std::size_t j) {
    for (const auto& li : locals_of(t, i))
        for (const auto& lj : locals_of(t, j)) {
            bool found = false;
            for (std::size_t r = 0; r < t.runs.size(); ++r)
                if (run_has(t, r, i, li) && run_has(t, r, j, lj))
                    found = true;
            if (!found)
                return false;
        }
    return true;
}

// mu(R(lj) | R(li)) constant in li, for every lj.
inline bool run_based_prob_secrecy(const Table& t, std::size_t i, std::size_t j) {
    for (const auto& lj : locals_of(t, j)) {
        std::set<Q> seen;
        for (const auto& li : locals_of(t, i)) {
            Q num = 0, den = 0;
            for (std::size_t r = 0; r < t.runs.size(); ++r)
                if (run_has(t, r, i, li)) {
                    den += t.mu[r];
                    if (run_has(t, r, j, lj))
                        num += t.mu[r];
                }
            seen.insert(num / den);
        }
        if (seen.size() > 1)
            return false;
    }
    return true;
}

// Synchronous HT: mu(runs where j is in lj at m | runs where i is in li at m),
// constant in li for each time m and lj at m.
inline bool prob_sync_secrecy(const Table& t, std::size_t i, std::size_t j) {
    for (std::size_t m = 0; m <= t.horizon; ++m) {
        std::set<std::string> li_at, lj_at;
        for (const auto& run : t.runs) {
            li_at.insert(run[m][i]);
            lj_at.insert(run[m][j]);
        }
        for (const auto& lj : lj_at) {
            std::set<Q> seen;
            for (const auto& li : li_at) {
                Q num = 0, den = 0;
                for (std::size_t r = 0; r < t.runs.size(); ++r)
                    if (t.runs[r][m][i] == li) {
                        den += t.mu[r];
                        if (t.runs[r][m][j] == lj)
                            num += t.mu[r];
                    }
                seen.insert(num / den);
            }
            if (seen.size() > 1)
                return false;
        }
    }
    return true;
}

// The agent's local state determines its stutter-free history.
inline bool perfect_recall(const Table& t, std::size_t a) {
    std::map<std::string, std::vector<std::string>> hist;
    for (const auto& run : t.runs) {
        std::vector<std::string> h;
        for (const auto& row : run) {
            if (h.empty() || h.back() != row[a])
                h.push_back(row[a]);
            auto [it, fresh] = hist.emplace(row[a], h);
            if (!fresh && it->second != h)
                return false;
        }
    }
    return true;
}

// Random synchronous table with two agents; tokens carry the time.
inline Table random_table(std::mt19937_64& rng, bool with_measure) {
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    Table t;
    t.agents = {"1", "2"};
    t.horizon = pick(0, 2);
    std::size_t runs = pick(1, 4);
    std::size_t syms = pick(1, 3);
    std::set<std::vector<std::vector<std::string>>> used;
    for (std::size_t r = 0; r < runs; ++r) {
        std::vector<std::vector<std::string>> states;
        for (std::size_t m = 0; m <= t.horizon; ++m) {
            std::vector<std::string> row;
            for (int a = 0; a < 2; ++a)
                row.push_back(std::string(1, char('a' + pick(0, syms - 1))) + "@" + std::to_string(m));
            states.push_back(row);
        }
        if (!used.insert(states).second)
            continue;
        t.ids.push_back("r" + std::to_string(t.runs.size() + 1));
        t.runs.push_back(states);
    }
    if (with_measure) {
        Q total = 0;
        for (std::size_t r = 0; r < t.runs.size(); ++r) {
            t.mu.push_back(Q(long(pick(1, 9))));
            total += t.mu.back();
        }
        for (auto& w : t.mu)
            w /= total;
    }
    return t;
}

inline Json to_spec(const Table& t) {
    Json runs = Json::array();
    for (std::size_t r = 0; r < t.runs.size(); ++r) {
        Json states = Json::array();
        for (const auto& row : t.runs[r]) {
            Json s = Json::array();
            for (const auto& l : row)
                s.push_back(l);
            states.push_back(s);
        }
        runs.push_back(Json{{"id", t.ids[r]}, {"states", states}});
    }
    Json doc = Json::object();
    doc["agents"] = t.agents;
    doc["mode"] = t.synchronous ? "synchronous" : "asynchronous";
    doc["horizon"] = t.horizon;
    doc["runs"] = runs;
    if (!t.mu.empty()) {
        Json m = Json::object();
        for (std::size_t r = 0; r < t.runs.size(); ++r)
            m[t.ids[r]] = t.mu[r].get_str();
        doc["measure"] = m;
    }
    return doc;
}

} // namespace oracle

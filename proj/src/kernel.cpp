#include "runsec/kernel.hpp"

#include <algorithm>
#include <unordered_set>

namespace runsec {

System::System(std::vector<std::string> agents, std::vector<Run> runs, std::size_t horizon, TimeMode mode)
    : agents_(std::move(agents)), runs_(std::move(runs)), horizon_(horizon), mode_(mode) {
    if (agents_.empty())
        throw Error("system has no agents");
    if (runs_.empty())
        throw Error("system has no runs");
    {
        std::unordered_set<std::string> seen;
        for (const auto& a : agents_)
            if (!seen.insert(a).second)
                throw Error("duplicate agent '" + a + "'");
    }
    for (std::size_t r = 0; r < runs_.size(); ++r) {
        auto& run = runs_[r];
        if (!run_ids_.emplace(run.id, r).second)
            throw Error("duplicate run id '" + run.id + "'");
        if (run.states.empty())
            throw Error("run '" + run.id + "' has no states");
        if (run.states.size() > horizon_ + 1)
            throw Error("run '" + run.id + "' is longer than horizon " + std::to_string(horizon_));
        if (run.states.size() < horizon_ + 1) {
            if (mode_ == TimeMode::synchronous)
                throw Error("run '" + run.id + "' has " + std::to_string(run.states.size()) +
                            " states; synchronous runs need horizon+1");
            run.states.resize(horizon_ + 1, run.states.back());
        }
        for (std::size_t m = 0; m < run.states.size(); ++m)
            if (run.states[m].locals.size() != agents_.size())
                throw Error("run '" + run.id + "' time " + std::to_string(m) + ": expected " +
                            std::to_string(agents_.size()) + " local states");
    }

    index_.resize(agents_.size());
    for (AgentId a = 0; a < agents_.size(); ++a) {
        auto& ix = index_[a];
        ix.local_of_point.resize(point_count());
        for (std::size_t k = 0; k < point_count(); ++k) {
            const auto& tok = local(a, point(k));
            auto [it, fresh] = ix.ids.emplace(tok, ix.tokens.size());
            if (fresh) {
                ix.tokens.push_back(tok);
                ix.members.emplace_back();
            }
            ix.local_of_point[k] = it->second;
            ix.members[it->second].push_back(k);
        }
    }

    if (mode_ == TimeMode::synchronous && !is_synchronous(*this))
        throw Error("system declared synchronous but some local state occurs at two different times");
}

AgentId System::agent(std::string_view name) const {
    for (AgentId a = 0; a < agents_.size(); ++a)
        if (agents_[a] == name)
            return a;
    throw Error("unknown agent '" + std::string(name) + "'");
}

bool System::has_agent(std::string_view name) const {
    return std::find(agents_.begin(), agents_.end(), name) != agents_.end();
}

std::size_t System::run_index(std::string_view id) const {
    auto it = run_ids_.find(std::string(id));
    if (it == run_ids_.end())
        throw Error("unknown run '" + std::string(id) + "'");
    return it->second;
}

void System::check_point(Point p) const {
    if (p.run >= runs_.size() || p.time > horizon_)
        throw Error("point out of range: (" + std::to_string(p.run) + "," + std::to_string(p.time) + ")");
}

LocalId System::find_local(AgentId a, std::string_view token) const {
    auto it = index_.at(a).ids.find(std::string(token));
    if (it == index_[a].ids.end())
        throw Error("agent '" + agents_[a] + "' has no local state '" + std::string(token) + "'");
    return it->second;
}

bool System::has_local(AgentId a, std::string_view token) const {
    return index_.at(a).ids.count(std::string(token)) > 0;
}

PointSet System::info_points(AgentId a, LocalId l) const {
    PointSet s(point_count());
    for (auto k : members(a, l))
        s.set(k);
    return s;
}

RunSet System::info_runs(AgentId a, LocalId l) const {
    RunSet s(run_count());
    for (auto k : members(a, l))
        s.set(k / (horizon_ + 1));
    return s;
}

std::string System::point_label(Point p) const {
    return "(" + runs_.at(p.run).id + "," + std::to_string(p.time) + ")";
}

std::vector<Point> points(const System& sys) {
    std::vector<Point> out;
    out.reserve(sys.point_count());
    for (std::size_t k = 0; k < sys.point_count(); ++k)
        out.push_back(sys.point(k));
    return out;
}

InformationSet info_set(const System& sys, AgentId i, Point p) {
    sys.check_point(p);
    if (i >= sys.agent_count())
        throw Error("unknown agent index " + std::to_string(i));
    LocalId l = sys.local_id(i, p);
    return {i, l, sys.local_token(i, l), sys.info_points(i, l)};
}

RunSet runs_through(const System& sys, const PointSet& u) {
    RunSet out(sys.run_count());
    for (auto k = u.find_first(); k != PointSet::npos; k = u.find_next(k))
        out.set(sys.point(k).run);
    return out;
}

PointSet points_on(const System& sys, const RunSet& runs) {
    PointSet out(sys.point_count());
    for (auto r = runs.find_first(); r != RunSet::npos; r = runs.find_next(r))
        for (std::size_t m = 0; m <= sys.horizon(); ++m)
            out.set(sys.index({r, m}));
    return out;
}

bool is_synchronous(const System& sys) {
    for (AgentId a = 0; a < sys.agent_count(); ++a)
        for (LocalId l = 0; l < sys.local_count(a); ++l) {
            const auto& mem = sys.members(a, l);
            auto t = sys.point(mem.front()).time;
            for (auto k : mem)
                if (sys.point(k).time != t)
                    return false;
        }
    return true;
}

namespace {

// Hash-consed de-duplicated local-state sequences: id per point.
std::vector<std::size_t> history_ids(const System& sys, AgentId i) {
    std::map<std::pair<std::size_t, LocalId>, std::size_t> intern;
    std::vector<std::size_t> out(sys.point_count());
    const std::size_t root = static_cast<std::size_t>(-1);
    for (std::size_t r = 0; r < sys.run_count(); ++r) {
        std::size_t cur = root;
        LocalId prev = 0;
        for (std::size_t m = 0; m <= sys.horizon(); ++m) {
            LocalId l = sys.local_id(i, {r, m});
            if (m == 0 || l != prev) {
                auto [it, fresh] = intern.emplace(std::pair{cur, l}, intern.size());
                (void)fresh;
                cur = it->second;
            }
            prev = l;
            out[sys.index({r, m})] = cur;
        }
    }
    return out;
}

} // namespace

bool has_perfect_recall(const System& sys, AgentId i) {
    auto hist = history_ids(sys, i);
    for (LocalId l = 0; l < sys.local_count(i); ++l) {
        const auto& mem = sys.members(i, l);
        for (auto k : mem)
            if (hist[k] != hist[mem.front()])
                return false;
    }
    return true;
}

std::vector<std::string> local_state_sequence(const System& sys, AgentId i, Point p) {
    sys.check_point(p);
    std::vector<std::string> out;
    for (std::size_t m = 0; m <= p.time; ++m) {
        const auto& tok = sys.local(i, {p.run, m});
        if (out.empty() || out.back() != tok)
            out.push_back(tok);
    }
    return out;
}

std::string to_string(const Allowability& c) {
    switch (c.kind) {
    case Allowability::Kind::total: return "total";
    case Allowability::Kind::synchronous: return "synchronous";
    case Allowability::Kind::semisynchronous: return "semisynchronous(" + std::to_string(c.epsilon) + ")";
    case Allowability::Kind::explicit_table: return "explicit";
    }
    return "?";
}

PointSet allowability_points(const Allowability& c, const System& sys, Point p) {
    sys.check_point(p);
    PointSet out(sys.point_count());
    switch (c.kind) {
    case Allowability::Kind::total:
        out.set();
        break;
    case Allowability::Kind::synchronous:
        for (std::size_t r = 0; r < sys.run_count(); ++r)
            out.set(sys.index({r, p.time}));
        break;
    case Allowability::Kind::semisynchronous: {
        std::size_t lo = p.time > c.epsilon ? p.time - c.epsilon : 0;
        std::size_t hi = std::min(sys.horizon(), p.time + c.epsilon);
        for (std::size_t r = 0; r < sys.run_count(); ++r)
            for (std::size_t m = lo; m <= hi; ++m)
                out.set(sys.index({r, m}));
        break;
    }
    case Allowability::Kind::explicit_table: {
        auto it = c.table.find(p);
        if (it == c.table.end())
            throw Error("allowability table has no entry for " + sys.point_label(p));
        for (auto q : it->second) {
            sys.check_point(q);
            out.set(sys.index(q));
        }
        break;
    }
    }
    return out;
}

void validate_allowability(const Allowability& c, const System& sys, AgentId i) {
    if (c.kind == Allowability::Kind::total)
        return;
    for (std::size_t k = 0; k < sys.point_count(); ++k) {
        Point p = sys.point(k);
        auto cp = allowability_points(c, sys, p);
        for (auto q : sys.members(i, sys.local_id(i, p)))
            if (!cp.test(q))
                throw Error("allowability " + to_string(c) + " at " + sys.point_label(p) + " omits " +
                            sys.point_label(sys.point(q)) + " from K_" + sys.agent_name(i));
    }
}

bool depends_only_on_timing(const Allowability& c, const System& sys) {
    const std::size_t R = sys.run_count(), M = sys.horizon();
    std::vector<PointSet> cs;
    cs.reserve(sys.point_count());
    for (std::size_t k = 0; k < sys.point_count(); ++k)
        cs.push_back(allowability_points(c, sys, sys.point(k)));
    auto in = [&](std::size_t r, std::size_t m, std::size_t r2, std::size_t m2) {
        return cs[sys.index({r, m})].test(sys.index({r2, m2}));
    };
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t r2 = 0; r2 < R; ++r2) {
            // (a)
            for (std::size_t m2 = 0; m2 <= M; ++m2) {
                bool found = false;
                for (std::size_t m = 0; m <= M && !found; ++m)
                    found = in(r, m, r2, m2);
                if (!found)
                    return false;
            }
            for (std::size_t m = 0; m <= M; ++m)
                for (std::size_t m2 = 0; m2 <= M; ++m2) {
                    if (!in(r, m, r2, m2))
                        continue;
                    // (b)
                    for (std::size_t n = 0; n <= M; ++n) {
                        bool found = false;
                        if (n >= m)
                            for (std::size_t n2 = m2; n2 <= M && !found; ++n2)
                                found = in(r, n, r2, n2);
                        if (n <= m)
                            for (std::size_t n2 = 0; n2 <= m2 && !found; ++n2)
                                found = in(r, n, r2, n2);
                        if (!found)
                            return false;
                    }
                    // (c)
                    for (std::size_t n2 = m2 + 1; n2 <= M; ++n2) {
                        if (!in(r, m, r2, n2))
                            continue;
                        for (std::size_t mid = m2 + 1; mid < n2; ++mid)
                            if (!in(r, m, r2, mid))
                                return false;
                    }
                }
        }
    return true;
}

void validate_info_function(const InfoFunction& f, const System& sys) {
    if (f.agent >= sys.agent_count())
        throw Error("information function refers to unknown agent index");
    for (LocalId l = 0; l < sys.local_count(f.agent); ++l)
        if (!f.map.count(sys.local_token(f.agent, l)))
            throw Error("information function for agent '" + sys.agent_name(f.agent) +
                        "' is undefined on local state '" + sys.local_token(f.agent, l) + "'");
}

System with_agent(const System& sys, const std::string& name, const std::function<std::string(Point)>& label) {
    if (sys.has_agent(name))
        throw Error("agent '" + name + "' already exists");
    auto agents = sys.agents();
    agents.push_back(name);
    std::vector<Run> runs = sys.runs();
    for (std::size_t r = 0; r < runs.size(); ++r)
        for (std::size_t m = 0; m < runs[r].states.size(); ++m)
            runs[r].states[m].locals.push_back(label({r, m}));
    System out(agents, runs, sys.horizon(), TimeMode::asynchronous_stutter);
    if (sys.mode() == TimeMode::synchronous && is_synchronous(out))
        return System(std::move(agents), std::move(runs), sys.horizon(), TimeMode::synchronous);
    return out;
}

System derive_agent(const System& sys, const InfoFunction& f, const std::string& name, bool timestamp) {
    validate_info_function(f, sys);
    return with_agent(sys, name, [&](Point p) {
        const auto& v = f.map.at(sys.local(f.agent, p));
        return timestamp ? v + "@" + std::to_string(p.time) : v;
    });
}

} // namespace runsec

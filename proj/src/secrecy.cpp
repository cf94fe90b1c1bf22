#include "runsec/secrecy.hpp"

#include <map>
#include <set>
#include <unordered_map>

namespace runsec {

std::string to_string(Failure f) {
    switch (f) {
    case Failure::none: return "none";
    case Failure::empty_intersection: return "empty_intersection";
    case Failure::unequal: return "unequal";
    case Failure::non_measurable: return "non_measurable";
    case Failure::precondition: return "precondition";
    }
    return "?";
}

namespace {

void require_agents(const System& sys, AgentId i, AgentId j) {
    if (i >= sys.agent_count() || j >= sys.agent_count())
        throw Error("unknown agent index");
}

// cooc[a] = j-states sharing a point with i-state a.
std::vector<IndexSet> point_cooccurrence(const System& sys, AgentId i, AgentId j) {
    std::vector<IndexSet> cooc(sys.local_count(i), IndexSet(sys.local_count(j)));
    for (std::size_t k = 0; k < sys.point_count(); ++k) {
        Point p = sys.point(k);
        cooc[sys.local_id(i, p)].set(sys.local_id(j, p));
    }
    return cooc;
}

// j-states present at each time.
std::vector<IndexSet> states_by_time(const System& sys, AgentId j) {
    std::vector<IndexSet> out(sys.horizon() + 1, IndexSet(sys.local_count(j)));
    for (std::size_t k = 0; k < sys.point_count(); ++k) {
        Point p = sys.point(k);
        out[p.time].set(sys.local_id(j, p));
    }
    return out;
}

SecrecyVerdict pair_failure(const System& sys, AgentId i, AgentId j, Point p, Point q, const char* what) {
    Counterexample cx;
    cx.points = {p, q};
    cx.detail = std::string(what) + ": K_" + sys.agent_name(i) + sys.point_label(p) + " [" +
                sys.local(i, p) + "] vs K_" + sys.agent_name(j) + sys.point_label(q) + " [" + sys.local(j, q) + "]";
    return SecrecyVerdict::fail(Failure::empty_intersection, std::move(cx));
}

} // namespace

SecrecyVerdict check_C_secrecy(const System& sys, AgentId i, AgentId j, const Allowability& c) {
    require_agents(sys, i, j);
    validate_allowability(c, sys, i);
    auto cooc = point_cooccurrence(sys, i, j);
    const std::size_t nj = sys.local_count(j);

    std::vector<IndexSet> by_time;
    IndexSet all_j(nj);
    all_j.set();
    if (c.kind == Allowability::Kind::synchronous || c.kind == Allowability::Kind::semisynchronous) {
        auto per = states_by_time(sys, j);
        std::size_t eps = c.kind == Allowability::Kind::synchronous ? 0 : c.epsilon;
        by_time.assign(per.size(), IndexSet(nj));
        for (std::size_t m = 0; m < per.size(); ++m)
            for (std::size_t n = (m > eps ? m - eps : 0); n <= std::min(sys.horizon(), m + eps); ++n)
                by_time[m] |= per[n];
    }

    std::map<std::pair<LocalId, std::size_t>, bool> ok_cache;
    for (std::size_t k = 0; k < sys.point_count(); ++k) {
        Point p = sys.point(k);
        LocalId a = sys.local_id(i, p);
        bool ok;
        if (c.kind == Allowability::Kind::explicit_table) {
            auto cp = allowability_points(c, sys, p);
            ok = true;
            for (auto q = cp.find_first(); ok && q != PointSet::npos; q = cp.find_next(q))
                ok = cooc[a].test(sys.local_id(j, sys.point(q)));
        } else {
            std::size_t key = c.kind == Allowability::Kind::total ? 0 : p.time;
            auto it = ok_cache.find({a, key});
            if (it == ok_cache.end()) {
                const IndexSet& need = c.kind == Allowability::Kind::total ? all_j : by_time[key];
                it = ok_cache.emplace(std::pair{a, key}, need.is_subset_of(cooc[a])).first;
            }
            ok = it->second;
        }
        if (ok)
            continue;
        auto cp = allowability_points(c, sys, p);
        for (auto q = cp.find_first(); q != PointSet::npos; q = cp.find_next(q)) {
            Point qp = sys.point(q);
            if (!cooc[a].test(sys.local_id(j, qp)))
                return pair_failure(sys, i, j, p, qp, "empty intersection");
        }
    }
    return SecrecyVerdict::pass(to_string(c) + " secrecy: every allowed pair of information sets intersects");
}

SecrecyVerdict check_total_secrecy(const System& sys, AgentId i, AgentId j) {
    if (i == j)
        throw Error("total secrecy needs distinct agents");
    return check_C_secrecy(sys, i, j, Allowability::make_total());
}

SecrecyVerdict check_synchronous_secrecy(const System& sys, AgentId i, AgentId j) {
    if (!is_synchronous(sys))
        throw Error("synchronous secrecy requires a synchronous system");
    return check_C_secrecy(sys, i, j, Allowability::make_synchronous());
}

SecrecyVerdict check_run_based_secrecy(const System& sys, AgentId i, AgentId j) {
    require_agents(sys, i, j);
    if (i == j)
        throw Error("run-based secrecy needs distinct agents");
    const std::size_t ni = sys.local_count(i), nj = sys.local_count(j);
    std::vector<IndexSet> rcooc(ni, IndexSet(nj));
    for (std::size_t r = 0; r < sys.run_count(); ++r) {
        IndexSet si(ni), sj(nj);
        for (std::size_t m = 0; m <= sys.horizon(); ++m) {
            si.set(sys.local_id(i, {r, m}));
            sj.set(sys.local_id(j, {r, m}));
        }
        for (auto a = si.find_first(); a != IndexSet::npos; a = si.find_next(a))
            rcooc[a] |= sj;
    }
    for (std::size_t k = 0; k < sys.point_count(); ++k) {
        Point p = sys.point(k);
        LocalId a = sys.local_id(i, p);
        if (rcooc[a].all())
            continue;
        for (std::size_t q = 0; q < sys.point_count(); ++q) {
            Point qp = sys.point(q);
            if (!rcooc[a].test(sys.local_id(j, qp)))
                return pair_failure(sys, i, j, p, qp, "disjoint run sets");
        }
    }
    return SecrecyVerdict::pass("run-based secrecy: every pair of information sets shares a run");
}

SecrecyVerdict check_f_secrecy(const System& sys, AgentId i, const InfoFunction& f, const Allowability& c) {
    auto name = "f(" + sys.agent_name(f.agent) + ")";
    auto derived = derive_agent(sys, f, name);
    auto v = check_C_secrecy(derived, i, derived.agent(name), c);
    v.note = "via derived agent " + name + "; " + v.note;
    return v;
}

SecrecyVerdict check_f_run_based_secrecy(const System& sys, AgentId i, const InfoFunction& f) {
    auto name = "f(" + sys.agent_name(f.agent) + ")";
    auto derived = derive_agent(sys, f, name);
    auto v = check_run_based_secrecy(derived, i, derived.agent(name));
    v.note = "via derived agent " + name + "; " + v.note;
    return v;
}

SecrecyVerdict check_nondeducibility(const std::vector<std::string>& g, const std::vector<std::string>& h) {
    if (g.size() != h.size())
        throw Error("nondeducibility: g and h must cover the same worlds");
    std::set<std::pair<std::string, std::string>> realized;
    for (std::size_t w = 0; w < g.size(); ++w)
        realized.emplace(g[w], h[w]);
    std::map<std::string, bool> done_g;
    for (std::size_t w = 0; w < g.size(); ++w) {
        if (done_g.count(g[w]))
            continue;
        done_g[g[w]] = true;
        for (std::size_t w2 = 0; w2 < h.size(); ++w2)
            if (!realized.count({g[w], h[w2]})) {
                Counterexample cx;
                cx.indices = {w, w2};
                cx.detail = "no world with g = " + g[w] + " and h = " + h[w2];
                return SecrecyVerdict::fail(Failure::empty_intersection, std::move(cx));
            }
    }
    return SecrecyVerdict::pass("every (g, h) value pair is realized");
}

} // namespace runsec

#include "runsec/epistemic.hpp"

namespace runsec {

namespace {

bool matches(const System& sys, const StatePredicate& sp, Point p) {
    const auto& tok = sp.agent ? sys.local(sys.agent(*sp.agent), p) : sys.state(p).env;
    return sp.tokens.count(tok) > 0;
}

} // namespace

PointSet Evaluator::extension(const Formula& f) {
    std::string key = to_string(f);
    auto it = memo_.find(key);
    if (it != memo_.end())
        return it->second;
    auto s = compute(f);
    memo_.emplace(std::move(key), s);
    return s;
}

PointSet Evaluator::compute(const Formula& f) {
    const System& sys = is_.sys;
    switch (f.kind) {
    case Formula::Kind::prim: {
        auto it = is_.pi.find(f.name);
        if (it == is_.pi.end())
            throw Error("unknown proposition '" + f.name + "'");
        for (const auto& sp : it->second)
            if (sp.agent)
                sys.agent(*sp.agent);
        PointSet s = sys.empty_points();
        for (std::size_t k = 0; k < sys.point_count(); ++k)
            for (const auto& sp : it->second)
                if (matches(sys, sp, sys.point(k))) {
                    s.set(k);
                    break;
                }
        return s;
    }
    case Formula::Kind::negation:
        return ~extension(*f.left);
    case Formula::Kind::conjunction:
        return extension(*f.left) & extension(*f.right);
    case Formula::Kind::knows:
    case Formula::Kind::possible: {
        AgentId i = sys.agent(f.name);
        auto inner = extension(*f.left);
        PointSet s = sys.empty_points();
        for (LocalId l = 0; l < sys.local_count(i); ++l) {
            auto info = sys.info_points(i, l);
            bool sat = f.kind == Formula::Kind::knows ? info.is_subset_of(inner) : info.intersects(inner);
            if (sat)
                s |= info;
        }
        return s;
    }
    case Formula::Kind::once:
        return points_on(sys, runs_through(sys, extension(*f.left)));
    case Formula::Kind::pr: {
        AgentId i = sys.agent(f.name);
        PointSet s = sys.empty_points();
        for (LocalId l = 0; l < sys.local_count(i); ++l) {
            Point p = sys.point(sys.members(i, l).front());
            if (compare(probability(i, *f.left, p), f.cmp, f.bound))
                s |= sys.info_points(i, l);
        }
        return s;
    }
    }
    throw Error("bad formula node");
}

Rational Evaluator::probability(AgentId i, const Formula& f, Point p) {
    if (!is_.mu)
        throw Error("probability formulas need a run measure");
    auto pm = ht_point_measure(is_.sys, *is_.mu, i, p);
    auto v = pm.measure(extension(f));
    if (!v)
        throw Error("extension of " + to_string(f) + " is not measurable in K_" + is_.sys.agent_name(i) +
                    is_.sys.point_label(p));
    return *v;
}

bool eval(const InterpretedSystem& is, Point p, const Formula& f) {
    is.sys.check_point(p);
    Evaluator ev(is);
    return ev.holds(p, f);
}

bool is_union_of_info_sets(const System& sys, AgentId j, const PointSet& s) {
    for (LocalId l = 0; l < sys.local_count(j); ++l) {
        const auto& mem = sys.members(j, l);
        bool first = s.test(mem.front());
        for (auto k : mem)
            if (s.test(k) != first)
                return false;
    }
    return true;
}

bool is_j_local(const InterpretedSystem& is, AgentId j, const Formula& f) {
    Evaluator ev(is);
    return is_union_of_info_sets(is.sys, j, ev.extension(f));
}

std::vector<JLocalSet> j_local_family(const System& sys, AgentId j, std::size_t bound) {
    const std::size_t n = sys.local_count(j);
    if (n > bound)
        throw Error("agent '" + sys.agent_name(j) + "' has " + std::to_string(n) +
                    " information sets; j-local enumeration bound is " + std::to_string(bound));
    std::vector<PointSet> info;
    for (LocalId l = 0; l < n; ++l)
        info.push_back(sys.info_points(j, l));
    std::vector<JLocalSet> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        JLocalSet s{IndexSet(n), sys.empty_points()};
        for (LocalId l = 0; l < n; ++l)
            if (mask >> l & 1) {
                s.locals.set(l);
                s.points |= info[l];
            }
        out.push_back(std::move(s));
    }
    return out;
}

Interpretation j_local_interpretation(const System& sys, AgentId j, const IndexSet& locals) {
    StatePredicate sp{sys.agent_name(j), {}};
    for (auto l = locals.find_first(); l != IndexSet::npos; l = locals.find_next(l))
        sp.tokens.insert(sys.local_token(j, l));
    return {{oracle_prop, {sp}}};
}

bool oracle_C_secrecy(const System& sys, AgentId i, AgentId j, const Allowability& c, std::size_t bound) {
    validate_allowability(c, sys, i);
    std::vector<PointSet> allowed;
    for (std::size_t k = 0; k < sys.point_count(); ++k)
        allowed.push_back(allowability_points(c, sys, sys.point(k)));
    auto f = possible(sys.agent_name(i), prim(oracle_prop));
    for (const auto& s : j_local_family(sys, j, bound)) {
        InterpretedSystem is{sys, j_local_interpretation(sys, j, s.locals)};
        Evaluator ev(is);
        for (std::size_t k = 0; k < sys.point_count(); ++k)
            if (allowed[k].intersects(s.points) && !ev.holds(sys.point(k), *f))
                return false;
    }
    return true;
}

bool oracle_run_based_secrecy(const System& sys, AgentId i, AgentId j, std::size_t bound) {
    auto f = possible(sys.agent_name(i), once(prim(oracle_prop)));
    for (const auto& s : j_local_family(sys, j, bound)) {
        if (s.points.none())
            continue;
        InterpretedSystem is{sys, j_local_interpretation(sys, j, s.locals)};
        Evaluator ev(is);
        if (!ev.extension(*f).all())
            return false;
    }
    return true;
}

} // namespace runsec

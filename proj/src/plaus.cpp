#include "runsec/plaus.hpp"

namespace runsec {

namespace {

Rational mass(const std::vector<Rational>& w, const IndexSet& s) {
    Rational out = 0;
    for (auto k = s.find_first(); k != IndexSet::npos; k = s.find_next(k))
        out += w[k];
    return out;
}

} // namespace

MeasureVectorDomain::Value MeasureVectorDomain::plus(const Value& a, const Value& b) const {
    Value out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!a[k] || !b[k])
            continue;
        Rational s = *a[k] + *b[k];
        out[k] = s > 1 ? Rational(1) : s;
    }
    return out;
}

MeasureVectorDomain::Value MeasureVectorDomain::times(const Value& a, const Value& b) const {
    Value out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if ((a[k] && *a[k] == 0) || (b[k] && *b[k] == 0))
            out[k] = Rational(0);
        else if (a[k] && b[k])
            out[k] = *a[k] * *b[k];
    }
    return out;
}

bool MeasureVectorDomain::leq(const Value& a, const Value& b) const {
    for (std::size_t k = 0; k < n; ++k) {
        if (!a[k] || !b[k]) {
            if (a[k].has_value() != b[k].has_value())
                return false;
            continue;
        }
        if (*a[k] > *b[k])
            return false;
    }
    return true;
}

bool MeasureVectorDomain::is_bottom(const Value& v) const {
    for (const auto& c : v)
        if (c && *c != 0)
            return false;
    return true;
}

std::string MeasureVectorDomain::show(const Value& v) const {
    std::string out = "(";
    for (std::size_t k = 0; k < v.size(); ++k)
        out += (k ? "," : "") + (v[k] ? to_string(*v[k]) : std::string("*"));
    return out + ")";
}

PlausibilitySpace<TrivialDomain> trivial_space(std::size_t carrier) {
    return PlausibilitySpace<TrivialDomain>(
        TrivialDomain{}, carrier, [](const IndexSet& u) { return u.any(); },
        [](const IndexSet& v, const IndexSet& u) { return v.intersects(u) ? 1 : 0; });
}

PlausibilitySpace<ProbabilityDomain> probability_space(std::vector<Rational> weights) {
    auto w = std::make_shared<const std::vector<Rational>>(std::move(weights));
    std::size_t n = w->size();
    return PlausibilitySpace<ProbabilityDomain>(
        ProbabilityDomain{}, n, [w](const IndexSet& u) { return mass(*w, u) > 0; },
        [w](const IndexSet& v, const IndexSet& u) { return Rational(mass(*w, v & u) / mass(*w, u)); });
}

PlausibilitySpace<MeasureVectorDomain> measure_vector_space(std::vector<std::vector<Rational>> weights) {
    if (weights.empty())
        throw Error("measure-vector domain needs at least one measure");
    auto w = std::make_shared<const std::vector<std::vector<Rational>>>(std::move(weights));
    std::size_t n = w->front().size();
    MeasureVectorDomain dom{w->size()};
    return PlausibilitySpace<MeasureVectorDomain>(
        dom, n,
        [w](const IndexSet& u) {
            for (const auto& m : *w)
                if (mass(m, u) > 0)
                    return true;
            return false;
        },
        [w](const IndexSet& v, const IndexSet& u) {
            MeasureVectorDomain::Value out;
            for (const auto& m : *w) {
                Rational mu = mass(m, u);
                if (mu == 0)
                    out.emplace_back(std::nullopt);
                else
                    out.emplace_back(mass(m, v & u) / mu);
            }
            return out;
        });
}

PlausibilitySpace<MeasureVectorDomain> measure_vector_run_space(const std::vector<RunMeasure>& mus) {
    std::vector<std::vector<Rational>> w;
    for (const auto& m : mus)
        w.push_back(m.weights());
    return measure_vector_space(std::move(w));
}

PlausibilitySpace<MeasureVectorDomain> measure_vector_point_space(const std::vector<CommonPrior>& cps) {
    std::vector<std::vector<Rational>> w;
    for (const auto& cp : cps)
        w.push_back(cp.weights);
    return measure_vector_space(std::move(w));
}

std::vector<IndexSet> axiom_family(std::size_t carrier, const std::vector<IndexSet>& generators,
                                   std::size_t exhaustive_limit) {
    std::vector<IndexSet> out;
    if (carrier <= exhaustive_limit) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << carrier); ++mask) {
            IndexSet s(carrier);
            for (std::size_t k = 0; k < carrier; ++k)
                if (mask >> k & 1)
                    s.set(k);
            out.push_back(s);
        }
        return out;
    }
    std::set<IndexSet> fam;
    IndexSet all(carrier);
    all.set();
    fam.insert(IndexSet(carrier));
    fam.insert(all);
    for (const auto& g : generators)
        fam.insert(g);
    bool grew = true;
    while (grew && fam.size() < 256) {
        grew = false;
        std::vector<IndexSet> cur(fam.begin(), fam.end());
        for (const auto& a : cur)
            for (const auto& b : cur)
                if (fam.insert(a & b).second)
                    grew = true;
    }
    return {fam.begin(), fam.end()};
}

std::string to_string(SymmetryStatus s) {
    switch (s) {
    case SymmetryStatus::verified: return "verified";
    case SymmetryStatus::violated: return "violated";
    case SymmetryStatus::skipped_noncommutative: return "skipped (non-commutative)";
    case SymmetryStatus::skipped_hypotheses: return "skipped (hypotheses not met)";
    }
    return "?";
}

} // namespace runsec

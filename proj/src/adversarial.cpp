#include "runsec/adversarial.hpp"

#include <algorithm>
#include <set>

namespace runsec {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k)
        out += (k ? sep : "") + parts[k];
    return out;
}

// The other agents' choices on a cell, for agent i.
std::string others_key(const InitStructure& init, std::size_t run, AgentId i) {
    std::vector<std::string> rest;
    for (std::size_t k = 0; k < init.choice[run].size(); ++k)
        if (k != i)
            rest.push_back(init.choice[run][k]);
    return join(rest, ",");
}

Rational random_weight(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> d(1, 9);
    return Rational(d(rng));
}

std::vector<Rational> normalized(std::vector<Rational> w) {
    Rational total = 0;
    for (const auto& x : w)
        total += x;
    for (auto& x : w)
        x /= total;
    return w;
}

struct ProductIndex {
    std::vector<std::string> own, others; // distinct values, first-seen order
    std::vector<std::size_t> own_of_cell, others_of_cell;
};

ProductIndex product_index(const AdversarialSystem& adv, AgentId i) {
    if (!adv.init())
        throw Error("the M^INIT family needs an INIT-determined adversarial system");
    const auto& init = *adv.init();
    ProductIndex px;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t c = 0; c < adv.cell_count(); ++c) {
        std::size_t r = adv.cell_runs(c).find_first();
        auto own = init.choice[r][i];
        auto rest = others_key(init, r, i);
        auto oi = std::find(px.own.begin(), px.own.end(), own) - px.own.begin();
        if (oi == static_cast<long>(px.own.size()))
            px.own.push_back(own);
        auto ri = std::find(px.others.begin(), px.others.end(), rest) - px.others.begin();
        if (ri == static_cast<long>(px.others.size()))
            px.others.push_back(rest);
        px.own_of_cell.push_back(oi);
        px.others_of_cell.push_back(ri);
        seen.emplace(oi, ri);
    }
    if (seen.size() != px.own.size() * px.others.size())
        throw Error("INIT cells do not form a full product for agent '" + adv.base().agent_name(i) +
                    "'; the product constraint cannot be met");
    return px;
}

} // namespace

AdversarialSystem::AdversarialSystem(System base, std::vector<std::string> cell_ids,
                                     std::vector<std::vector<std::size_t>> cells, std::vector<RunMeasure> cell_measures)
    : base_(std::move(base)), ids_(std::move(cell_ids)), measures_(std::move(cell_measures)) {
    if (ids_.size() != cells.size() || ids_.size() != measures_.size())
        throw Error("cells, cell ids and cell measures differ in number");
    const std::size_t none = static_cast<std::size_t>(-1);
    cell_of_run_.assign(base_.run_count(), none);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        RunSet rs = base_.empty_runs();
        if (cells[c].empty())
            throw Error("cell '" + ids_[c] + "' is empty");
        for (auto r : cells[c]) {
            if (r >= base_.run_count())
                throw Error("cell '" + ids_[c] + "' refers to an unknown run");
            if (cell_of_run_[r] != none)
                throw Error("run '" + base_.run(r).id + "' lies in two cells");
            cell_of_run_[r] = c;
            rs.set(r);
        }
        cell_runs_.push_back(rs);
        if (measures_[c].size() != base_.run_count())
            throw Error("measure of cell '" + ids_[c] + "' does not cover the runs");
        for (std::size_t r = 0; r < base_.run_count(); ++r)
            if (!rs.test(r) && measures_[c].weight(r) != 0)
                throw Error("measure of cell '" + ids_[c] + "' puts weight on run '" + base_.run(r).id +
                            "' outside the cell");
    }
    for (std::size_t r = 0; r < base_.run_count(); ++r)
        if (cell_of_run_[r] == none)
            throw Error("run '" + base_.run(r).id + "' lies in no cell");
    for (AgentId a = 0; a < base_.agent_count(); ++a)
        for (LocalId l = 0; l < base_.local_count(a); ++l) {
            RunSet rk = base_.info_runs(a, l);
            for (std::size_t c = 0; c < ids_.size(); ++c)
                if (rk.intersects(cell_runs_[c]) && measures_[c].measure(rk) == 0)
                    throw Error("cell '" + ids_[c] + "' meets the runs of agent '" + base_.agent_name(a) +
                                "' local state '" + base_.local_token(a, l) + "' but gives them probability 0");
        }
}

std::string AdversarialSystem::cell_key(const std::vector<std::string>& y) { return join(y, "|"); }

AdversarialSystem AdversarialSystem::from_init(System base, InitStructure init,
                                               const std::map<std::string, RunMeasure>& measures) {
    const std::size_t n = base.agent_count();
    if (init.values.size() != n)
        throw Error("INIT needs a choice set for each of the " + std::to_string(n) + " agents");
    if (init.choice.size() != base.run_count())
        throw Error("INIT assignment must cover every run");
    for (std::size_t r = 0; r < base.run_count(); ++r) {
        if (init.choice[r].size() != n)
            throw Error("INIT assignment of run '" + base.run(r).id + "' has the wrong arity");
        for (std::size_t k = 0; k < n; ++k)
            if (std::find(init.values[k].begin(), init.values[k].end(), init.choice[r][k]) == init.values[k].end())
                throw Error("run '" + base.run(r).id + "' makes choice '" + init.choice[r][k] +
                            "' outside INIT of agent '" + base.agent_name(k) + "'");
    }
    for (AgentId a = 0; a < n; ++a)
        for (LocalId l = 0; l < base.local_count(a); ++l) {
            RunSet rk = base.info_runs(a, l);
            std::size_t r0 = rk.find_first();
            for (auto r = rk.find_next(r0); r != RunSet::npos; r = rk.find_next(r))
                if (init.choice[r][a] != init.choice[r0][a])
                    throw Error("agent '" + base.agent_name(a) + "' in local state '" + base.local_token(a, l) +
                                "' cannot tell its own initial choice (runs '" + base.run(r0).id + "' and '" +
                                base.run(r).id + "')");
        }
    std::vector<std::string> ids;
    std::vector<std::vector<std::size_t>> cells;
    std::vector<RunMeasure> ms;
    std::map<std::string, std::size_t> pos;
    for (std::size_t r = 0; r < base.run_count(); ++r) {
        auto key = cell_key(init.choice[r]);
        auto [it, fresh] = pos.emplace(key, ids.size());
        if (fresh) {
            ids.push_back(key);
            cells.emplace_back();
            auto m = measures.find(key);
            if (m == measures.end())
                throw Error("no measure for cell '" + key + "'");
            ms.push_back(m->second);
        }
        cells[it->second].push_back(r);
    }
    for (const auto& [key, m] : measures)
        if (!pos.count(key))
            throw Error("measure given for empty cell '" + key + "'");
    AdversarialSystem adv(std::move(base), std::move(ids), std::move(cells), std::move(ms));
    adv.init_ = std::move(init);
    return adv;
}

std::size_t AdversarialSystem::cell_index(std::string_view id) const {
    for (std::size_t c = 0; c < ids_.size(); ++c)
        if (ids_[c] == id)
            return c;
    throw Error("unknown cell '" + std::string(id) + "'");
}

AdversarialSystem AdversarialSystem::with_base(System base) const {
    if (base.run_count() != base_.run_count())
        throw Error("replacement base system has a different run count");
    std::vector<std::vector<std::size_t>> cells(ids_.size());
    for (std::size_t r = 0; r < cell_of_run_.size(); ++r)
        cells[cell_of_run_[r]].push_back(r);
    AdversarialSystem out(std::move(base), ids_, std::move(cells), measures_);
    out.init_ = init_;
    return out;
}

SecrecyVerdict check_no_evidence(const AdversarialSystem& adv, AgentId i, NoEvidenceReading reading) {
    const System& sys = adv.base();
    const bool by_choice = reading == NoEvidenceReading::compatible_cells && adv.init().has_value();
    for (LocalId l = 0; l < sys.local_count(i); ++l) {
        RunSet rk = sys.info_runs(i, l);
        std::size_t r0 = rk.find_first();
        std::optional<std::pair<std::size_t, Rational>> first;
        for (std::size_t c = 0; c < adv.cell_count(); ++c) {
            bool compatible;
            if (by_choice) {
                std::size_t rc = adv.cell_runs(c).find_first();
                compatible = adv.init()->choice[rc][i] == adv.init()->choice[r0][i];
            } else {
                compatible = rk.intersects(adv.cell_runs(c));
            }
            if (!compatible)
                continue;
            Rational v = adv.cell_measure(c).measure(rk);
            if (!first) {
                first = std::pair{c, v};
            } else if (v != first->second) {
                Point p = sys.point(sys.members(i, l).front());
                Counterexample cx{{p}, {first->second, v}, {},
                                  "likelihood of K_" + sys.agent_name(i) + sys.point_label(p) + " is " +
                                      to_string(first->second) + " in cell " + adv.cell_id(first->first) + " but " +
                                      to_string(v) + " in cell " + adv.cell_id(c)};
                return SecrecyVerdict::fail(Failure::unequal, std::move(cx));
            }
        }
    }
    return SecrecyVerdict::pass("every information set has the same likelihood in all compatible cells");
}

RunMeasure sample_family_measure(const AdversarialSystem& adv, const std::vector<Rational>& weights) {
    if (weights.size() != adv.cell_count())
        throw Error("family weights must give one weight per cell");
    std::vector<Rational> w(adv.base().run_count(), 0);
    for (std::size_t c = 0; c < adv.cell_count(); ++c) {
        if (weights[c] < 0)
            throw Error("negative cell weight");
        const RunSet& rs = adv.cell_runs(c);
        for (auto r = rs.find_first(); r != RunSet::npos; r = rs.find_next(r))
            w[r] = weights[c] * adv.cell_measure(c).weight(r);
    }
    RunMeasure mu(std::move(w));
    validate_run_measure(mu, adv.base());
    return mu;
}

std::vector<Rational> canonical_weights(const AdversarialSystem& adv, const MeasureFamily& family) {
    switch (family.kind) {
    case MeasureFamily::Kind::singleton:
        return family.member;
    case MeasureFamily::Kind::init_product:
        product_index(adv, family.agent);
        [[fallthrough]];
    case MeasureFamily::Kind::cells:
        return std::vector<Rational>(adv.cell_count(), Rational(1, static_cast<unsigned long>(adv.cell_count())));
    }
    return {};
}

std::vector<Rational> sample_weights(const AdversarialSystem& adv, const MeasureFamily& family, std::mt19937_64& rng) {
    switch (family.kind) {
    case MeasureFamily::Kind::singleton:
        return family.member;
    case MeasureFamily::Kind::cells: {
        std::vector<Rational> w;
        for (std::size_t c = 0; c < adv.cell_count(); ++c)
            w.push_back(random_weight(rng));
        return normalized(std::move(w));
    }
    case MeasureFamily::Kind::init_product: {
        auto px = product_index(adv, family.agent);
        std::vector<Rational> a, b;
        for (std::size_t k = 0; k < px.own.size(); ++k)
            a.push_back(random_weight(rng));
        for (std::size_t k = 0; k < px.others.size(); ++k)
            b.push_back(random_weight(rng));
        std::vector<Rational> w;
        for (std::size_t c = 0; c < adv.cell_count(); ++c)
            w.push_back(a[px.own_of_cell[c]] * b[px.others_of_cell[c]]);
        return normalized(std::move(w));
    }
    }
    return {};
}

bool satisfies_init_product(const AdversarialSystem& adv, AgentId i, const std::vector<Rational>& weights) {
    auto px = product_index(adv, i);
    std::vector<Rational> own(px.own.size(), 0), others(px.others.size(), 0);
    for (std::size_t c = 0; c < adv.cell_count(); ++c) {
        own[px.own_of_cell[c]] += weights[c];
        others[px.others_of_cell[c]] += weights[c];
    }
    for (std::size_t c = 0; c < adv.cell_count(); ++c)
        if (weights[c] != own[px.own_of_cell[c]] * others[px.others_of_cell[c]])
            return false;
    return true;
}

AdversarialSystem with_others_choice_agent(const AdversarialSystem& adv, AgentId i, const std::string& name,
                                           bool timestamp) {
    if (!adv.init())
        throw Error("f_{i-} needs an INIT-determined adversarial system");
    const auto& init = *adv.init();
    auto base = with_agent(adv.base(), name, [&](Point p) {
        auto key = others_key(init, p.run, i);
        return timestamp ? key + "@" + std::to_string(p.time) : key;
    });
    auto out = adv.with_base(std::move(base));
    return out;
}

SecrecyVerdict check_generalized_secrecy(const AdversarialSystem& adv, AgentId i, AgentId j,
                                         const MeasureFamily& family, const GeneralizedOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    for (std::size_t k = 0; k <= opt.samples; ++k) {
        auto w = k == 0 ? canonical_weights(adv, family) : sample_weights(adv, family, rng);
        if (family.kind == MeasureFamily::Kind::init_product && !satisfies_init_product(adv, family.agent, w))
            throw Error("sampled member violates the INIT product constraint");
        auto mu = sample_family_measure(adv, w);
        auto v = opt.synchronous ? check_prob_sync_secrecy(adv.base(), mu, i, j)
                                 : check_run_based_prob_secrecy(adv.base(), mu, i, j);
        if (!v.holds) {
            v.note = (k == 0 ? std::string("canonical member") : "sampled member " + std::to_string(k)) +
                     " violates secrecy; " + v.note;
            return v;
        }
        if (family.kind == MeasureFamily::Kind::singleton)
            break;
    }
    return SecrecyVerdict::pass("bounded evidence: canonical member and " + std::to_string(opt.samples) +
                                " seeded members satisfy secrecy");
}

EvidentialResult check_evidential_equivalence(const AdversarialSystem& adv, AgentId i, const GeneralizedOptions& opt) {
    EvidentialResult res;
    if (!adv.init()) {
        res.label = "hypothesis not met: no INIT structure";
        return res;
    }
    if (!is_synchronous(adv.base()) && !has_perfect_recall(adv.base(), i)) {
        res.label = "hypothesis not met: neither synchronous nor perfect recall";
        return res;
    }
    try {
        product_index(adv, i);
    } catch (const Error& e) {
        res.label = std::string("hypothesis not met: ") + e.what();
        return res;
    }
    res.hypothesis_met = true;
    res.no_evidence = check_no_evidence(adv, i).holds;
    std::string name = "others(" + adv.base().agent_name(i) + ")";
    auto ext = with_others_choice_agent(adv, i, name);
    MeasureFamily fam{MeasureFamily::Kind::init_product, i, {}};
    res.generalized = check_generalized_secrecy(ext, i, ext.base().agent(name), fam, opt).holds;
    res.label = res.agree() ? "agree" : "disagree";
    return res;
}

} // namespace runsec

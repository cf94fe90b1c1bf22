#include "runsec/suites.hpp"

#include "runsec/adversarial.hpp"
#include "runsec/epistemic.hpp"
#include "runsec/generators.hpp"
#include "runsec/plaus.hpp"
#include "runsec/secrecy.hpp"
#include "runsec/traces.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

namespace runsec {

namespace {

struct Outcome {
    bool checked = true;
    std::optional<std::string> failure;
    std::optional<bool> verdict; // the suite's headline verdict, for coverage counts

    static Outcome skip() { return {false, std::nullopt, std::nullopt}; }
};

using Make = std::function<Json(std::mt19937_64&, std::size_t)>;
using Property = std::function<Outcome(const Loaded&, Mutation)>;

struct Suite {
    std::string name;
    Make make;
    Property check;
};

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, unsigned num = 1, unsigned den = 2) { return uniform(rng, 1, den) <= num; }

const char* yn(bool b) { return b ? "holds" : "fails"; }

// Collects mismatches between named verdicts.
class Mismatch {
public:
    void equal(const std::string& what, bool a, bool b, const std::string& sa, const std::string& sb) {
        if (a != b && !msg_)
            msg_ = what + ": " + sa + " " + yn(a) + " but " + sb + " " + yn(b);
    }
    void implies(const std::string& what, bool a, bool b, const std::string& sa, const std::string& sb) {
        if (a && !b && !msg_)
            msg_ = what + ": " + sa + " holds but " + sb + " fails";
    }
    void require(bool ok, const std::string& what) {
        if (!ok && !msg_)
            msg_ = what;
    }
    void verdict(bool v) {
        if (!verdict_)
            verdict_ = v;
    }
    Outcome outcome() const { return {true, msg_, verdict_}; }

private:
    std::optional<std::string> msg_;
    std::optional<bool> verdict_;
};

std::string pair_text(const System& sys, AgentId i, AgentId j) {
    return "(" + sys.agent_name(i) + "," + sys.agent_name(j) + ")";
}

bool both_recall(const System& sys) { return has_perfect_recall(sys, 0) && has_perfect_recall(sys, 1); }

SystemShape shape_for(std::mt19937_64& rng, bool synchronous, unsigned recall_num = 3, unsigned recall_den = 4) {
    SystemShape s;
    s.synchronous = synchronous;
    s.recall = {coin(rng, recall_num, recall_den), coin(rng, recall_num, recall_den)};
    s.product = coin(rng, 1, 3);
    return s;
}

// Agents that may forget: no recall tokens, two symbols.
SystemShape forgetful(bool synchronous) {
    SystemShape s;
    s.synchronous = synchronous;
    s.recall = {false, false};
    s.max_symbols = 2;
    s.max_runs = 4;
    return s;
}

Json with_measure(const RandomSystem& rs, const RunMeasure& mu) { return system_json(rs.sys, &mu); }

// ---- float mutation ----

bool float_run_based_prob(const System& sys, const RunMeasure& mu, AgentId i, AgentId j) {
    std::vector<double> w;
    for (const auto& q : mu.weights())
        w.push_back(q.get_d());
    auto mass = [&](const RunSet& s) {
        double t = 0;
        for (auto r = s.find_first(); r != RunSet::npos; r = s.find_next(r))
            t += w[r];
        return t;
    };
    for (LocalId b = 0; b < sys.local_count(j); ++b) {
        RunSet target = sys.info_runs(j, b);
        std::optional<double> first;
        for (LocalId a = 0; a < sys.local_count(i); ++a) {
            RunSet given = sys.info_runs(i, a);
            double v = mass(target & given) / mass(given);
            if (!first)
                first = v;
            else if (std::fabs(*first - v) > 1e-6)
                return false;
        }
    }
    return true;
}

// ---- suites ----

Suite c_secrecy_oracle() {
    Make make = [](std::mt19937_64& rng, std::size_t) {
        bool sync = coin(rng, 2, 3);
        auto rs = random_system(rng, shape_for(rng, sync, 1, 2));
        Json doc = system_json(rs.sys);
        const System& sys = rs.sys;
        std::size_t kind = uniform(rng, 0, sync ? 3 : 1);
        Json c;
        if (kind == 0) {
            c = {{"kind", "total"}};
        } else if (kind == 1) {
            // K_1(p) plus random extra points.
            Json table = Json::object();
            for (const auto& p : points(sys)) {
                Json list = Json::array();
                PointSet s = info_set(sys, 0, p).points;
                for (std::size_t q = 0; q < sys.point_count(); ++q)
                    if (!s.test(q) && coin(rng, 1, 3))
                        s.set(q);
                for (auto q = s.find_first(); q != PointSet::npos; q = s.find_next(q))
                    list.push_back(point_text(sys, sys.point(q)));
                table[point_text(sys, p)] = list;
            }
            c = {{"kind", "explicit"}, {"table", table}};
        } else if (kind == 2) {
            c = {{"kind", "synchronous"}};
        } else {
            c = {{"kind", "semisynchronous"}, {"epsilon", uniform(rng, 0, 2)}};
        }
        doc["allowability"] = {{"C", c}};
        return doc;
    };
    Property check = [](const Loaded& l, Mutation) {
        const System& sys = *l.system;
        const Allowability& c = l.allowability.at("C");
        Mismatch m;
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}}) {
            if (c.kind == Allowability::Kind::explicit_table && i != 0)
                continue;
            bool sem = check_C_secrecy(sys, i, j, c).holds;
            bool syn = oracle_C_secrecy(sys, i, j, c);
            m.verdict(sem);
            m.equal("C-secrecy " + pair_text(sys, i, j) + " under " + to_string(c), sem, syn, "semantic check",
                    "syntactic oracle");
        }
        return m.outcome();
    };
    return {"c-secrecy-oracle", make, check};
}

Suite runbased_oracle() {
    Make make = [](std::mt19937_64& rng, std::size_t) {
        return system_json(random_system(rng, shape_for(rng, coin(rng), 1, 2)).sys);
    };
    Property check = [](const Loaded& l, Mutation) {
        const System& sys = *l.system;
        Mismatch m;
        m.verdict(check_run_based_secrecy(sys, 0, 1).holds);
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}})
            m.equal("run-based secrecy " + pair_text(sys, i, j), check_run_based_secrecy(sys, i, j).holds,
                    oracle_run_based_secrecy(sys, i, j), "semantic check", "syntactic oracle");
        return m.outcome();
    };
    return {"runbased-oracle", make, check};
}

Suite sync_vs_runbased() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        return system_json(random_system(rng, k % 2 ? forgetful(true) : shape_for(rng, true)).sys);
    };
    Property check = [](const Loaded& l, Mutation mut) {
        const System& sys = *l.system;
        if (mut != Mutation::skip_recall_filter && !both_recall(sys))
            return Outcome::skip();
        Mismatch m;
        m.verdict(check_synchronous_secrecy(sys, 0, 1).holds);
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}})
            m.equal("secrecy " + pair_text(sys, i, j), check_synchronous_secrecy(sys, i, j).holds,
                    check_run_based_secrecy(sys, i, j).holds, "synchronous", "run-based");
        return m.outcome();
    };
    return {"sync-vs-runbased", make, check};
}

Suite timing() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        Json doc = system_json(random_system(rng, k % 2 ? forgetful(true) : shape_for(rng, true)).sys);
        std::size_t kind = uniform(rng, 0, 2);
        Json c = kind == 0   ? Json{{"kind", "total"}}
                 : kind == 1 ? Json{{"kind", "synchronous"}}
                             : Json{{"kind", "semisynchronous"}, {"epsilon", uniform(rng, 0, 2)}};
        doc["allowability"] = {{"C", c}};
        return doc;
    };
    Property check = [](const Loaded& l, Mutation mut) {
        const System& sys = *l.system;
        const Allowability& c = l.allowability.at("C");
        if (!depends_only_on_timing(c, sys))
            return Outcome::skip();
        if (mut != Mutation::skip_recall_filter && !both_recall(sys))
            return Outcome::skip();
        Mismatch m;
        m.verdict(check_C_secrecy(sys, 0, 1, c).holds);
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}})
            m.implies(to_string(c) + " timing " + pair_text(sys, i, j), check_C_secrecy(sys, i, j, c).holds,
                      check_run_based_secrecy(sys, i, j).holds, "C-secrecy", "run-based secrecy");
        return m.outcome();
    };
    return {"timing", make, check};
}

Suite prob_symmetry() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        const bool near = k % 4 == 3;
        SystemShape shape = k % 4 == 2 ? forgetful(coin(rng)) : shape_for(rng, coin(rng, 2, 3));
        if (near || k % 4 == 1) {
            shape.product = true;
            shape.recall = {true, true};
        }
        RandomSystem rs = random_system(rng, shape);
        RunMeasure mu = rs.complete_product && k % 4 != 0 ? product_measure(rng, rs) : random_measure(rng, rs.sys.run_count());
        if (near)
            mu = near_miss(rng, rs, mu);
        return with_measure(rs, mu);
    };
    Property check = [](const Loaded& l, Mutation mut) {
        const System& sys = *l.system;
        const RunMeasure& mu = *l.measure;
        if (mut != Mutation::skip_recall_filter && !is_synchronous(sys) && !both_recall(sys))
            return Outcome::skip();
        auto rb = [&](AgentId i, AgentId j) {
            return mut == Mutation::float_tolerance ? float_run_based_prob(sys, mu, i, j)
                                                    : check_run_based_prob_secrecy(sys, mu, i, j).holds;
        };
        bool ij = rb(0, 1), ji = rb(1, 0), ind = check_independence(sys, mu, 0, 1);
        Mismatch m;
        m.verdict(ij);
        m.equal("run-based probabilistic secrecy symmetry", ij, ji, "(1,2)", "(2,1)");
        m.equal("run-based probabilistic secrecy vs independence", ij, ind, "secrecy (1,2)", "independence");
        return m.outcome();
    };
    return {"prob-symmetry", make, check};
}

Suite sync_prob() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        SystemShape shape = k % 3 == 2 ? forgetful(true) : shape_for(rng, true);
        if (k % 3 == 1)
            shape.product = true;
        RandomSystem rs = random_system(rng, shape);
        RunMeasure mu = rs.complete_product && coin(rng) ? product_measure(rng, rs)
                                                         : random_measure(rng, rs.sys.run_count());
        return with_measure(rs, mu);
    };
    Property check = [](const Loaded& l, Mutation mut) {
        const System& sys = *l.system;
        const RunMeasure& mu = *l.measure;
        if (mut != Mutation::skip_recall_filter && !both_recall(sys))
            return Outcome::skip();
        Mismatch m;
        m.verdict(check_prob_sync_secrecy(sys, mu, 0, 1).holds);
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}})
            m.equal("probabilistic secrecy " + pair_text(sys, i, j), check_prob_sync_secrecy(sys, mu, i, j).holds,
                    check_run_based_prob_secrecy(sys, mu, i, j).holds, "synchronous", "run-based");
        return m.outcome();
    };
    return {"sync-prob", make, check};
}

Suite sync_independence() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        SystemShape shape = shape_for(rng, true, 1, 2);
        if (k % 3 == 1)
            shape.product = true;
        RandomSystem rs = random_system(rng, shape);
        RunMeasure mu = rs.complete_product && coin(rng) ? product_measure(rng, rs)
                                                         : random_measure(rng, rs.sys.run_count());
        return with_measure(rs, mu);
    };
    Property check = [](const Loaded& l, Mutation) {
        const System& sys = *l.system;
        const RunMeasure& mu = *l.measure;
        bool ij = check_prob_sync_secrecy(sys, mu, 0, 1).holds;
        bool ji = check_prob_sync_secrecy(sys, mu, 1, 0).holds;
        auto cp = common_prior_for_sync_standard(sys, mu);
        bool ci = cp_conditional_independence(sys, cp, 0, 1, true);
        Mismatch m;
        m.verdict(ij);
        m.equal("probabilistic synchronous secrecy symmetry", ij, ji, "(1,2)", "(2,1)");
        m.equal("probabilistic synchronous secrecy vs common-prior independence", ij, ci, "secrecy (1,2)",
                "conditional independence given PT(m)");
        for (const auto& p : points(sys))
            for (AgentId i = 0; i < 2; ++i) {
                // Conditioning the common prior on K_i(p) gives the HT measure.
                PointSet k = info_set(sys, i, p).points;
                auto ht = ht_point_measure(sys, mu, i, p);
                for (LocalId b = 0; b < sys.local_count(1 - i); ++b) {
                    PointSet u = sys.info_points(1 - i, b) & k;
                    auto v = ht.measure(u);
                    m.require(v && *v == cp.conditional(u, k),
                              "common prior conditioning differs from the HT measure at " + point_text(sys, p));
                }
            }
        return m.outcome();
    };
    return {"sync-independence", make, check};
}

Suite evidential() {
    Make make = [](std::mt19937_64& rng, std::size_t k) { return random_init_spec(rng, k % 2 == 0); };
    Property check = [](const Loaded& l, Mutation) {
        const auto& adv = *l.adversarial;
        GeneralizedOptions opt;
        opt.samples = 4;
        auto r = check_evidential_equivalence(adv, 0, opt);
        if (!r.hypothesis_met)
            return Outcome::skip();
        Mismatch m;
        m.verdict(r.no_evidence);
        m.equal("evidential equivalence", r.no_evidence, r.generalized, "no evidence", "generalized secrecy");
        if (l.name.find("no evidence") != std::string::npos)
            m.require(r.no_evidence, "constructed no-evidence instance reports evidence");
        return m.outcome();
    };
    return {"evidential", make, check};
}

Suite plaus_reduction() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        bool sync = coin(rng, 2, 3);
        SystemShape shape = shape_for(rng, sync, 1, 2);
        if (k % 3 == 1)
            shape.product = true;
        RandomSystem rs = random_system(rng, shape);
        const std::size_t n = rs.sys.run_count();
        auto pick = [&] {
            return rs.complete_product && coin(rng) ? product_measure(rng, rs) : random_measure(rng, n);
        };
        RunMeasure mu = pick();
        Json doc = with_measure(rs, mu);
        Json ms = Json::array();
        for (std::size_t c = 0; c < 2; ++c) {
            RunMeasure extra = pick();
            Json mj = Json::object();
            for (std::size_t r = 0; r < n; ++r)
                mj[rs.sys.run(r).id] = to_string(extra.weight(r));
            ms.push_back(mj);
        }
        doc["measures"] = ms;
        return doc;
    };
    Property check = [](const Loaded& l, Mutation) {
        const System& sys = *l.system;
        const RunMeasure& mu = *l.measure;
        const bool sync = is_synchronous(sys) && sys.mode() == TimeMode::synchronous;
        Mismatch m;
        auto triv_points = trivial_point_space(sys);
        auto triv_runs = trivial_run_space(sys);
        auto prob_runs = probability_run_space(mu);
        auto mv_runs = measure_vector_run_space(l.measures);
        m.verdict(check_run_based_prob_secrecy(sys, mu, 0, 1).holds);
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}}) {
            std::string pr = " " + pair_text(sys, i, j);
            m.equal("trivial domain, total" + pr, check_plaus_secrecy(triv_points, sys, i, j, PlausVariant::total).holds,
                    check_total_secrecy(sys, i, j).holds, "plausibilistic", "possibilistic");
            m.equal("trivial domain, run-based" + pr,
                    check_plaus_secrecy(triv_runs, sys, i, j, PlausVariant::run_based).holds,
                    check_run_based_secrecy(sys, i, j).holds, "plausibilistic", "possibilistic");
            m.equal("probability domain, run-based" + pr,
                    check_plaus_secrecy(prob_runs, sys, i, j, PlausVariant::run_based).holds,
                    check_run_based_prob_secrecy(sys, mu, i, j).holds, "plausibilistic", "probabilistic");
            bool each = true;
            for (const auto& x : l.measures)
                each = each && check_run_based_prob_secrecy(sys, x, i, j).holds;
            m.equal("measure-vector domain, run-based" + pr,
                    check_plaus_secrecy(mv_runs, sys, i, j, PlausVariant::run_based).holds, each, "plausibilistic",
                    "every measure");
            if (sync) {
                m.equal("trivial domain, synchronous" + pr,
                        check_plaus_secrecy(triv_points, sys, i, j, PlausVariant::sync).holds,
                        check_synchronous_secrecy(sys, i, j).holds, "plausibilistic", "possibilistic");
                auto cp = common_prior_for_sync_standard(sys, mu);
                m.equal("probability domain, synchronous" + pr,
                        check_plaus_secrecy(probability_point_space(cp), sys, i, j, PlausVariant::sync).holds,
                        check_prob_sync_secrecy(sys, mu, i, j).holds, "plausibilistic", "probabilistic");
                std::vector<CommonPrior> cps;
                bool each_sync = true;
                for (const auto& x : l.measures) {
                    cps.push_back(common_prior_for_sync_standard(sys, x));
                    each_sync = each_sync && check_prob_sync_secrecy(sys, x, i, j).holds;
                }
                m.equal("measure-vector domain, synchronous" + pr,
                        check_plaus_secrecy(measure_vector_point_space(cps), sys, i, j, PlausVariant::sync).holds,
                        each_sync, "plausibilistic", "every measure");
            }
        }
        return m.outcome();
    };
    return {"plaus-reduction", make, check};
}

Suite trace_sep() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        auto kind = k % 3 == 0 ? SyncTraceKind::random : k % 3 == 1 ? SyncTraceKind::product : SyncTraceKind::complete;
        return random_sync_trace_spec(rng, kind);
    };
    Property check = [](const Loaded& l, Mutation) {
        const auto& s = *l.sync_traces;
        const System& sys = *l.system;
        AgentId L = sys.agent("L"), H = sys.agent("H");
        bool sep = check_separability(s).holds;
        bool gni = check_gni_sync(s).holds;
        bool sync = check_synchronous_secrecy(sys, L, H).holds;
        bool fhi = check_f_secrecy(sys, L, high_input_function(sys), Allowability::make_synchronous()).holds;
        Mismatch m;
        m.verdict(sep);
        m.implies("separability", sep, sync, "separability", "synchronous secrecy");
        m.implies("generalized noninterference", gni, fhi, "GNI", "synchronous f_hi-secrecy");
        m.implies("separability implies GNI", sep, gni, "separability", "GNI");
        if (is_horizon_complete(s, sys.horizon()))
            m.equal("horizon-complete system", sync, sep, "synchronous secrecy", "separability");
        return m.outcome();
    };
    return {"trace-sep", make, check};
}

Suite async_zl() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        auto kind = k % 3 == 0 ? AsyncTraceKind::random : k % 3 == 1 ? AsyncTraceKind::closed : AsyncTraceKind::shuffle;
        return random_async_trace_spec(rng, kind);
    };
    Property check = [](const Loaded& l, Mutation) {
        const auto& s = *l.async_traces;
        const System& sys = *l.system;
        AgentId L = sys.agent("L"), H = sys.agent("H");
        bool sep = check_async_separability(s).holds;
        bool gni = check_async_gni(s).holds;
        bool total = check_total_secrecy(sys, L, H).holds;
        bool fhi = check_f_secrecy(sys, L, async_high_input_function(s, sys), Allowability::make_total()).holds;
        Mismatch m;
        m.verdict(sep);
        m.implies("asynchronous separability", sep, total, "separability", "total secrecy");
        m.implies("asynchronous GNI", gni, fhi, "GNI", "total f_hi-secrecy");
        if (is_closed_under_interleavings(s))
            m.equal("interleaving-closed system", sep, total, "separability", "total secrecy");
        return m.outcome();
    };
    return {"async-zl", make, check};
}

Suite nos_reduction() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        Json doc = random_sync_trace_spec(rng, k % 2 ? SyncTraceKind::random : SyncTraceKind::product);
        doc["strategies"] = "all";
        return doc;
    };
    Property check = [](const Loaded& l, Mutation) {
        const auto& s = *l.sync_traces;
        std::vector<Protocol> strategies;
        try {
            strategies = enumerate_strategies(s, 2000);
        } catch (const Error&) {
            return Outcome::skip();
        }
        auto r = nos_report(s, strategies);
        Mismatch m;
        m.verdict(r.verdict.holds);
        m.equal("nondeducibility on strategies", r.verdict.holds, r.reduction.holds, "trace definition",
                "synchronous f_strat-secrecy");
        m.require(r.covered, "some trace follows no enumerated strategy");
        if (r.verdict.holds)
            m.require(check_gni_sync(s).holds, "NOS holds but GNI fails");
        return m.outcome();
    };
    return {"nos-reduction", make, check};
}

Suite pni_chain() {
    Make make = [](std::mt19937_64& rng, std::size_t k) { return random_pps_spec(rng, k % 2 == 0); };
    Property check = [](const Loaded& l, Mutation) {
        const auto& pps = *l.gray_syverson;
        const auto& adv = *l.adversarial;
        Mismatch m;
        for (std::size_t c = 0; c < adv.cell_count(); ++c)
            m.require(adv.cell_measure(c).measure(adv.cell_runs(c)) == 1,
                      "cell " + adv.cell_id(c) + " does not have measure 1");
        GeneralizedOptions opt;
        opt.samples = 4;
        auto r = pni_report(pps, opt);
        m.verdict(r.pni.holds);
        m.require(r.agree(), std::string("chain disagrees: pni ") + yn(r.pni.holds) + ", no evidence " +
                                 yn(r.no_evidence) + ", generalized run-based " + yn(r.generalized_run_based) +
                                 ", generalized synchronous " + yn(r.generalized_sync));
        if (l.name.find("blind") != std::string::npos)
            m.require(r.pni.holds, "blind output model violates PNI");
        return m.outcome();
    };
    return {"pni-chain", make, check};
}

Suite possibilistic() {
    Make make = [](std::mt19937_64& rng, std::size_t) {
        return system_json(random_system(rng, shape_for(rng, coin(rng), 1, 2)).sys);
    };
    Property check = [](const Loaded& l, Mutation) {
        const System& sys = *l.system;
        Mismatch m;
        bool t01 = check_total_secrecy(sys, 0, 1).holds, t10 = check_total_secrecy(sys, 1, 0).holds;
        bool r01 = check_run_based_secrecy(sys, 0, 1).holds, r10 = check_run_based_secrecy(sys, 1, 0).holds;
        m.verdict(t01);
        m.equal("total secrecy symmetry", t01, t10, "(1,2)", "(2,1)");
        m.equal("run-based secrecy symmetry", r01, r10, "(1,2)", "(2,1)");
        m.implies("total implies run-based", t01, r01, "total secrecy", "run-based secrecy");
        std::vector<std::string> g, h;
        for (const auto& p : points(sys)) {
            g.push_back(sys.local(0, p));
            h.push_back(sys.local(1, p));
        }
        bool gh = check_nondeducibility(g, h).holds, hg = check_nondeducibility(h, g).holds;
        m.equal("nondeducibility symmetry", gh, hg, "g->h", "h->g");
        m.equal("nondeducibility over points", gh, t01, "nondeducibility", "total secrecy");
        for (auto [i, j] : {std::pair<AgentId, AgentId>{0, 1}, {1, 0}}) {
            InfoFunction id{j, {}};
            for (LocalId b = 0; b < sys.local_count(j); ++b)
                id.map[sys.local_token(j, b)] = sys.local_token(j, b);
            m.equal("identity f-secrecy " + pair_text(sys, i, j),
                    check_f_secrecy(sys, i, id, Allowability::make_total()).holds, check_total_secrecy(sys, i, j).holds,
                    "f-secrecy", "total secrecy");
        }
        return m.outcome();
    };
    return {"possibilistic", make, check};
}

Suite lemmas() {
    Make make = [](std::mt19937_64& rng, std::size_t k) {
        SystemShape shape = shape_for(rng, coin(rng), 1, 1);
        if (k % 2)
            shape.product = true;
        RandomSystem rs = random_system(rng, shape);
        RunMeasure mu = rs.complete_product && coin(rng) ? product_measure(rng, rs)
                                                         : random_measure(rng, rs.sys.run_count());
        return with_measure(rs, mu);
    };
    Property check = [](const Loaded& l, Mutation) {
        const System& sys = *l.system;
        const RunMeasure& mu = *l.measure;
        Mismatch m;
        for (AgentId j = 0; j < 2; ++j) {
            if (!has_perfect_recall(sys, j))
                continue;
            std::vector<LocalId> omega;
            for (LocalId b = 0; b < sys.local_count(j); ++b)
                omega.push_back(b);
            auto part = partition_info_sets(sys, j, omega);
            RunSet seen = sys.empty_runs(), all = sys.empty_runs();
            for (auto b : omega)
                all |= sys.info_runs(j, b);
            bool disjoint = true;
            for (auto b : part) {
                RunSet rs = sys.info_runs(j, b);
                if (rs.intersects(seen))
                    disjoint = false;
                seen |= rs;
            }
            m.require(disjoint, "partition blocks of agent " + sys.agent_name(j) + " overlap");
            m.require(seen == all, "partition of agent " + sys.agent_name(j) + " does not cover");
        }
        // Two partitions of the runs: by agent-1 final state and agent-2 final state.
        std::vector<RunSet> psi, omega;
        for (AgentId a = 0; a < 2; ++a) {
            auto& out = a == 0 ? psi : omega;
            std::map<std::string, RunSet> blocks;
            for (std::size_t r = 0; r < sys.run_count(); ++r) {
                const auto& tok = sys.local(a, {r, sys.horizon()});
                blocks.try_emplace(tok, sys.empty_runs()).first->second.set(r);
            }
            for (auto& [tok, s] : blocks)
                out.push_back(s);
        }
        RunSet y = sys.empty_runs();
        y.set();
        auto lem = independence_lemma(mu, y, psi, omega);
        m.verdict(lem.a);
        m.require(lem.a == lem.b && lem.b == lem.c, "independence lemma: statements (a), (b), (c) disagree");
        auto space = probability_run_space(mu);
        for (const auto& x : psi) {
            auto rep = check_plaus_symmetry_lemmas(space, omega, x);
            m.require(rep.ok(), "plausibility symmetry lemma: " + rep.label);
        }
        auto triv = trivial_run_space(sys);
        for (const auto& x : psi)
            m.require(check_plaus_symmetry_lemmas(triv, omega, x).ok(), "trivial-domain symmetry lemma fails");
        // HT consistency on run-generated subsets of information sets.
        for (const auto& p : points(sys))
            for (AgentId i = 0; i < 2; ++i) {
                PointSet k = info_set(sys, i, p).points;
                RunSet rk = runs_through(sys, k);
                auto ht = ht_point_measure(sys, mu, i, p);
                for (const auto& s : psi) {
                    PointSet u = points_on(sys, s) & k;
                    auto v = ht.measure(u);
                    m.require(v && *v == mu.conditional(s & rk, rk),
                              "HT measure differs from run conditioning at " + point_text(sys, p));
                }
            }
        return m.outcome();
    };
    return {"lemmas", make, check};
}

const std::vector<Suite>& registry() {
    static const std::vector<Suite> suites = {
        c_secrecy_oracle(), runbased_oracle(), sync_vs_runbased(), timing(),      prob_symmetry(),
        sync_prob(),        sync_independence(), evidential(),     plaus_reduction(), trace_sep(),
        async_zl(),         nos_reduction(),   pni_chain(),        possibilistic(), lemmas()};
    return suites;
}

// ---- minimization ----

std::optional<Json> renormalized(const Json& measure) {
    if (!measure.is_object())
        return std::nullopt;
    Rational total = 0;
    for (const auto& [id, v] : measure.items())
        total += parse_rational(v.get<std::string>());
    if (total == 0)
        return std::nullopt;
    Json out = Json::object();
    for (const auto& [id, v] : measure.items())
        out[id] = to_string(Rational(parse_rational(v.get<std::string>()) / total));
    return out;
}

bool starts_with_run(const std::string& point, const std::string& id) {
    return point.size() > id.size() && point.compare(0, id.size(), id) == 0 && point[id.size()] == ',';
}

std::optional<Json> without_run(const Json& doc, std::size_t k) {
    if (!doc.contains("runs") || doc["runs"].size() < 2)
        return std::nullopt;
    Json out = doc;
    std::string id = out["runs"][k].value("id", "r" + std::to_string(k + 1));
    out["runs"].erase(k);
    auto drop = [&](Json& m) -> bool {
        if (!m.is_object())
            return false;
        m.erase(id);
        auto r = renormalized(m);
        if (!r)
            return false;
        m = *r;
        return true;
    };
    if (out.contains("measure") && !drop(out["measure"]))
        return std::nullopt;
    if (out.contains("measures"))
        for (auto& m : out["measures"])
            if (!drop(m))
                return std::nullopt;
    if (out.contains("init")) {
        auto& init = out["init"];
        init["choice"].erase(id);
        Json kept = Json::object();
        for (auto& [key, m] : init["measures"].items()) {
            m.erase(id);
            if (m.empty())
                continue;
            auto r = renormalized(m);
            if (!r)
                return std::nullopt;
            kept[key] = *r;
        }
        init["measures"] = kept;
    }
    if (out.contains("allowability"))
        for (auto& [name, c] : out["allowability"].items()) {
            if (c.value("kind", "") != "explicit")
                continue;
            Json table = Json::object();
            for (auto& [at, list] : c["table"].items()) {
                if (starts_with_run(at, id))
                    continue;
                Json kept = Json::array();
                for (const auto& q : list)
                    if (!starts_with_run(q.get<std::string>(), id))
                        kept.push_back(q);
                table[at] = kept;
            }
            c["table"] = table;
        }
    return out;
}

std::optional<Json> without_trace(const Json& doc, std::size_t k) {
    for (const char* key : {"sync_traces", "async_traces"}) {
        if (!doc.contains(key) || !doc[key].contains("traces") || doc[key].contains("generator"))
            continue;
        const auto& ts = doc[key]["traces"];
        if (k >= ts.size() || ts.size() < 2)
            return std::nullopt;
        Json out = doc;
        Json kept = Json::array();
        if (std::string(key) == "sync_traces") {
            for (std::size_t t = 0; t < ts.size(); ++t)
                if (t != k)
                    kept.push_back(ts[t]);
        } else {
            // Drop the trace and its extensions to keep prefix closure.
            auto victim = ts[k].get<std::vector<std::string>>();
            for (const auto& t : ts) {
                auto v = t.get<std::vector<std::string>>();
                if (v.size() >= victim.size() && std::equal(victim.begin(), victim.end(), v.begin()))
                    continue;
                kept.push_back(t);
            }
        }
        out[key]["traces"] = kept;
        return out;
    }
    return std::nullopt;
}

std::optional<Json> without_protocol(const Json& doc, std::size_t k) {
    if (!doc.contains("gray_syverson"))
        return std::nullopt;
    Json out = doc;
    auto& gs = out["gray_syverson"];
    std::size_t nl = gs["low"].size();
    const char* side = k < nl ? "low" : "high";
    std::size_t idx = k < nl ? k : k - nl;
    if (idx >= gs[side].size() || gs[side].size() < 2)
        return std::nullopt;
    gs[side].erase(idx);
    return out;
}

bool reproduces(const Property& check, const Json& doc, Mutation mut) {
    try {
        Loaded l = load_json(doc);
        Outcome o = check(l, mut);
        return o.checked && o.failure.has_value();
    } catch (const std::exception&) {
        return false;
    }
}

Json minimize(const Property& check, Json doc, Mutation mut) {
    std::size_t budget = 300;
    for (bool changed = true; changed && budget > 0;) {
        changed = false;
        std::size_t units = 0;
        if (doc.contains("runs"))
            units = std::max(units, doc["runs"].size());
        for (const char* key : {"sync_traces", "async_traces"})
            if (doc.contains(key) && doc[key].contains("traces"))
                units = std::max(units, doc[key]["traces"].size());
        if (doc.contains("gray_syverson"))
            units = std::max(units, doc["gray_syverson"]["low"].size() + doc["gray_syverson"]["high"].size());
        for (std::size_t k = 0; k < units && !changed && budget > 0; ++k)
            for (auto reduce : {without_run, without_trace, without_protocol}) {
                auto cand = reduce(doc, k);
                if (!cand)
                    continue;
                --budget;
                if (reproduces(check, *cand, mut)) {
                    doc = std::move(*cand);
                    changed = true;
                    break;
                }
            }
    }
    return doc;
}

} // namespace

Mutation parse_mutation(const std::string& name) {
    if (name == "none")
        return Mutation::none;
    if (name == "skip-recall-filter")
        return Mutation::skip_recall_filter;
    if (name == "float-tolerance")
        return Mutation::float_tolerance;
    throw Error("unknown mutation '" + name + "' (none, skip-recall-filter, float-tolerance)");
}

std::string to_string(Mutation m) {
    switch (m) {
    case Mutation::none: return "none";
    case Mutation::skip_recall_filter: return "skip-recall-filter";
    case Mutation::float_tolerance: return "float-tolerance";
    }
    return "?";
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : registry())
            out.push_back(s.name);
        return out;
    }();
    return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t count, Mutation mutation) {
    const Suite* suite = nullptr;
    for (const auto& s : registry())
        if (s.name == name)
            suite = &s;
    if (!suite)
        throw Error("unknown suite '" + name + "'");
    auto start = std::chrono::steady_clock::now();
    SuiteResult res;
    res.name = name;
    res.seed = seed;
    res.count = count;
    const std::size_t limit = count * 20 + 20;
    for (std::size_t k = 0; res.checked < count && k < limit; ++k) {
        std::mt19937_64 rng(instance_seed(seed, k));
        Json doc = suite->make(rng, k);
        Outcome o;
        try {
            Loaded l = load_json(doc);
            o = suite->check(l, mutation);
        } catch (const std::exception& e) {
            o = {true, std::string("error: ") + e.what(), std::nullopt};
        }
        if (!o.checked) {
            ++res.skipped;
            continue;
        }
        ++res.checked;
        if (o.verdict)
            ++(*o.verdict ? res.held : res.failed);
        if (o.failure) {
            Json spec = res.failures.size() < 5 ? minimize(suite->check, doc, mutation) : doc;
            res.failures.push_back({k, *o.failure, std::move(spec)});
        }
    }
    res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::string suite_text(const SuiteResult& r) {
    std::ostringstream out;
    out << "suite " << r.name << " seed " << r.seed << ": " << r.checked << " checked";
    if (r.checked < r.count)
        out << " (of " << r.count << " requested)";
    out << ", " << r.skipped << " skipped, " << r.failures.size() << " failures";
    out << " (verdict held " << r.held << ", failed " << r.failed << ")";
    out.setf(std::ios::fixed);
    out.precision(1);
    out << " [" << r.elapsed_ms << " ms]\n";
    for (const auto& f : r.failures) {
        out << "  instance " << f.instance << ": " << f.message << "\n";
        out << "    " << f.spec.dump() << "\n";
    }
    return out.str();
}

Json suite_json(const SuiteResult& r) {
    Json fs = Json::array();
    for (const auto& f : r.failures)
        fs.push_back({{"instance", f.instance}, {"message", f.message}, {"spec", f.spec}});
    return {{"suite", r.name},         {"seed", r.seed},           {"count", r.count},
            {"checked", r.checked},    {"skipped", r.skipped},     {"held", r.held},
            {"failed", r.failed},      {"failures", fs},
            {"elapsed_ms", r.elapsed_ms}};
}

} // namespace runsec

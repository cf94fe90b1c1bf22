#pragma once

#include "runsec/kernel.hpp"
#include "runsec/prob.hpp"
#include "runsec/verdict.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace runsec {

// Initial choices: values[k] is INIT_k for agent k; choice[r][k] is run r's
// choice for agent k.
struct InitStructure {
    std::vector<std::vector<std::string>> values;
    std::vector<std::vector<std::string>> choice;
};

class AdversarialSystem {
public:
    // cells[c] lists run positions; cell_measures[c] is supported on cells[c].
    AdversarialSystem(System base, std::vector<std::string> cell_ids, std::vector<std::vector<std::size_t>> cells,
                      std::vector<RunMeasure> cell_measures);
    // Cells are the nonempty D_y, identified by the joined tuple y.
    static AdversarialSystem from_init(System base, InitStructure init, const std::map<std::string, RunMeasure>& measures);
    static std::string cell_key(const std::vector<std::string>& y);

    const System& base() const { return base_; }
    std::size_t cell_count() const { return ids_.size(); }
    const std::string& cell_id(std::size_t c) const { return ids_.at(c); }
    std::size_t cell_index(std::string_view id) const;
    std::size_t cell_of(std::size_t run) const { return cell_of_run_.at(run); }
    const RunSet& cell_runs(std::size_t c) const { return cell_runs_.at(c); }
    const RunMeasure& cell_measure(std::size_t c) const { return measures_.at(c); }
    const std::optional<InitStructure>& init() const { return init_; }

    // Same cells and measures over a base system with one more agent.
    AdversarialSystem with_base(System base) const;

private:
    System base_;
    std::vector<std::string> ids_;
    std::vector<std::size_t> cell_of_run_;
    std::vector<RunSet> cell_runs_;
    std::vector<RunMeasure> measures_;
    std::optional<InitStructure> init_;
};

enum class NoEvidenceReading {
    // INIT systems: every cell compatible with i's own initial choice at p.
    // Other systems: every cell meeting R(K_i(p)).
    compatible_cells,
    // Always the cells meeting R(K_i(p)).
    meeting_cells,
};

SecrecyVerdict check_no_evidence(const AdversarialSystem& adv, AgentId i,
                                 NoEvidenceReading reading = NoEvidenceReading::compatible_cells);

// mu = sum_D weights[D] * mu_D. Weights must be positive on at least the
// cells needed for the positivity assumption and sum to 1.
RunMeasure sample_family_measure(const AdversarialSystem& adv, const std::vector<Rational>& weights);

struct MeasureFamily {
    enum class Kind { cells, init_product, singleton };
    Kind kind = Kind::cells;
    AgentId agent = 0;                 // init_product: the agent i
    std::vector<Rational> member;      // singleton: cell weights
};

// Cell weights of the canonical member: uniform, or uniform product.
std::vector<Rational> canonical_weights(const AdversarialSystem& adv, const MeasureFamily& family);
std::vector<Rational> sample_weights(const AdversarialSystem& adv, const MeasureFamily& family, std::mt19937_64& rng);
// mu(D_y) = mu(D_{y_i}) * mu(D_{y_-i}) for every cell.
bool satisfies_init_product(const AdversarialSystem& adv, AgentId i, const std::vector<Rational>& weights);

// Agent f_{i^-} whose local state is the others' initial choice on the run.
// With timestamp, tokens carry "@m" so synchrony is preserved.
AdversarialSystem with_others_choice_agent(const AdversarialSystem& adv, AgentId i, const std::string& name,
                                           bool timestamp = false);

struct GeneralizedOptions {
    std::size_t samples = 8;
    std::uint64_t seed = 1;
    bool synchronous = false; // probabilistic synchronous secrecy instead of run-based
};

// Bounded evidence: the canonical member plus `samples` seeded members.
SecrecyVerdict check_generalized_secrecy(const AdversarialSystem& adv, AgentId i, AgentId j,
                                         const MeasureFamily& family, const GeneralizedOptions& opt = {});

struct EvidentialResult {
    bool hypothesis_met = false;
    std::string label;
    bool no_evidence = false;
    bool generalized = false;
    bool agree() const { return no_evidence == generalized; }
};

EvidentialResult check_evidential_equivalence(const AdversarialSystem& adv, AgentId i,
                                              const GeneralizedOptions& opt = {});

} // namespace runsec

#pragma once

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace runsec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using IndexSet = boost::dynamic_bitset<>;
using PointSet = IndexSet; // bit System::index(p)
using RunSet = IndexSet;   // bit = run position
using AgentId = std::size_t;
using LocalId = std::size_t;

struct Point {
    std::size_t run = 0;
    std::size_t time = 0;
    auto operator<=>(const Point&) const = default;
};

struct GlobalState {
    std::string env;
    std::vector<std::string> locals; // ordered as System::agents()
    bool operator==(const GlobalState&) const = default;
};

struct Run {
    std::string id;
    std::vector<GlobalState> states;
};

enum class TimeMode { synchronous, asynchronous_stutter };

class System {
public:
    // Asynchronous runs shorter than horizon+1 are padded by repeating their
    // final state. Synchronous systems must have full-length runs and pass
    // is_synchronous.
    System(std::vector<std::string> agents, std::vector<Run> runs, std::size_t horizon, TimeMode mode);

    const std::vector<std::string>& agents() const { return agents_; }
    std::size_t agent_count() const { return agents_.size(); }
    AgentId agent(std::string_view name) const;
    bool has_agent(std::string_view name) const;
    const std::string& agent_name(AgentId a) const { return agents_.at(a); }

    std::size_t run_count() const { return runs_.size(); }
    const Run& run(std::size_t r) const { return runs_.at(r); }
    const std::vector<Run>& runs() const { return runs_; }
    std::size_t run_index(std::string_view id) const;

    std::size_t horizon() const { return horizon_; }
    TimeMode mode() const { return mode_; }

    std::size_t point_count() const { return runs_.size() * (horizon_ + 1); }
    std::size_t index(Point p) const { return p.run * (horizon_ + 1) + p.time; }
    Point point(std::size_t idx) const { return {idx / (horizon_ + 1), idx % (horizon_ + 1)}; }
    void check_point(Point p) const;

    const GlobalState& state(Point p) const { return runs_[p.run].states[p.time]; }
    const std::string& local(AgentId a, Point p) const { return state(p).locals[a]; }

    // Interned local states: ids follow first occurrence in point order.
    LocalId local_id(AgentId a, Point p) const { return index_[a].local_of_point[index(p)]; }
    std::size_t local_count(AgentId a) const { return index_[a].tokens.size(); }
    const std::string& local_token(AgentId a, LocalId l) const { return index_[a].tokens.at(l); }
    LocalId find_local(AgentId a, std::string_view token) const;
    bool has_local(AgentId a, std::string_view token) const;
    // Point indices carrying local state l, ascending.
    const std::vector<std::size_t>& members(AgentId a, LocalId l) const { return index_[a].members.at(l); }

    PointSet empty_points() const { return PointSet(point_count()); }
    RunSet empty_runs() const { return RunSet(run_count()); }
    PointSet info_points(AgentId a, LocalId l) const;
    RunSet info_runs(AgentId a, LocalId l) const;

    std::string point_label(Point p) const;

private:
    struct AgentIndex {
        std::vector<LocalId> local_of_point;
        std::vector<std::string> tokens;
        std::unordered_map<std::string, LocalId> ids;
        std::vector<std::vector<std::size_t>> members;
    };

    std::vector<std::string> agents_;
    std::vector<Run> runs_;
    std::size_t horizon_;
    TimeMode mode_;
    std::unordered_map<std::string, std::size_t> run_ids_;
    std::vector<AgentIndex> index_;
};

struct InformationSet {
    AgentId agent = 0;
    LocalId local = 0;
    std::string token;
    PointSet points;
};

std::vector<Point> points(const System& sys);
InformationSet info_set(const System& sys, AgentId i, Point p);
RunSet runs_through(const System& sys, const PointSet& u);
// All points on the given runs.
PointSet points_on(const System& sys, const RunSet& runs);
bool is_synchronous(const System& sys);
bool has_perfect_recall(const System& sys, AgentId i);
std::vector<std::string> local_state_sequence(const System& sys, AgentId i, Point p);

struct Allowability {
    enum class Kind { total, synchronous, semisynchronous, explicit_table };
    Kind kind = Kind::total;
    std::size_t epsilon = 0;
    std::map<Point, std::vector<Point>> table;

    static Allowability make_total() { return {}; }
    static Allowability make_synchronous() { return {Kind::synchronous, 0, {}}; }
    static Allowability make_semisynchronous(std::size_t eps) { return {Kind::semisynchronous, eps, {}}; }
    static Allowability make_explicit(std::map<Point, std::vector<Point>> t) {
        return {Kind::explicit_table, 0, std::move(t)};
    }
};

std::string to_string(const Allowability& c);
PointSet allowability_points(const Allowability& c, const System& sys, Point p);
// Throws Error if some K_i(p) is not contained in C(p) or a table entry is missing.
void validate_allowability(const Allowability& c, const System& sys, AgentId i);
bool depends_only_on_timing(const Allowability& c, const System& sys);

struct InfoFunction {
    AgentId agent = 0;
    std::map<std::string, std::string> map;
};

// Throws Error unless f is total on the agent's local states.
void validate_info_function(const InfoFunction& f, const System& sys);

// Appends an agent whose local state at each point is label(p). The result
// keeps synchronous mode only when it is still synchronous.
System with_agent(const System& sys, const std::string& name, const std::function<std::string(Point)>& label);

// Derived agent j_f. With timestamp set, the token is "value@m", which keeps
// the system synchronous.
System derive_agent(const System& sys, const InfoFunction& f, const std::string& name, bool timestamp = false);

} // namespace runsec

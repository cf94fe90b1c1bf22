#include "runsec/epistemic.hpp"
#include "runsec/fixtures.hpp"
#include "runsec/formula.hpp"
#include "runsec/spec_io.hpp"
#include "runsec/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace runsec;

namespace {

bool as_json(const std::string& format) { return format == "json"; }

int do_check(const std::string& path, const std::vector<std::string>& only, const std::string& format) {
    Loaded l = load(path);
    Report r = run_checks(l, only);
    if (as_json(format))
        std::cout << report_json(r).dump(2) << "\n";
    else
        std::cout << report_text(r);
    return r.all_match() ? 0 : 1;
}

int do_fixture(const std::string& name, const std::vector<std::string>& params, const std::string& out) {
    Json doc = fixture(name, params);
    if (out.empty() || out == "-") {
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    std::ofstream f(out);
    if (!f)
        throw Error("cannot write " + out);
    f << doc.dump(2) << "\n";
    return 0;
}

int do_suite(const std::string& name, std::uint64_t seed, std::size_t count, const std::string& mutation,
             const std::string& format) {
    std::vector<std::string> names = name == "all" ? suite_names() : std::vector<std::string>{name};
    bool ok = true;
    Json all = Json::array();
    for (const auto& n : names) {
        SuiteResult r = run_suite(n, seed, count, parse_mutation(mutation));
        ok = ok && r.ok();
        if (as_json(format))
            all.push_back(suite_json(r));
        else
            std::cout << suite_text(r);
    }
    if (as_json(format))
        std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
    return ok ? 0 : 1;
}

int do_eval(const std::string& path, const std::string& text, const std::string& at, const std::string& format) {
    Loaded l = load(path);
    if (!l.system)
        throw Error(path + ": the spec has no run system");
    Point p = parse_point(*l.system, at);
    auto f = parse_formula(text);
    InterpretedSystem is{*l.system, l.interpretation, l.measure ? &*l.measure : nullptr};
    bool v = eval(is, p, *f);
    if (as_json(format))
        std::cout << Json{{"formula", text}, {"at", at}, {"value", v}}.dump(2) << "\n";
    else
        std::cout << text << " at (" << at << "): " << (v ? "true" : "false") << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy checks over finite multi-agent run systems"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* check = app.add_subcommand("check", "Run the expect block of a spec");
    std::string spec;
    std::vector<std::string> only;
    check->add_option("spec", spec, "Spec file")->required();
    check->add_option("--only", only, "Restrict to these check names")->delimiter(',');

    auto* fix = app.add_subcommand("fixture", "Write a named fixture spec");
    std::string fname, out;
    std::vector<std::string> params;
    fix->add_option("name", fname, "Fixture name")->required();
    fix->add_option("params", params, "Fixture parameters");
    fix->add_option("-o,--output", out, "Output path (stdout when omitted)");

    auto* suite = app.add_subcommand("suite", "Run a randomized property suite ('all' for every suite)");
    std::string sname, mutation = "none";
    std::uint64_t seed = 7;
    std::size_t count = 200;
    suite->add_option("name", sname, "Suite name")->required();
    suite->add_option("--seed", seed, "Seed");
    suite->add_option("--count", count, "Instances to check");
    suite->add_option("--mutation", mutation, "none, skip-recall-filter or float-tolerance");

    auto* ev = app.add_subcommand("eval", "Evaluate a formula at a point");
    std::string formula, at;
    ev->add_option("spec", spec, "Spec file")->required();
    ev->add_option("--formula", formula, "Formula in prefix syntax")->required();
    ev->add_option("--at", at, "Point as run,time")->required();

    auto* list = app.add_subcommand("list", "List checks, fixtures and suites");

    // Global options may appear after the subcommand too.
    for (auto* sub : {check, fix, suite, ev, list})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*check)
            return do_check(spec, only, format);
        if (*fix)
            return do_fixture(fname, params, out);
        if (*suite)
            return do_suite(sname, seed, count, mutation, format);
        if (*ev)
            return do_eval(spec, formula, at, format);
        if (*list) {
            std::cout << "checks:";
            for (const auto& n : check_names())
                std::cout << " " << n;
            std::cout << "\nfixtures:";
            for (const auto& n : fixture_names())
                std::cout << " " << n;
            std::cout << "\nsuites:";
            for (const auto& n : suite_names())
                std::cout << " " << n;
            std::cout << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

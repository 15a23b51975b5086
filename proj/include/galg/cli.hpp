#pragma once

// Command-line front end.  Exit status: 0 success, 1 a check failed or the
// computation did (singular matrix, pole), 2 usage error, 3 scenario error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "galg/algebroid.hpp"
#include "galg/bundle.hpp"
#include "galg/control.hpp"
#include "galg/error.hpp"
#include "galg/matrix.hpp"
#include "galg/reflection_example.hpp"
#include "galg/report.hpp"
#include "galg/scenario.hpp"

namespace galg::cli {

enum Status : int { ok = 0, failed = 1, usage = 2, scenario_error = 3 };

namespace detail {

struct Options {
    std::string scenario;
    std::string out;
    bool json = false;
    std::optional<std::uint64_t> seed;
    std::string outer, inner, matrix;
};

class UsageError : public Error {
public:
    using Error::Error;
};

inline void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--scenario", o.scenario, "Scenario file");
    sub->add_option("--out", o.out, "Write the main output to this file");
    sub->add_flag("--json", o.json, "Machine-readable report");
    sub->add_option("--seed", o.seed, "Seed for randomized checks");
}

inline Scenario need_scenario(const Options& o, const std::string& command) {
    if (o.scenario.empty()) throw UsageError(command + " needs --scenario FILE");
    return load_scenario(o.scenario);
}

[[noreturn]] inline void missing_block(const Scenario& sc, const std::string& block) {
    throw ScenarioError(sc.path, 0, 0, block, "scenario has no [" + block + "] block");
}

inline std::string map_to_string(const CoordMap& m) {
    std::string s = "(";
    for (std::size_t i = 0; i < m.source().dimension(); ++i) s += (i ? ", " : "") + m.source().coord(i);
    s += ") -> (";
    for (std::size_t i = 0; i < m.forward().size(); ++i) s += (i ? ", " : "") + m.forward()[i].to_string();
    return s + ")";
}

inline int report(const AxiomReport& r, const Options& o, std::ostream& out) {
    if (o.json)
        write_json(out, r);
    else
        write_text(out, r);
    return r.all_pass() ? ok : failed;
}

inline int check(const Options& o, std::ostream& out, std::ostream&) {
    const Scenario sc = need_scenario(o, "check");
    if (!sc.has_model()) missing_block(sc, sc.anchor ? "structure" : sc.bundle ? "anchor" : "bundle");
    CheckOptions opt = sc.checks;
    if (o.seed) opt.seed = *o.seed;
    return report(check_axioms(sc.model(), opt), o, out);
}

inline int compose_cmd(const Options& o, std::ostream& out, std::ostream&) {
    const Scenario sc = need_scenario(o, "compose");
    if (o.outer.empty() || o.inner.empty()) throw UsageError("compose needs --outer NAME and --inner NAME");
    auto get = [&](const std::string& n) -> const VBMorphism& {
        const auto it = sc.morphisms.find(n);
        if (it == sc.morphisms.end()) throw UsageError("no morphism named '" + n + "' in " + sc.path);
        return it->second;
    };
    const VBMorphism c = compose(get(o.outer), get(o.inner));
    out << "base map: " << map_to_string(c.base_map()) << '\n';
    out << "components: " << c.components().to_string() << '\n';
    return ok;
}

inline int pinv(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario sc = need_scenario(o, "pinv");
    if (o.matrix.empty()) throw UsageError("pinv needs --matrix NAME");
    const auto it = sc.matrices.find(o.matrix);
    if (it == sc.matrices.end()) throw UsageError("no matrix named '" + o.matrix + "' in " + sc.path);
    const FMatrix left = left_pseudo_inverse(it->second);
    if (const auto locus = rank_drop_locus(it->second))
        err << "warning: " << o.matrix << " may drop rank where " << locus->to_string() << " = 0\n";
    out << left.to_string() << '\n';
    return ok;
}

inline int simulate(const Options& o, std::ostream& out, std::ostream&) {
    const Scenario sc = need_scenario(o, "simulate");
    if (!sc.system) missing_block(sc, "system");
    if (!sc.simulation) missing_block(sc, "simulate");
    const SimulationSpec& s = *sc.simulation;
    integrate(*sc.system, sc.controls(), s.x0, s.horizon, s.step).write_csv(out);
    return ok;
}

inline int euler_lagrange(const Options& o, std::ostream& out, std::ostream& err) {
    const Scenario sc = need_scenario(o, "euler-lagrange");
    if (!sc.euler_lagrange) missing_block(sc, "euler-lagrange");
    const Trajectory tr = solve_el(*sc.euler_lagrange);
    tr.write_csv(out);
    err << "energy drift: " << energy_drift(tr) << '\n';
    return ok;
}

inline int verify(const Options& o, std::ostream& out, std::ostream&) { return report(verify_paper(), o, out); }

} // namespace detail

/// `args` excludes the program name.
inline int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Exact computations with (generalized) Lie algebroids, bundle morphisms and anchored control systems.",
                 "galg"};
    app.require_subcommand(1);
    Options o;

    struct Command {
        CLI::App* app;
        std::function<int(const Options&, std::ostream&, std::ostream&)> run;
    };
    std::vector<Command> commands;
    auto add = [&](const char* name, const char* help, auto fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, o);
        commands.push_back({sub, fn});
        return sub;
    };
    add("check", "Run the axiom checks on the scenario's algebroid model", check);
    CLI::App* comp = add("compose", "Compose two named morphisms of the scenario", compose_cmd);
    comp->add_option("--outer", o.outer, "Morphism applied second");
    comp->add_option("--inner", o.inner, "Morphism applied first");
    add("pinv", "Print the left pseudo-inverse of a named matrix", pinv)
        ->add_option("--matrix", o.matrix, "Matrix name from [matrices]");
    add("simulate", "Integrate the [system] block and write a CSV trajectory", simulate);
    add("euler-lagrange", "Solve the [euler-lagrange] block and write a CSV trajectory", euler_lagrange);
    add("verify-paper", "Check the built-in reflection example identities", verify);

    if (!args.empty() && !args.front().starts_with("-")) {
        bool known = false;
        for (const auto& c : commands) known = known || c.app->get_name() == args.front();
        if (!known) {
            err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
            return usage;
        }
    }

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        for (const auto& c : commands)
            if (c.app->parsed()) {
                out << c.app->help();
                return ok;
            }
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return usage;
    }

    for (const auto& c : commands) {
        if (!app.got_subcommand(c.app)) continue;
        try {
            if (o.out.empty()) return c.run(o, out, err);
            std::ostringstream buf;
            const int status = c.run(o, buf, err);
            std::ofstream file(o.out);
            if (!file) {
                err << "error: cannot write " << o.out << '\n';
                return failed;
            }
            file << buf.str();
            return status;
        } catch (const UsageError& e) {
            err << "error: " << e.what() << "\n\n" << c.app->help();
            return usage;
        } catch (const ScenarioError& e) {
            err << "error: " << e.what() << '\n';
            return scenario_error;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return failed;
        }
    }
    return usage;
}

inline int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace galg::cli

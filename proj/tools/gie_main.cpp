#include "gie/csv.hpp"
#include "gie/error.hpp"
#include "gie/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace gie;
using namespace gie::runner;

// Dedicated flags per experiment: flag name -> params key.
struct FlagSpec {
    const char* experiment;
    const char* flag;
    const char* key;
    bool boolean;
    const char* help;
};

const FlagSpec kFlags[] = {
    {"gie-scan", "--t-min", "t_min", false, "first time (s)"},
    {"gie-scan", "--t-max", "t_max", false, "last time (s)"},
    {"gie-scan", "--steps", "steps", false, "number of times"},
    {"gauge-equiv", "--grids", "grids", false, "comma-separated levels: coarse,medium,fine"},
    {"gauge-equiv", "--drop-scalar-photons", "drop_scalar_photons", true, "ablation: drop scalar photons"},
    {"decompose", "--input", "input", false, "raw tensor field with JSON sidecar"},
    {"decompose", "--n", "n", false, "grid points per axis for the random field"},
    {"newton-check", "--m1", "m1", false, "first mass"},
    {"newton-check", "--m2", "m2", false, "second mass"},
    {"newton-check", "--d", "d", false, "separation"},
    {"newton-check", "--n", "n", false, "grid sizes, comma separated"},
    {"newton-check", "--sigma", "sigma", false, "Gaussian width"},
    {"newton-check", "--L", "L", false, "box side"},
    {"branch-phase", "--protocol", "protocol", false, "protocol JSON file"},
    {"branch-phase", "--kernel", "kernel", false, "retarded|instantaneous|symmetric"},
    {"branch-phase", "--family", "family", false, "static|adiabatic|spacelike when no protocol file"},
    {"cosmo-spectrum", "--model", "model", false, "desitter|powerlaw"},
    {"cosmo-spectrum", "--eps", "eps", false, "slow-roll parameter"},
    {"cosmo-spectrum", "--kmin", "kmin", false, "smallest k"},
    {"cosmo-spectrum", "--kmax", "kmax", false, "largest k"},
    {"cosmo-spectrum", "--nk", "nk", false, "number of k values"},
};

// Subcommand names that differ from the experiment name.
const std::map<std::string, std::string> kAlias = {{"gie-phases", "phases"}, {"gie-scan", "scan"}};

struct SubState {
    const Experiment* exp = nullptr;
    std::string config;
    std::vector<std::string> sets;
    std::string out, json, out_dir;
    long seed = 1;
    std::map<std::string, std::string> flag_values;
    std::map<std::string, bool> bool_values;
};

void print_record(const ResultRecord& rec)
{
    std::cout << "experiment " << rec.experiment << "\n";
    for (const auto& [k, v] : rec.scalars)
        std::cout << "  " << k << " = " << format_double(v) << "\n";
    for (const auto& n : rec.notes)
        std::cout << "  note: " << n << "\n";
    for (const auto& c : rec.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
                  << " tol=" << format_double(c.tolerance) << (c.detail.empty() ? "" : "  (" + c.detail + ")")
                  << "\n";
    for (const auto& [k, p] : rec.outputs)
        std::cout << "  wrote " << k << ": " << p << "\n";
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw IoError("cannot write " + path);
}

int run_sub(SubState& s)
{
    KvConfig file;
    if (!s.config.empty())
        file = KvConfig::load(s.config);
    Context ctx;
    for (const auto& [k, v] : file.entries()) {
        if (k.rfind("tolerance.", 0) == 0)
            ctx.tolerances.set(k.substr(10), v);
        else if (k.rfind("params.", 0) == 0)
            ctx.params.set(k.substr(7), v);
        else
            ctx.params.set(k, v);
    }
    for (const auto& kv : s.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError("--set expects key=value, got '" + kv + "'");
        const std::string k = kv.substr(0, eq);
        if (k.rfind("tolerance.", 0) == 0)
            ctx.tolerances.set(k.substr(10), kv.substr(eq + 1));
        else
            ctx.params.set(k, kv.substr(eq + 1));
    }
    for (const auto& [k, v] : s.flag_values)
        ctx.params.set(k, v);
    for (const auto& [k, v] : s.bool_values)
        if (v)
            ctx.params.set(k, "true");
    if (s.exp->name == "decompose" && !s.out_dir.empty())
        ctx.params.set("out_dir", s.out_dir);
    if (s.seed < 0)
        throw ValidationError("seed must be non-negative");
    ctx.seed = static_cast<std::uint64_t>(s.seed);
    ctx.policy = Parallelism::from_env(1);

    ResultRecord rec = run_experiment(*s.exp, ctx);
    if (!s.out_dir.empty())
        write_outputs(rec, s.out_dir);
    if (!s.out.empty()) {
        if (s.exp->name == "branch-phase") {
            rec.outputs["record"] = s.out;
            write_text(s.out, rec.to_json());
        } else {
            const auto it = rec.tables.find(s.exp->primary_table);
            if (it == rec.tables.end())
                throw std::logic_error("experiment produced no primary table");
            it->second.write_csv(s.out);
            rec.outputs[it->first] = s.out;
        }
    }
    if (!s.json.empty()) {
        rec.outputs["record"] = s.json;
        write_text(s.json, rec.to_json());
    }
    print_record(rec);
    return rec.passed() ? kExitPass : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"gie: gravitationally induced entanglement toolkit"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list registered experiments");

    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
    run_cmd->add_option("--config", run_config, "config file")->required();

    std::vector<SubState> states(registry().size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < registry().size(); ++i) {
        const Experiment& e = registry()[i];
        SubState& s = states[i];
        s.exp = &e;
        const auto alias = kAlias.find(e.name);
        const std::string name = alias == kAlias.end() ? e.name : alias->second;
        auto* sub = app.add_subcommand(name, e.description);
        if (alias != kAlias.end())
            sub->alias(e.name);
        sub->add_option("--config", s.config, "flat key = value parameter file");
        sub->add_option("--set", s.sets, "override a parameter, key=value (repeatable)");
        sub->add_option("--seed", s.seed, "random seed");
        sub->add_option("--out", s.out, e.name == "branch-phase" ? "JSON record path" : "CSV path for the main table");
        sub->add_option("--json", s.json, "JSON record path");
        sub->add_option("--out-dir", s.out_dir,
                        e.name == "decompose" ? "write component fields, tables and the record here"
                                              : "write every table and the record here");
        for (const auto& f : kFlags) {
            if (e.name != f.experiment)
                continue;
            if (f.boolean)
                sub->add_flag(f.flag, s.bool_values[f.key], f.help);
            else
                sub->add_option(f.flag, s.flag_values[f.key], f.help);
        }
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (list->parsed()) {
            std::cout << format_experiment_list();
            return kExitPass;
        }
        if (run_cmd->parsed()) {
            const RunOutcome o = run(run_config);
            print_record(o.record);
            return o.exit_code;
        }
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) {
                // drop option slots that were never given
                for (auto it = states[i].flag_values.begin(); it != states[i].flag_values.end();)
                    it = it->second.empty() ? states[i].flag_values.erase(it) : std::next(it);
                return run_sub(states[i]);
            }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitInternal;
}

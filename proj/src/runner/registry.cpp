#include "gie/runner.hpp"

#include "gie/error.hpp"

#include <fstream>
#include <sstream>

namespace gie::runner {

double Context::tolerance(const std::string& name, double fallback) const
{
    const double v = tolerances.get_double(name, fallback);
    if (!(v >= 0.0))
        throw ValidationError("tolerance '" + name + "' must be non-negative");
    return v;
}

const Experiment& find_experiment(const std::string& name)
{
    for (const auto& e : registry())
        if (e.name == name)
            return e;
    throw ValidationError("unknown experiment '" + name + "' (see `gie list`)");
}

std::vector<ExperimentInfo> list_experiments()
{
    std::vector<ExperimentInfo> out;
    for (const auto& e : registry())
        out.push_back({e.name, e.module, e.description});
    return out;
}

std::string format_experiment_list()
{
    std::size_t wn = 4, wm = 6;
    for (const auto& e : registry()) {
        wn = std::max(wn, e.name.size());
        wm = std::max(wm, e.module.size());
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size() + 2, ' '); };
    std::string out = pad("name", wn) + pad("module", wm) + "description\n";
    for (const auto& e : registry())
        out += pad(e.name, wn) + pad(e.module, wm) + e.description + "\n";
    return out;
}

ExperimentConfig ExperimentConfig::from_kv(const KvConfig& kv)
{
    ExperimentConfig c;
    for (const auto& [key, value] : kv.entries()) {
        if (key == "experiment")
            c.experiment = value;
        else if (key == "seed") {
            const long s = kv.get_int("seed");
            if (s < 0)
                throw ValidationError("seed must be non-negative");
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "threads") {
            const long t = kv.get_int("threads");
            if (t < 1 || t > 1024)
                throw ValidationError("threads must lie in [1, 1024]");
            c.threads = static_cast<unsigned>(t);
        } else if (key == "output.dir")
            c.out_dir = value;
        else if (key.rfind("params.", 0) == 0)
            c.params.set(key.substr(7), value);
        else if (key.rfind("tolerance.", 0) == 0)
            c.tolerances.set(key.substr(10), value);
        else
            throw ValidationError("unknown config key '" + key + "'");
    }
    if (c.experiment.empty())
        throw ValidationError("config is missing 'experiment'");
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    return from_kv(KvConfig::load(path));
}

ResultRecord run_experiment(const Experiment& e, const Context& ctx_in)
{
    ctx_in.params.require_known(e.param_keys);
    ctx_in.tolerances.require_known(e.tolerance_keys);
    Context ctx = ctx_in;
    ResultRecord rec = e.run(ctx);
    rec.experiment = e.name;
    rec.version = kVersion;
    rec.timestamp = current_timestamp();
    for (const auto& [k, v] : ctx.params.echo())
        rec.inputs["params." + k] = v;
    for (const auto& [k, v] : ctx.tolerances.echo())
        rec.inputs["tolerance." + k] = v;
    rec.inputs["seed"] = std::to_string(ctx.seed);
    return rec;
}

void write_outputs(ResultRecord& rec, const std::filesystem::path& dir)
{
    std::error_code ec;
    if (!dir.empty())
        std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    for (const auto& [name, t] : rec.tables) {
        // names relative to dir, so records do not depend on where they were written
        const std::string file = rec.experiment + "." + name + ".csv";
        t.write_csv(dir / file);
        rec.outputs[name] = file;
    }
    const auto jpath = dir / (rec.experiment + ".json");
    rec.outputs["record"] = rec.experiment + ".json";
    std::ofstream out(jpath, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + jpath.string());
    out << rec.to_json();
    if (!out)
        throw IoError("write failed for " + jpath.string());
}

RunOutcome run(const std::filesystem::path& config_path, const Parallelism* override_policy)
{
    const ExperimentConfig cfg = ExperimentConfig::load(config_path);
    const Experiment& e = find_experiment(cfg.experiment);
    Context ctx;
    ctx.params = cfg.params;
    ctx.tolerances = cfg.tolerances;
    ctx.seed = cfg.seed;
    ctx.policy = override_policy ? *override_policy : Parallelism::from_env(cfg.threads ? cfg.threads : 1);
    RunOutcome o;
    o.record = run_experiment(e, ctx);
    write_outputs(o.record, cfg.out_dir.empty() ? std::filesystem::path(".") : cfg.out_dir);
    o.exit_code = o.record.passed() ? kExitPass : kExitCheckFailed;
    return o;
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const RegimeError*>(&e) ||
        dynamic_cast<const IoError*>(&e))
        return kExitUsage;
    return kExitInternal;
}

} // namespace gie::runner

#pragma once

#include "gie/csv.hpp"
#include "gie/kvconfig.hpp"
#include "gie/parallel.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gie::runner {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitInternal = 3 };

struct Check {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;

    bool operator==(const Check&) const = default;
};

struct ResultRecord {
    std::string experiment;
    std::string version = kVersion;
    std::string timestamp;
    /// Effective inputs, defaults included.
    std::map<std::string, std::string> inputs;
    std::map<std::string, double> scalars;
    std::map<std::string, Table> tables;
    /// Files written for this record, by table name ("record" for the JSON).
    std::map<std::string, std::string> outputs;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool passed() const;
    void add_check(const std::string& name, bool ok, double measured, double tolerance, const std::string& detail = "");

    std::string to_json() const;
    static ResultRecord from_json(const std::string& text);
    bool operator==(const ResultRecord& o) const;
};

/// UTC time in ISO 8601, or the value of GIE_TIMESTAMP when set.
std::string current_timestamp();

/// Parameters handed to an experiment. `params` holds the keys without the
/// "params." prefix; `tolerance(name, fallback)` reads a tolerance override.
struct Context {
    KvConfig params;
    KvConfig tolerances;
    std::uint64_t seed = 1;
    Parallelism policy;

    double tolerance(const std::string& name, double fallback) const;
};

struct Experiment {
    std::string name;
    std::string module;
    std::string description;
    std::vector<std::string> param_keys;
    std::vector<std::string> tolerance_keys;
    /// Name of the table written by single-output CLI flags such as --out.
    std::string primary_table;
    std::function<ResultRecord(Context&)> run;
};

const std::vector<Experiment>& registry();
/// Throws ValidationError for unknown names.
const Experiment& find_experiment(const std::string& name);

struct ExperimentInfo {
    std::string name, module, description;
};
std::vector<ExperimentInfo> list_experiments();
std::string format_experiment_list();

/// Parsed run configuration:
///
///     experiment = gie-scan
///     seed = 1
///     threads = 2
///     [output]
///     dir = out
///     [tolerance]
///     negativity = 1e-10
///     [params]
///     m1 = 1e-14
///
/// Unknown keys are rejected.
struct ExperimentConfig {
    std::string experiment;
    KvConfig params;
    KvConfig tolerances;
    std::filesystem::path out_dir;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0: GIE_THREADS or 1

    static ExperimentConfig from_kv(const KvConfig& kv);
    static ExperimentConfig load(const std::filesystem::path& path);
};

/// Runs the experiment and stamps version, timestamp and input echo.
ResultRecord run_experiment(const Experiment& e, const Context& ctx);

/// Writes one CSV per table as <dir>/<experiment>.<table>.csv and the record
/// as <dir>/<experiment>.json, filling record.outputs.
void write_outputs(ResultRecord& rec, const std::filesystem::path& dir);

struct RunOutcome {
    ResultRecord record;
    int exit_code = kExitPass;
};

/// Loads, dispatches and writes outputs. Errors propagate as exceptions;
/// use exit_code_for for the mapping.
RunOutcome run(const std::filesystem::path& config_path, const Parallelism* override_policy = nullptr);

/// 2 for validation, regime and I/O errors, 3 for anything else.
int exit_code_for(const std::exception& e);

} // namespace gie::runner

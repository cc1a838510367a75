#include "gie/runner.hpp"

#include "gie/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <ctime>

namespace gie::runner {

using nlohmann::json;

namespace {

// JSON has no NaN or infinity; those travel as strings.
json encode(double v)
{
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

double decode(const json& j)
{
    if (j.is_number())
        return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "nan")
        return std::nan("");
    if (s == "inf")
        return INFINITY;
    if (s == "-inf")
        return -INFINITY;
    throw ValidationError("record: expected a number, got '" + s + "'");
}

} // namespace

bool ResultRecord::passed() const
{
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return true;
}

void ResultRecord::add_check(const std::string& name, bool ok, double measured, double tolerance,
                             const std::string& detail)
{
    checks.push_back({name, ok, measured, tolerance, detail});
}

std::string ResultRecord::to_json() const
{
    json j;
    j["experiment"] = experiment;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["inputs"] = inputs;
    json sc = json::object();
    for (const auto& [k, v] : scalars)
        sc[k] = encode(v);
    j["scalars"] = sc;
    json tb = json::object();
    for (const auto& [name, t] : tables) {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json row = json::array();
            for (double v : r)
                row.push_back(encode(v));
            rows.push_back(row);
        }
        tb[name] = {{"header", t.header}, {"rows", rows}};
    }
    j["tables"] = tb;
    j["outputs"] = outputs;
    json ch = json::array();
    for (const auto& c : checks)
        ch.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", encode(c.measured)},
                      {"tolerance", encode(c.tolerance)},
                      {"detail", c.detail}});
    j["checks"] = ch;
    j["notes"] = notes;
    j["passed"] = passed();
    return j.dump(2) + "\n";
}

ResultRecord ResultRecord::from_json(const std::string& text)
{
    ResultRecord r;
    try {
        const json j = json::parse(text);
        r.experiment = j.at("experiment").get<std::string>();
        r.version = j.at("version").get<std::string>();
        r.timestamp = j.at("timestamp").get<std::string>();
        r.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
        for (const auto& [k, v] : j.at("scalars").items())
            r.scalars[k] = decode(v);
        for (const auto& [name, t] : j.at("tables").items()) {
            Table tab;
            tab.header = t.at("header").get<std::vector<std::string>>();
            for (const auto& row : t.at("rows")) {
                std::vector<double> vals;
                for (const auto& v : row)
                    vals.push_back(decode(v));
                tab.rows.push_back(std::move(vals));
            }
            r.tables[name] = std::move(tab);
        }
        r.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
        for (const auto& c : j.at("checks"))
            r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), decode(c.at("measured")),
                                decode(c.at("tolerance")), c.at("detail").get<std::string>()});
        r.notes = j.at("notes").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed result record: ") + e.what());
    }
    return r;
}

bool ResultRecord::operator==(const ResultRecord& o) const
{
    // serialized form compares NaNs sensibly
    return to_json() == o.to_json();
}

std::string current_timestamp()
{
    if (const char* fixed = std::getenv("GIE_TIMESTAMP"))
        return fixed;
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace gie::runner

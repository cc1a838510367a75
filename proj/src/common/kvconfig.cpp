#include "gie/kvconfig.hpp"

#include "gie/csv.hpp"
#include "gie/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace gie {
namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty())
            return v;
    } catch (const std::exception&) {
    }
    throw ValidationError("config key '" + key + "': expected a number, got '" + text + "'");
}

} // namespace

KvConfig KvConfig::parse(std::string_view text, const std::string& source)
{
    KvConfig cfg;
    cfg.source_ = source;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ValidationError(source + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty())
            throw ValidationError(source + ":" + std::to_string(lineno) + ": empty key");
        if (!section.empty())
            key = section + "." + key;
        if (cfg.entries_.count(key))
            throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.entries_[key] = value;
    }
    return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::optional<std::string> KvConfig::lookup(const std::string& key) const
{
    auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

double KvConfig::get_double(const std::string& key, std::optional<double> fallback) const
{
    if (auto v = lookup(key)) {
        const double d = parse_double(key, *v);
        echo_[key] = format_double(d);
        return d;
    }
    if (!fallback)
        throw ValidationError("missing required config key '" + key + "'");
    echo_[key] = format_double(*fallback);
    return *fallback;
}

long KvConfig::get_int(const std::string& key, std::optional<long> fallback) const
{
    if (auto v = lookup(key)) {
        long out = 0;
        const auto* first = v->data();
        const auto* last = v->data() + v->size();
        auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc() || ptr != last)
            throw ValidationError("config key '" + key + "': expected an integer, got '" + *v + "'");
        echo_[key] = std::to_string(out);
        return out;
    }
    if (!fallback)
        throw ValidationError("missing required config key '" + key + "'");
    echo_[key] = std::to_string(*fallback);
    return *fallback;
}

bool KvConfig::get_bool(const std::string& key, std::optional<bool> fallback) const
{
    if (auto v = lookup(key)) {
        std::string s = *v;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        bool out;
        if (s == "true" || s == "1" || s == "yes" || s == "on")
            out = true;
        else if (s == "false" || s == "0" || s == "no" || s == "off")
            out = false;
        else
            throw ValidationError("config key '" + key + "': expected a boolean, got '" + *v + "'");
        echo_[key] = out ? "true" : "false";
        return out;
    }
    if (!fallback)
        throw ValidationError("missing required config key '" + key + "'");
    echo_[key] = *fallback ? "true" : "false";
    return *fallback;
}

std::string KvConfig::get_string(const std::string& key, std::optional<std::string> fallback) const
{
    if (auto v = lookup(key)) {
        echo_[key] = *v;
        return *v;
    }
    if (!fallback)
        throw ValidationError("missing required config key '" + key + "'");
    echo_[key] = *fallback;
    return *fallback;
}

std::vector<double> KvConfig::get_doubles(const std::string& key,
                                          std::optional<std::vector<double>> fallback) const
{
    std::vector<double> out;
    if (auto v = lookup(key)) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(parse_double(key, trim(item)));
    } else if (fallback) {
        out = *fallback;
    } else {
        throw ValidationError("missing required config key '" + key + "'");
    }
    std::string joined;
    for (std::size_t i = 0; i < out.size(); ++i)
        joined += (i ? "," : "") + format_double(out[i]);
    echo_[key] = joined;
    return out;
}

void KvConfig::require_known(const std::vector<std::string>& allowed) const
{
    for (const auto& [key, value] : entries_) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError("unknown config key '" + key + "' in " + source_);
    }
}

} // namespace gie

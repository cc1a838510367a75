#include "gie/interferometer.hpp"

namespace gie::interferometer {

std::vector<std::string> config_keys(const std::string& prefix)
{
    std::vector<std::string> keys;
    for (const char* k : {"m1", "m2", "d", "delta_x", "t", "G", "hbar", "mean_field"})
        keys.push_back(prefix + k);
    return keys;
}

InterferometerConfig config_from_kv(const KvConfig& kv, const std::string& prefix, bool t_optional)
{
    InterferometerConfig c;
    c.m1 = kv.get_double(prefix + "m1");
    c.m2 = kv.get_double(prefix + "m2");
    c.d = kv.get_double(prefix + "d");
    c.delta_x = kv.get_double(prefix + "delta_x");
    c.t = t_optional ? kv.get_double(prefix + "t", 1.0) : kv.get_double(prefix + "t");
    c.G = kv.get_double(prefix + "G", kDefaultG);
    c.hbar = kv.get_double(prefix + "hbar", kDefaultHbar);
    c.mean_field = kv.get_bool(prefix + "mean_field", false);
    c.validate();
    return c;
}

} // namespace gie::interferometer

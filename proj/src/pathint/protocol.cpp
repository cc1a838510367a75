#include "gie/pathint.hpp"

#include "gie/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace gie::pathint {

void BranchProtocol::validate() const
{
    if (!(t1 > t0))
        throw ValidationError("protocol window needs t0 < t1");
    if (!(hbar > 0.0) || !(c > 0.0) || !std::isfinite(coupling))
        throw ValidationError("protocol needs hbar > 0, c > 0 and a finite coupling");
    for (std::size_t b = 0; b < 4; ++b) {
        const auto& p = branches[b];
        if (p.first.nodes().empty() || p.second.nodes().empty())
            throw ValidationError(std::string("branch ") + kBranchLabels[b] + " is missing a worldline");
        if (p.first.c() != c || p.second.c() != c)
            throw ValidationError(std::string("branch ") + kBranchLabels[b] + " uses a different speed of light");
    }
    if (!closed)
        return;
    const double scale = std::max(1.0, branches[0].first.position(t0).norm() + branches[0].second.position(t0).norm());
    for (std::size_t b = 1; b < 4; ++b)
        for (double t : {t0, t1}) {
            const double d1 = (branches[b].first.position(t) - branches[0].first.position(t)).norm();
            const double d2 = (branches[b].second.position(t) - branches[0].second.position(t)).norm();
            if (d1 > 1e-12 * scale || d2 > 1e-12 * scale)
                throw ValidationError(std::string("protocol is not closed: branch ") + kBranchLabels[b] +
                                      " endpoints differ from LL");
        }
}

BranchProtocol BranchProtocol::shifted(double dt) const
{
    BranchProtocol out = *this;
    for (auto& p : out.branches) {
        p.first = p.first.shifted(dt);
        p.second = p.second.shifted(dt);
    }
    out.t0 += dt;
    out.t1 += dt;
    return out;
}

std::array<double, 4> branch_phases(const BranchProtocol& p, Kernel k, const Parallelism& policy,
                                    const QuadratureOptions& q)
{
    p.validate();
    std::array<double, 4> out{};
    parallel_for(4, policy, [&](std::size_t b) {
        out[b] = branch_phase(p.branches[b], k, p.coupling, p.hbar, p.t0, p.t1, q);
    });
    return out;
}

double entangling_phase(const std::array<double, 4>& ph)
{
    return (ph[0] + ph[3]) - (ph[1] + ph[2]);
}

double entangling_phase(const BranchProtocol& p, Kernel k, const Parallelism& policy, const QuadratureOptions& q)
{
    return entangling_phase(branch_phases(p, k, policy, q));
}

namespace {

// branch offsets along x: L = -dx/2, R = +dx/2; order LL, LR, RL, RR
constexpr double kSide[4][2] = {{-0.5, -0.5}, {-0.5, 0.5}, {0.5, -0.5}, {0.5, 0.5}};

void check_geometry(double d, double dx, double hbar, double c)
{
    if (!(d > 0.0) || !(dx > 0.0) || !(d > dx))
        throw ValidationError("protocol geometry needs d > dx > 0");
    if (!(hbar > 0.0) || !(c > 0.0))
        throw ValidationError("protocol needs hbar > 0 and c > 0");
}

} // namespace

BranchProtocol static_gie_protocol(double d, double dx, double T, double coupling, double hbar, double c)
{
    check_geometry(d, dx, hbar, c);
    if (!(T > 0.0))
        throw ValidationError("protocol duration must be positive");
    BranchProtocol p;
    p.t0 = 0.0;
    p.t1 = T;
    p.coupling = coupling;
    p.hbar = hbar;
    p.c = c;
    p.closed = false;
    for (std::size_t b = 0; b < 4; ++b) {
        const Eigen::Vector3d x1(kSide[b][0] * dx, 0.0, 0.0);
        const Eigen::Vector3d x2(d + kSide[b][1] * dx, 0.0, 0.0);
        p.branches[b].first = Worldline({{0.0, x1}, {T, x1}}, c, std::string(kBranchLabels[b]) + ".1");
        p.branches[b].second = Worldline({{0.0, x2}, {T, x2}}, c, std::string(kBranchLabels[b]) + ".2");
    }
    return p;
}

BranchProtocol split_hold_merge(const SplitHoldMerge& s)
{
    check_geometry(s.d, s.dx, s.hbar, s.c);
    if (!(s.v > 0.0) || !(s.v < s.c))
        throw ValidationError("split speed must satisfy 0 < v < c");
    if (!(s.hold >= 0.0) || !(s.pad >= 0.0))
        throw ValidationError("hold and pad durations must be non-negative");
    if (s.axis != 0 && s.axis != 1)
        throw ValidationError("split axis must be 0 (along the separation) or 1 (transverse)");
    const double tau = s.split_time();
    const double ta = s.pad, tb = ta + tau, tc = tb + s.hold, td = tc + tau, te = td + s.pad;
    BranchProtocol p;
    p.t0 = 0.0;
    p.t1 = te;
    p.coupling = s.coupling;
    p.hbar = s.hbar;
    p.c = s.c;
    p.closed = true;
    auto line = [&](const Eigen::Vector3d& centre, double side, const std::string& label) {
        Eigen::Vector3d off = Eigen::Vector3d::Zero();
        off[s.axis] = side * s.dx;
        std::vector<Node> n;
        if (ta > 0.0)
            n.push_back({0.0, centre});
        n.push_back({ta, centre});
        n.push_back({tb, centre + off});
        if (s.hold > 0.0)
            n.push_back({tc, centre + off});
        n.push_back({td, centre});
        if (s.pad > 0.0)
            n.push_back({te, centre});
        return Worldline(std::move(n), s.c, label);
    };
    for (std::size_t b = 0; b < 4; ++b) {
        p.branches[b].first = line(Eigen::Vector3d::Zero(), kSide[b][0], std::string(kBranchLabels[b]) + ".1");
        p.branches[b].second = line(Eigen::Vector3d(s.d, 0.0, 0.0), kSide[b][1], std::string(kBranchLabels[b]) + ".2");
    }
    return p;
}

SplitHoldMerge adiabatic_family(double d, double dx, double v, double hold_factor, double coupling, double hbar,
                                double c, int axis)
{
    SplitHoldMerge s{d, dx, v, 0.0, 0.0, coupling, hbar, c, axis};
    const double tau = s.split_time();
    s.hold = hold_factor * tau;
    // rest long enough for every light-cone signal; static pads cancel in phi_ent
    s.pad = std::max(tau, 2.0 * (d + dx) / c);
    return s;
}

SplitHoldMerge spacelike_family(double d, double dx, double fraction, double coupling, double hbar, double c,
                                int axis)
{
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw ValidationError("spacelike fraction must lie in (0, 1)");
    check_geometry(d, dx, hbar, c);
    // split, hold and merge each take a third of the motion window
    const double window = fraction * (d - dx) / c;
    const double tau = window / 3.0;
    SplitHoldMerge s{d, dx, 0.5 * dx / tau, tau, 2.0 * (d + dx) / c, coupling, hbar, c, axis};
    if (!(s.v < c))
        throw ValidationError("spacelike protocol would need a superluminal split; reduce dx or raise fraction");
    return s;
}

bool is_spacelike(const SplitHoldMerge& s)
{
    return s.motion_time() < (s.d - s.dx) / s.c && s.pad >= (s.d + s.dx) / s.c;
}

std::string to_json(const BranchProtocol& p)
{
    using nlohmann::json;
    auto nodes = [](const Worldline& w) {
        json a = json::array();
        for (const auto& n : w.nodes())
            a.push_back({n.t, n.x.x(), n.x.y(), n.x.z()});
        return a;
    };
    json br = json::object();
    for (std::size_t b = 0; b < 4; ++b)
        br[kBranchLabels[b]] = {{"first", nodes(p.branches[b].first)}, {"second", nodes(p.branches[b].second)}};
    json j = {{"t0", p.t0}, {"t1", p.t1}, {"coupling", p.coupling}, {"hbar", p.hbar},
              {"c", p.c},   {"closed", p.closed}, {"branches", br}};
    return j.dump(2);
}

BranchProtocol protocol_from_json(const std::string& text)
{
    using nlohmann::json;
    BranchProtocol p;
    try {
        const json j = json::parse(text);
        p.t0 = j.at("t0").get<double>();
        p.t1 = j.at("t1").get<double>();
        p.coupling = j.at("coupling").get<double>();
        p.hbar = j.value("hbar", 1.0);
        p.c = j.value("c", 1.0);
        p.closed = j.value("closed", true);
        const json& br = j.at("branches");
        for (std::size_t b = 0; b < 4; ++b) {
            const json& entry = br.at(kBranchLabels[b]);
            auto read = [&](const char* key, const std::string& label) {
                std::vector<Node> nodes;
                for (const auto& row : entry.at(key)) {
                    const auto v = row.get<std::vector<double>>();
                    if (v.size() != 4)
                        throw ValidationError("protocol nodes must be [t, x, y, z]");
                    nodes.push_back({v[0], Eigen::Vector3d(v[1], v[2], v[3])});
                }
                return Worldline(std::move(nodes), p.c, label);
            };
            p.branches[b].first = read("first", std::string(kBranchLabels[b]) + ".1");
            p.branches[b].second = read("second", std::string(kBranchLabels[b]) + ".2");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad protocol JSON: ") + e.what());
    }
    p.validate();
    return p;
}

KernelScaling kernel_scaling(double d, double dx, const std::vector<double>& v_over_c, double hold_factor,
                             int axis, const Parallelism& policy)
{
    if (v_over_c.size() < 2)
        throw ValidationError("kernel scaling needs at least two speeds");
    KernelScaling ks;
    for (double beta : v_over_c) {
        if (!(beta > 0.0) || !(beta < 1.0))
            throw ValidationError("v/c must lie in (0, 1)");
        const BranchProtocol p = split_hold_merge(adiabatic_family(d, dx, beta, hold_factor, -1.0, 1.0, 1.0, axis));
        const double inst = entangling_phase(p, Kernel::instantaneous, policy);
        const double ret = entangling_phase(p, Kernel::retarded, policy);
        ks.rows.push_back({beta, inst, ret, std::abs(ret - inst) / std::abs(inst)});
    }
    // least-squares slope of log(rel_dev) against log(v/c)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(ks.rows.size());
    for (const auto& r : ks.rows) {
        const double x = std::log(r.v_over_c), y = std::log(r.rel_dev);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    ks.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return ks;
}

Table KernelScaling::table() const
{
    Table t;
    t.header = {"v_over_c", "phi_ent_instantaneous", "phi_ent_retarded", "rel_deviation"};
    for (const auto& r : rows)
        t.rows.push_back({r.v_over_c, r.phi_inst, r.phi_ret, r.rel_dev});
    return t;
}

} // namespace gie::pathint

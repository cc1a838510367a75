#include "gie/pathint.hpp"

#include "gie/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gie::pathint {

Kernel parse_kernel(const std::string& s)
{
    if (s == "instantaneous")
        return Kernel::instantaneous;
    if (s == "retarded")
        return Kernel::retarded;
    if (s == "symmetric")
        return Kernel::symmetric;
    throw ValidationError("kernel must be instantaneous, retarded or symmetric, got '" + s + "'");
}

std::string to_string(Kernel k)
{
    switch (k) {
    case Kernel::instantaneous:
        return "instantaneous";
    case Kernel::retarded:
        return "retarded";
    case Kernel::symmetric:
        return "symmetric";
    }
    return "?";
}

Worldline::Worldline(std::vector<Node> nodes, double c, std::string label)
    : nodes_(std::move(nodes))
    , c_(c)
    , label_(std::move(label))
{
    if (!(c_ > 0.0) || !std::isfinite(c_))
        throw ValidationError("speed of light must be positive");
    if (nodes_.size() < 2)
        throw ValidationError("worldline " + label_ + " needs at least two nodes");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i].t) || !nodes_[i].x.allFinite())
            throw ValidationError("worldline " + label_ + " has non-finite node " + std::to_string(i));
        if (i == 0)
            continue;
        const double dt = nodes_[i].t - nodes_[i - 1].t;
        if (!(dt > 0.0))
            throw ValidationError("worldline " + label_ + " node times must be strictly increasing");
        const double speed = (nodes_[i].x - nodes_[i - 1].x).norm() / dt;
        if (!(speed < c_))
            throw ValidationError("worldline " + label_ + " segment " + std::to_string(i - 1) +
                                  " is not subluminal (v/c = " + std::to_string(speed / c_) + ")");
    }
}

std::size_t Worldline::segment_of(double t) const
{
    // last j with t_j <= t, clamped to a valid segment index
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t, [](double v, const Node& n) { return v < n.t; });
    std::size_t j = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(j, nodes_.size() - 2);
}

Eigen::Vector3d Worldline::position(double t) const
{
    if (t <= nodes_.front().t)
        return nodes_.front().x;
    if (t >= nodes_.back().t)
        return nodes_.back().x;
    const std::size_t j = segment_of(t);
    const Node& a = nodes_[j];
    const Node& b = nodes_[j + 1];
    return a.x + (b.x - a.x) * ((t - a.t) / (b.t - a.t));
}

Eigen::Vector3d Worldline::velocity(double t) const
{
    if (t < nodes_.front().t || t >= nodes_.back().t)
        return Eigen::Vector3d::Zero();
    const std::size_t j = segment_of(t);
    return (nodes_[j + 1].x - nodes_[j].x) / (nodes_[j + 1].t - nodes_[j].t);
}

std::vector<double> Worldline::kinks() const
{
    std::vector<double> out;
    Eigen::Vector3d before = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Eigen::Vector3d after = i + 1 < nodes_.size()
                                          ? Eigen::Vector3d((nodes_[i + 1].x - nodes_[i].x) / (nodes_[i + 1].t - nodes_[i].t))
                                          : Eigen::Vector3d::Zero();
        if (after != before)
            out.push_back(nodes_[i].t);
        before = after;
    }
    return out;
}

namespace {

/// Light-cone delay s >= 0 for a source moving uniformly with velocity v
/// that would sit at P at the field time: c^2 s^2 = |D + sign * v s|^2 with
/// D = x - P, sign +1 retarded and -1 advanced.
double uniform_delay(const Eigen::Vector3d& d, const Eigen::Vector3d& v, double c, int sign)
{
    const double a = c * c - v.squaredNorm();
    const double b = sign * d.dot(v);
    const double dd = d.squaredNorm();
    const double root = std::sqrt(b * b + a * dd);
    // pick the cancellation-free form of the positive root
    return b >= 0.0 ? (b + root) / a : dd / (root - b);
}

} // namespace

Worldline::Emission Worldline::light_cone(double t, const Eigen::Vector3d& x, int direction) const
{
    if (direction != -1 && direction != 1)
        throw ValidationError("light-cone direction must be -1 or +1");
    const double sign = direction;
    // h(t') = sign * c (t' - t) - |x - pos(t')|, monotone in t' for subluminal motion
    auto h = [&](std::size_t i) { return sign * c_ * (nodes_[i].t - t) - (x - nodes_[i].x).norm(); };
    const std::size_t last = nodes_.size() - 1;

    auto stationary = [&](const Node& n) {
        const double s = (x - n.x).norm() / c_;
        return Emission{t + sign * s, n.x, Eigen::Vector3d::Zero()};
    };
    if (direction < 0) {
        if (h(0) <= 0.0)
            return stationary(nodes_.front());
        if (h(last) >= 0.0)
            return stationary(nodes_.back());
    } else {
        if (h(last) <= 0.0)
            return stationary(nodes_.back());
        if (h(0) >= 0.0)
            return stationary(nodes_.front());
    }
    // Now h(0) > 0 > h(last) (retarded) or h(0) < 0 < h(last) (advanced);
    // bisect over nodes for the bracketing segment.
    std::size_t lo = 0, hi = last;
    const bool increasing = direction > 0;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        const double hm = h(mid);
        const bool below = increasing ? hm < 0.0 : hm > 0.0;
        if (below)
            lo = mid;
        else
            hi = mid;
    }
    const Node& a = nodes_[lo];
    const Node& b = nodes_[lo + 1];
    const Eigen::Vector3d v = (b.x - a.x) / (b.t - a.t);
    const Eigen::Vector3d p = a.x + v * (t - a.t);
    const double s = uniform_delay(x - p, v, c_, -direction);
    const double te = t + sign * s;
    const double span = b.t - a.t;
    if (!std::isfinite(te) || te < a.t - 1e-9 * span || te > b.t + 1e-9 * span) {
        std::ostringstream os;
        os.precision(17);
        os << "light-cone solve failed on worldline '" << label_ << "' for field time " << t << " (segment "
           << lo << " [" << a.t << ", " << b.t << "], solution " << te << ")";
        throw ConvergenceError(os.str());
    }
    return {te, p + sign * v * s, v};
}

Worldline Worldline::shifted(double dt) const
{
    std::vector<Node> n = nodes_;
    for (auto& node : n)
        node.t += dt;
    return {std::move(n), c_, label_};
}

} // namespace gie::pathint

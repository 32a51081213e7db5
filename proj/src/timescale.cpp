#include "tsvar/timescale.hpp"

#include <algorithm>
#include <cmath>

namespace tsvar {

namespace {

// Two consecutive segment endpoints closer than this are treated as the same
// node (merged); anything between "same" and "increasing" is an overlap error.
constexpr double kMergeTol = 1e-12;

}  // namespace

TimeScaleMesh::TimeScaleMesh(std::vector<double> nodes, std::vector<GapOrigin> origins)
    : nodes_(std::move(nodes)), origins_(std::move(origins)) {
    if (nodes_.size() < 2 || origins_.size() != nodes_.size() - 1)
        throw MeshMismatch("mesh requires n nodes and n-1 gap origins");
    mu_.resize(nodes_.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        mu_[i] = nodes_[i + 1] - nodes_[i];
        if (!(mu_[i] > 0.0))
            throw OverlappingSegments("mesh nodes must be strictly increasing");
    }
}

double TimeScaleMesh::node(std::size_t i) const {
    if (i >= nodes_.size()) throw IndexOutOfRange("node index out of range");
    return nodes_[i];
}

double TimeScaleMesh::graininess(std::size_t i) const {
    if (i >= mu_.size()) throw IndexOutOfRange("gap index out of range");
    return mu_[i];
}

GapOrigin TimeScaleMesh::origin(std::size_t gap) const {
    if (gap >= origins_.size()) throw IndexOutOfRange("gap index out of range");
    return origins_[gap];
}

std::optional<std::size_t> TimeScaleMesh::find_node(double t, double tol) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t - tol);
    if (it == nodes_.end()) return std::nullopt;
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
    if (std::fabs(nodes_[i] - t) <= tol) return i;
    return std::nullopt;
}

TimeScaleMesh build_mesh(const TimeScaleSpec& spec) {
    std::vector<double> nodes;
    std::vector<GapOrigin> origins;

    auto append_node = [&](double t, GapOrigin origin_of_joining_gap) {
        if (!nodes.empty()) {
            if (t <= nodes.back() + kMergeTol) {
                if (std::fabs(t - nodes.back()) <= kMergeTol) return;  // merge
                throw OverlappingSegments("segment times overlap or decrease at t = " +
                                          std::to_string(t));
            }
            origins.push_back(origin_of_joining_gap);
        }
        nodes.push_back(t);
    };

    for (const Segment& seg : spec.segments) {
        if (std::holds_alternative<ContinuousInterval>(seg)) {
            const auto& ci = std::get<ContinuousInterval>(seg);
            if (ci.subdivisions < 1)
                throw TooFewPoints("interval segment needs >= 1 subdivision");
            if (!(ci.hi > ci.lo))
                throw OverlappingSegments("interval segment needs hi > lo");
            // The gap that bridges a previous segment to this one is a genuine
            // hole in the time scale, hence scattered.
            append_node(ci.lo, GapOrigin::Scattered);
            const double h = (ci.hi - ci.lo) / ci.subdivisions;
            for (int j = 1; j < ci.subdivisions; ++j)
                append_node(ci.lo + j * h, GapOrigin::Refined);
            append_node(ci.hi, GapOrigin::Refined);
        } else {
            const auto& dp = std::get<DiscretePoints>(seg);
            for (double t : dp.times) append_node(t, GapOrigin::Scattered);
        }
    }

    if (nodes.size() < 3)
        throw TooFewPoints("time scale needs at least 3 distinct nodes, got " +
                           std::to_string(nodes.size()));
    return TimeScaleMesh(std::move(nodes), std::move(origins));
}

std::vector<double> delta_derivative(const TimeScaleMesh& mesh, const GridFunction& u) {
    if (u.size() != mesh.node_count())
        throw MeshMismatch("grid function size does not match mesh");
    std::vector<double> out(mesh.gap_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (u[i + 1] - u[i]) / mesh.graininess(i);
    return out;
}

double delta_integral(const TimeScaleMesh& mesh, const GridFunction& w,
                      std::size_t gap_lo, std::size_t gap_hi) {
    if (w.size() != mesh.node_count())
        throw MeshMismatch("grid function size does not match mesh");
    if (gap_lo > gap_hi || gap_hi > mesh.gap_count())
        throw IndexOutOfRange("integration range out of range");
    double s = 0.0;
    const auto& mu = mesh.graininess();
    for (std::size_t i = gap_lo; i < gap_hi; ++i) s += mu[i] * w[i];
    return s;
}

ExpFnResult exp_fn(const TimeScaleMesh& mesh, const GridFunction& g) {
    if (g.size() != mesh.node_count())
        throw MeshMismatch("generator size does not match mesh");
    ExpFnResult r;
    r.values = GridFunction(mesh.node_count(), 1.0);
    double e = 1.0;
    r.min_value = r.max_value = 1.0;
    for (std::size_t i = 0; i + 1 < mesh.node_count(); ++i) {
        const double factor = 1.0 + mesh.graininess(i) * g[i];
        if (factor == 0.0)
            throw NotRegressive("generator not regressive: 1 + mu*g vanishes at node " +
                                    std::to_string(i),
                                i);
        if (factor < 0.0) r.sign_change = true;
        e *= factor;
        r.values[i + 1] = e;
        r.min_value = std::min(r.min_value, e);
        r.max_value = std::max(r.max_value, e);
    }
    if (r.sign_change)
        r.warnings.push_back(
            "exponential changes sign: some Euler factor 1 + mu*g is negative");
    return r;
}

}  // namespace tsvar

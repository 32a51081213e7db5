#pragma once

// Bounded time scales represented as finite node meshes.
//
// A mesh is a strictly increasing list of nodes t_0 < ... < t_N covering
// [a, b] = [t_0, t_N]. Gap i joins node i to node i+1 and carries the
// graininess mu_i = t_{i+1} - t_i together with an origin tag: a gap either
// discretizes a continuum interval (refined) or is a genuine gap of the time
// scale (scattered). Forward-difference calculus on the nodes:
//
//   (u^Delta)_i   = (u_{i+1} - u_i) / mu_i              for i < N
//   integral over [t_lo, t_hi)  =  sum mu_i w_i          (left endpoints)
//   e_g(t_{i+1})  = e_g(t_i) * (1 + mu_i g(t_i)),  e_g(t_0) = 1

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tsvar/error.hpp"

namespace tsvar {

struct OverlappingSegments : Error {
    using Error::Error;
};
struct TooFewPoints : Error {
    using Error::Error;
};
struct MeshMismatch : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
/// 1 + mu_i * g(t_i) vanished: the generator is not regressive on this mesh.
struct NotRegressive : Error {
    std::size_t index;
    NotRegressive(const std::string& what, std::size_t i) : Error(what), index(i) {}
};

enum class GapOrigin : unsigned char { Refined, Scattered };

/// A continuum piece [lo, hi] discretized into `subdivisions` equal gaps.
struct ContinuousInterval {
    double lo;
    double hi;
    int subdivisions;
};

/// Explicit, strictly increasing points of the time scale.
struct DiscretePoints {
    std::vector<double> times;
};

using Segment = std::variant<ContinuousInterval, DiscretePoints>;

struct TimeScaleSpec {
    std::vector<Segment> segments;
};

class TimeScaleMesh {
public:
    TimeScaleMesh() = default;
    TimeScaleMesh(std::vector<double> nodes, std::vector<GapOrigin> origins);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t gap_count() const { return nodes_.empty() ? 0 : nodes_.size() - 1; }

    const std::vector<double>& nodes() const { return nodes_; }
    double node(std::size_t i) const;

    /// mu_i = t_{i+1} - t_i.
    double graininess(std::size_t i) const;
    const std::vector<double>& graininess() const { return mu_; }

    GapOrigin origin(std::size_t gap) const;

    double a() const { return nodes_.front(); }
    double b() const { return nodes_.back(); }
    double length() const { return b() - a(); }

    /// Index of the node within `tol` of t, if any.
    std::optional<std::size_t> find_node(double t, double tol) const;

    bool operator==(const TimeScaleMesh& other) const {
        return nodes_ == other.nodes_;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> mu_;
    std::vector<GapOrigin> origins_;
};

/// Node values of a function on a mesh (size node_count()).
struct GridFunction {
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(std::vector<double> v) : values(std::move(v)) {}
    GridFunction(std::size_t n, double fill) : values(n, fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    double* data() { return values.data(); }
    const double* data() const { return values.data(); }
};

/// Build a mesh from ordered segments. Segments must be disjoint and globally
/// increasing; a shared endpoint between consecutive segments is merged.
/// Throws OverlappingSegments or TooFewPoints (< 3 distinct nodes).
TimeScaleMesh build_mesh(const TimeScaleSpec& spec);

/// Forward difference quotient; result has gap_count() entries.
/// Throws MeshMismatch if u.size() != node_count().
std::vector<double> delta_derivative(const TimeScaleMesh& mesh, const GridFunction& u);

/// Left-endpoint integral of w over [t_{gap_lo}, t_{gap_hi}):
/// sum_{i = gap_lo}^{gap_hi - 1} mu_i w_i. `w` holds node values.
/// Throws IndexOutOfRange for bad gap bounds, MeshMismatch for bad sizes.
double delta_integral(const TimeScaleMesh& mesh, const GridFunction& w,
                      std::size_t gap_lo, std::size_t gap_hi);

struct ExpFnResult {
    GridFunction values;      // e_g at every node, e_g(t_0) = 1
    double min_value = 0.0;
    double max_value = 0.0;
    bool sign_change = false;  // some Euler factor was negative
    std::vector<std::string> warnings;
};

/// Cumulative Euler product for the generalized exponential of generator g
/// (node values). Throws NotRegressive if some factor 1 + mu_i g_i vanishes;
/// negative factors are allowed with a warning and set sign_change.
ExpFnResult exp_fn(const TimeScaleMesh& mesh, const GridFunction& g);

}  // namespace tsvar

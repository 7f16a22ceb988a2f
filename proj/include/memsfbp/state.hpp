#pragma once

#include <functional>
#include <vector>

#include "memsfbp/grid.hpp"
#include "memsfbp/params.hpp"

namespace memsfbp {

/// Sampled displacements of the two membranes at one instant. The upper
/// membrane u hangs from z = 0 (u <= 0), the lower membrane v stands above
/// z = -1 (v >= -1); the gap u - v stays positive while the state is valid.
/// Snapshots are value-semantic and never aliased across module boundaries.
struct MembraneState {
    Grid1D grid;
    std::vector<double> u;  // upper displacement, pinned u(+-1) = 0
    std::vector<double> v;  // lower displacement, pinned v(+-1) = -1
    double t = 0.0;

    MembraneState() = default;
    /// Rest state u = 0, v = -1.
    explicit MembraneState(const Grid1D& g);

    double gap(int i) const { return u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]; }
    double min_gap() const;

    /// u(x), v(x) by piecewise-linear interpolation between nodes.
    double interp_u(double x) const;
    double interp_v(double x) const;
};

enum class StateClass {
    admissible,
    touchdown,
    boundary_violation,
};

const char* to_string(StateClass c) noexcept;

/// Classifies a state: touchdown once the minimum gap drops below the
/// numerical threshold, admissible when the pinning and ordering invariants
/// hold with at least that gap, boundary-violation otherwise.
/// Throws StructuralError on mismatched sample/grid sizes.
StateClass validate_state(const MembraneState& s, const GapParams& g);

/// Samples u(x) = fu(x), v(x) = fv(x) on the grid with the boundary values
/// pinned exactly.
MembraneState sample_state(const Grid1D& g,
                           const std::function<double(double)>& fu,
                           const std::function<double(double)>& fv,
                           double t = 0.0);

} // namespace memsfbp

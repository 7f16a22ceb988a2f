#pragma once

#include <vector>

#include "memsfbp/grid.hpp"
#include "memsfbp/state.hpp"

namespace memsfbp {

/// One rasterized sample in physical coordinates. inside marks membership in
/// the gap region Omega_{u,v} (within an interpolation tolerance of 1e-12 at
/// the membranes).
struct PhysicalSample {
    double x = 0.0;
    double z = 0.0;
    double value = 0.0;
    bool inside = false;
};

struct RefPoint {
    double x = 0.0;
    double z = 0.0;  // z' in [0, 1]
};

struct PhysPoint {
    double x = 0.0;
    double z = 0.0;  // physical ordinate in [-1, 0]
};

/// T(x, z) = (x, (z - v(x)) / (u(x) - v(x))). The membranes map to z' = 1
/// (upper) and z' = 0 (lower). Throws DomainError when z lies outside
/// [v(x), u(x)] by more than 1e-12.
RefPoint map_to_reference(double x, double z, const MembraneState& s);

/// Inverse map T^{-1}(x', z') = (x', z' (u - v) + v).
PhysPoint map_from_reference(double xp, double zp, const MembraneState& s);

/// Pulls a reference-domain field back to a uniform physical target grid on
/// I x (-1, 0) with (nx_t + 1) x (nz_t + 1) nodes. Nodes outside Omega_{u,v}
/// carry value 0 and inside = false; inside nodes carry the bilinear
/// interpolant of the field at T(x, z). Samples are x-major.
std::vector<PhysicalSample> rasterize_physical(const Field2D& phi_tilde,
                                               const MembraneState& s,
                                               int nx_t, int nz_t);

} // namespace memsfbp

#include "memsfbp/transform.hpp"

#include <algorithm>
#include <cmath>

#include "memsfbp/parallel.hpp"

namespace memsfbp {

namespace {
constexpr double kMembraneTol = 1e-12;  // points this close to a membrane count as inside
}

RefPoint map_to_reference(double x, double z, const MembraneState& s) {
    const double uu = s.interp_u(x);
    const double vv = s.interp_v(x);
    if (z < vv - kMembraneTol || z > uu + kMembraneTol) {
        throw DomainError("map_to_reference: z outside [v(x), u(x)]");
    }
    RefPoint r;
    r.x = x;
    r.z = (z - vv) / (uu - vv);
    r.z = std::clamp(r.z, 0.0, 1.0);
    return r;
}

PhysPoint map_from_reference(double xp, double zp, const MembraneState& s) {
    if (xp < -1.0 || xp > 1.0 || zp < -kMembraneTol || zp > 1.0 + kMembraneTol) {
        throw DomainError("map_from_reference: point outside the closure of Omega");
    }
    const double uu = s.interp_u(xp);
    const double vv = s.interp_v(xp);
    PhysPoint q;
    q.x = xp;
    q.z = zp * (uu - vv) + vv;
    return q;
}

namespace {

double bilinear(const Field2D& f, double x, double zp) {
    const Grid2D& g = f.grid;
    const double sx = (x + 1.0) / g.gx.h;
    int i = std::min(static_cast<int>(sx), g.gx.n - 1);
    const double fx = sx - i;
    const double sz = zp / g.hz;
    int j = std::min(static_cast<int>(sz), g.nz - 1);
    const double fz = sz - j;
    return f.at(i, j) * (1.0 - fx) * (1.0 - fz) + f.at(i + 1, j) * fx * (1.0 - fz) +
           f.at(i, j + 1) * (1.0 - fx) * fz + f.at(i + 1, j + 1) * fx * fz;
}

} // namespace

std::vector<PhysicalSample> rasterize_physical(const Field2D& phi_tilde,
                                               const MembraneState& s,
                                               int nx_t, int nz_t) {
    if (nx_t < 1 || nz_t < 1) {
        throw StructuralError("rasterize_physical: target grid needs at least one cell per direction");
    }
    std::vector<PhysicalSample> out(static_cast<std::size_t>((nx_t + 1) * (nz_t + 1)));
    parallel_for(static_cast<std::int64_t>(nx_t) + 1, [&](std::int64_t ii) {
        const int i = static_cast<int>(ii);
        const double x = -1.0 + 2.0 * i / nx_t;
        const double uu = s.interp_u(x);
        const double vv = s.interp_v(x);
        for (int j = 0; j <= nz_t; ++j) {
            PhysicalSample& ps = out[static_cast<std::size_t>(i * (nz_t + 1) + j)];
            ps.x = x;
            ps.z = -1.0 + static_cast<double>(j) / nz_t;
            if (ps.z >= vv - kMembraneTol && ps.z <= uu + kMembraneTol) {
                const double zp = std::clamp((ps.z - vv) / (uu - vv), 0.0, 1.0);
                ps.value = bilinear(phi_tilde, x, zp);
                ps.inside = true;
            }
        }
    });
    return out;
}

} // namespace memsfbp

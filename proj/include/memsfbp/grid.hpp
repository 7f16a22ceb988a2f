#pragma once

#include <cstddef>
#include <vector>

#include "memsfbp/errors.hpp"

namespace memsfbp {

/// Uniform node grid on I = [-1, 1] with an even cell count, so that x = 0
/// is a node and node i reflects onto node n - i exactly (bitwise: nodes are
/// computed as (2i - n)/n, hence nodes[n-i] == -nodes[i]).
struct Grid1D {
    int n = 0;                  // cell count N_x (even, >= 8)
    double h = 0.0;             // spacing 2/N_x
    std::vector<double> nodes;  // N_x + 1 abscissae, nodes[0] = -1, nodes[n] = 1

    Grid1D() = default;
    explicit Grid1D(int cells);

    int num_nodes() const noexcept { return n + 1; }
    double x(int i) const { return nodes[static_cast<std::size_t>(i)]; }
};

/// Tensor grid on the reference rectangle Omega = I x (0, 1).
struct Grid2D {
    Grid1D gx;
    int nz = 0;                  // cell count N_z (>= 8)
    double hz = 0.0;             // spacing 1/N_z
    std::vector<double> znodes;  // N_z + 1 ordinates, znodes[0] = 0, znodes[nz] = 1

    Grid2D() = default;
    Grid2D(int nx_cells, int nz_cells);

    int num_nodes() const noexcept { return gx.num_nodes() * (nz + 1); }
    double z(int j) const { return znodes[static_cast<std::size_t>(j)]; }
    /// Flat node index, x-major.
    int idx(int i, int j) const noexcept { return i * (nz + 1) + j; }
};

/// Scalar field sampled on the nodes of a Grid2D, stored x-major.
struct Field2D {
    Grid2D grid;
    std::vector<double> values;

    Field2D() = default;
    explicit Field2D(const Grid2D& g)
        : grid(g), values(static_cast<std::size_t>(g.num_nodes()), 0.0) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(grid.idx(i, j))]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(grid.idx(i, j))]; }
};

} // namespace memsfbp

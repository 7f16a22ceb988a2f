#include "memsfbp/grid.hpp"

namespace memsfbp {

Grid1D::Grid1D(int cells) : n(cells) {
    if (cells < 8 || cells % 2 != 0) {
        throw StructuralError("Grid1D: cell count must be even and >= 8");
    }
    h = 2.0 / cells;
    nodes.resize(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        // (2i - n)/n keeps the grid exactly symmetric about 0.
        nodes[static_cast<std::size_t>(i)] = static_cast<double>(2 * i - cells) / cells;
    }
}

Grid2D::Grid2D(int nx_cells, int nz_cells) : gx(nx_cells), nz(nz_cells) {
    if (nz_cells < 8) {
        throw StructuralError("Grid2D: z cell count must be >= 8");
    }
    hz = 1.0 / nz_cells;
    znodes.resize(static_cast<std::size_t>(nz_cells) + 1);
    for (int j = 0; j <= nz_cells; ++j) {
        znodes[static_cast<std::size_t>(j)] = static_cast<double>(j) / nz_cells;
    }
}

} // namespace memsfbp

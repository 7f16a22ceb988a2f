#include "memsfbp/state.hpp"

#include <algorithm>
#include <cmath>

namespace memsfbp {

MembraneState::MembraneState(const Grid1D& g)
    : grid(g),
      u(static_cast<std::size_t>(g.num_nodes()), 0.0),
      v(static_cast<std::size_t>(g.num_nodes()), -1.0) {}

double MembraneState::min_gap() const {
    double m = u[0] - v[0];
    for (std::size_t i = 1; i < u.size(); ++i) {
        m = std::min(m, u[i] - v[i]);
    }
    return m;
}

namespace {

double interp(const std::vector<double>& w, const Grid1D& g, double x) {
    if (x < -1.0 || x > 1.0) {
        throw DomainError("membrane interpolation: x outside [-1, 1]");
    }
    if (x >= 1.0) return w.back();
    const double s = (x + 1.0) / g.h;
    int i = static_cast<int>(s);
    i = std::min(i, g.n - 1);
    const double frac = s - i;
    return w[static_cast<std::size_t>(i)] * (1.0 - frac) + w[static_cast<std::size_t>(i) + 1] * frac;
}

} // namespace

double MembraneState::interp_u(double x) const { return interp(u, grid, x); }
double MembraneState::interp_v(double x) const { return interp(v, grid, x); }

const char* to_string(StateClass c) noexcept {
    switch (c) {
        case StateClass::admissible: return "admissible";
        case StateClass::touchdown: return "touchdown";
        case StateClass::boundary_violation: return "boundary-violation";
    }
    return "?";
}

StateClass validate_state(const MembraneState& s, const GapParams& g) {
    g.validate();
    const std::size_t n_nodes = static_cast<std::size_t>(s.grid.num_nodes());
    if (s.grid.n < 8 || s.u.size() != n_nodes || s.v.size() != n_nodes) {
        throw StructuralError("validate_state: sample vectors do not match the grid");
    }
    if (s.min_gap() < g.touchdown_gap) {
        return StateClass::touchdown;
    }
    const std::size_t last = n_nodes - 1;
    if (s.u[0] != 0.0 || s.u[last] != 0.0 || s.v[0] != -1.0 || s.v[last] != -1.0) {
        return StateClass::boundary_violation;
    }
    for (std::size_t i = 0; i < n_nodes; ++i) {
        if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i])) {
            return StateClass::boundary_violation;
        }
        if (!(s.v[i] >= -1.0 && s.v[i] < s.u[i] && s.u[i] <= 0.0)) {
            return StateClass::boundary_violation;
        }
    }
    return StateClass::admissible;
}

MembraneState sample_state(const Grid1D& g,
                           const std::function<double(double)>& fu,
                           const std::function<double(double)>& fv,
                           double t) {
    MembraneState s(g);
    s.t = t;
    for (int i = 1; i < g.n; ++i) {
        s.u[static_cast<std::size_t>(i)] = fu(g.x(i));
        s.v[static_cast<std::size_t>(i)] = fv(g.x(i));
    }
    s.u.front() = 0.0;
    s.u.back() = 0.0;
    s.v.front() = -1.0;
    s.v.back() = -1.0;
    return s;
}

} // namespace memsfbp

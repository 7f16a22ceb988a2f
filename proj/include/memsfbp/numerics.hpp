#pragma once

#include <span>
#include <vector>

#include "memsfbp/grid.hpp"

namespace memsfbp {

/// First derivative of nodal samples: central differences at interior nodes,
/// second-order one-sided stencils at the ends.
std::vector<double> derivative1(std::span<const double> w, double h);

/// Second derivative, same accuracy layout (one-sided 4-point at the ends).
std::vector<double> derivative2(std::span<const double> w, double h);

/// Composite trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> w, double h);

/// Solves (I + c*A_h) x = rhs on the interior of a Grid1D, where A_h is the
/// Dirichlet second-difference operator (A_h w)_i = (2 w_i - w_{i-1} - w_{i+1})/h^2.
/// rhs and the returned vector hold interior values only (n - 1 entries).
std::vector<double> solve_shifted_dirichlet_laplacian(std::span<const double> rhs,
                                                      double c, double h);

/// max_i |a_i - b_i|
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// max_i |a_i|
double max_abs(std::span<const double> a);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

} // namespace memsfbp

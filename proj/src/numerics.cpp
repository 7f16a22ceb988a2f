#include "memsfbp/numerics.hpp"

#include <cmath>
#include <cstddef>

#include "memsfbp/errors.hpp"

namespace memsfbp {

std::vector<double> derivative1(std::span<const double> w, double h) {
    const std::size_t n = w.size();
    if (n < 4) throw StructuralError("derivative1: need at least 4 samples");
    std::vector<double> d(n);
    d[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
    }
    d[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
    return d;
}

std::vector<double> derivative2(std::span<const double> w, double h) {
    const std::size_t n = w.size();
    if (n < 4) throw StructuralError("derivative2: need at least 4 samples");
    std::vector<double> d(n);
    const double h2 = h * h;
    d[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / h2;
    }
    d[n - 1] = (2.0 * w[n - 1] - 5.0 * w[n - 2] + 4.0 * w[n - 3] - w[n - 4]) / h2;
    return d;
}

double trapezoid(std::span<const double> w, double h) {
    if (w.size() < 2) throw StructuralError("trapezoid: need at least 2 samples");
    double sum = 0.5 * (w.front() + w.back());
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
        sum += w[i];
    }
    return sum * h;
}

std::vector<double> solve_shifted_dirichlet_laplacian(std::span<const double> rhs,
                                                      double c, double h) {
    // Thomas algorithm for the constant-coefficient tridiagonal
    // (1 + 2c/h^2) on the diagonal, -c/h^2 off it.
    const std::size_t m = rhs.size();
    const double off = -c / (h * h);
    const double diag = 1.0 + 2.0 * c / (h * h);
    std::vector<double> cp(m), dp(m), x(m);
    cp[0] = off / diag;
    dp[0] = rhs[0] / diag;
    for (std::size_t i = 1; i < m; ++i) {
        const double denom = diag - off * cp[i - 1];
        cp[i] = off / denom;
        dp[i] = (rhs[i] - off * dp[i - 1]) / denom;
    }
    x[m - 1] = dp[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    return x;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw StructuralError("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw StructuralError("fit_slope: need matching samples, at least 2");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace memsfbp

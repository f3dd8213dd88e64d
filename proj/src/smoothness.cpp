#include "qfn/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfn {

SmoothnessClass::SmoothnessClass(double q_, double M_, double L_, double a_) {
    if (q_ <= 0.0 || M_ < 0.0 || L_ <= 0.0)
        throw std::invalid_argument("SmoothnessClass: q, L must be positive, M >= 0");
    q = q_;
    m = static_cast<int>(std::ceil(q_)) - 1;
    sigma = q_ - m;
    M = M_;
    L = L_;
    a = (a_ > 0.0) ? a_ : L_ / 4.0;
    if (a > L / 2.0) throw std::invalid_argument("SmoothnessClass: a must be <= L/2");
}

double SmoothnessClass::seminorm_budget() const { return M * M / std::pow(L, 2.0 * q); }

double SmoothnessClass::fourier_budget() const {
    const double c0 = c0_constant(*this);
    return M * M / (2.0 * c0 * c0);
}

namespace {

// sup over (0, pi] of x^{-sigma} sin x.  For sigma = 1 the sup is the x->0
// limit; the scan therefore starts at a tiny abscissa.
double sup_scaled_sine(double sigma) {
    auto g = [sigma](double x) { return std::sin(x) / std::pow(x, sigma); };
    const int n = 200000;
    double best_x = 1e-12, best = g(best_x);
    for (int i = 1; i <= n; ++i) {
        const double x = std::numbers::pi * i / n;
        const double v = g(x);
        if (v > best) { best = v; best_x = x; }
    }
    // golden-section refinement around the best scan point
    double lo = std::max(1e-12, best_x - std::numbers::pi / n);
    double hi = std::min(std::numbers::pi, best_x + std::numbers::pi / n);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        if (g(c) > g(d)) hi = d; else lo = c;
        c = hi - gr * (hi - lo);
        d = lo + gr * (hi - lo);
    }
    return std::max(best, g(0.5 * (lo + hi)));
}

}  // namespace

double c0_constant(const SmoothnessClass& cls) {
    return 2.0 * std::pow(2.0 * std::numbers::pi, cls.m) *
           std::pow(std::numbers::pi, cls.sigma) * sup_scaled_sine(cls.sigma);
}

double c0_constant(double q) { return c0_constant(SmoothnessClass(q, 1.0)); }

std::vector<double> central_derivative(const std::vector<double>& v, int m, double h) {
    std::vector<double> d = v;
    const int g = static_cast<int>(v.size());
    for (int order = 0; order < m; ++order) {
        std::vector<double> next(g);
        for (int j = 0; j < g; ++j) {
            const int jp = (j + 1) % g;
            const int jm = (j - 1 + g) % g;
            next[j] = (d[jp] - d[jm]) / (2.0 * h);
        }
        d.swap(next);
    }
    return d;
}

double holder_seminorm(const GridFunction& f, const SmoothnessClass& cls) {
    const int g = f.size();
    if (g < 16 * (cls.m + 1))
        throw std::invalid_argument("holder_seminorm: grid too coarse for m-th derivative");
    const double h = f.length / g;
    const auto d = central_derivative(f.values, cls.m, h);

    const int t_max = std::max(1, static_cast<int>(std::floor(cls.a / h)));
    double sup = 0.0;
    // The sup is typically approached at small eps; sample every step up to 64
    // grid units, then geometrically, to keep dense grids affordable.
    int t = 1;
    while (t <= t_max) {
        const double eps = t * h;
        const double scale = std::pow(eps, cls.sigma);
        double acc = 0.0;
        for (int j = 0; j < g; ++j) {
            const double diff = (d[(j + t) % g] - d[j]) / scale;
            acc += diff * diff;
        }
        sup = std::max(sup, acc / g);
        if (t < 64) ++t;
        else t = std::max(t + 1, static_cast<int>(t * 1.05));
    }
    return sup;
}

ConstraintCheck fourier_constraint(const FourierSpectrum& s, const SmoothnessClass& cls) {
    if (!s.conjugate_symmetric())
        throw std::invalid_argument("fourier_constraint: spectrum must be conjugate-symmetric");
    double value = 0.0;
    for (int k = 1; k <= s.k_max; ++k)
        value += std::pow(static_cast<double>(k), 2.0 * cls.q) * std::norm(s.at(k));
    return {value, value <= cls.fourier_budget() * (1.0 + 1e-12)};
}

}  // namespace qfn

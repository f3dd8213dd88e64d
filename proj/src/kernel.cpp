#include "qfn/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace qfn {

namespace {

// Lagrange basis at 0 for the nodes y_i = 2(i+theta)/(m+1) - 1.
double lagrange_at_zero(int m, double theta, int j) {
    auto node = [m, theta](int i) { return 2.0 * (i + theta) / (m + 1) - 1.0; };
    double num = 1.0, den = 1.0;
    for (int i = 0; i <= m; ++i) {
        if (i == j) continue;
        num *= -node(i);
        den *= node(j) - node(i);
    }
    return num / den;
}

}  // namespace

double SmoothingKernel::eval(double y) const {
    if (y < -1.0 || y >= 1.0) return 0.0;
    const double t = (y + 1.0) * (m_ + 1) / 2.0;
    int j = static_cast<int>(std::floor(t));
    if (j > m_) j = m_;
    double theta = t - j;
    return lagrange_at_zero(m_, theta, j);
}

SmoothingKernel SmoothingKernel::build(int m, int theta_grid_size) {
    if (m < 0) throw std::invalid_argument("SmoothingKernel: m >= 0 required");
    if (theta_grid_size < 2) throw std::invalid_argument("SmoothingKernel: theta grid too small");
    SmoothingKernel k;
    k.m_ = m;
    const int n = theta_grid_size * (m + 1);
    k.samples_.resize(n);
    double h_max = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = -1.0 + 2.0 * i / n;
        k.samples_[i] = k.eval(y);
        h_max = std::max(h_max, std::abs(k.samples_[i]));
    }
    k.H_ = h_max;
    return k;
}

namespace {
// displacement wrapped to [-L/2, L/2)
double wrap_disp(double d, double L) {
    d = std::fmod(d, L);
    if (d < -L / 2.0) d += L;
    if (d >= L / 2.0) d -= L;
    return d;
}
}  // namespace

std::vector<double> kernel_sum_rule_check(const SmoothingKernel& kernel, long long n1,
                                          double x, double alpha, double L) {
    const int m = kernel.order();
    const double l = kernel.scale(L, n1);
    std::vector<double> sums(m + 1, 0.0);
    for (long long j = 0; j < n1; ++j) {
        const double xj = (j + alpha) * L / n1;
        const double d = wrap_disp(xj - x, L);
        const double f = kernel.eval(-d / l);  // f(x - x_j) = h((x - x_j)/l)
        if (f == 0.0) continue;
        double pw = 1.0;
        for (int k = 0; k <= m; ++k) {
            sums[k] += pw * f;
            pw *= d;
        }
    }
    sums[0] -= 1.0;
    return sums;
}

GridFunction kernel_reconstruct(const std::vector<double>& site_values,
                                const SmoothingKernel& kernel, double alpha, double L,
                                int grid_size) {
    const long long n1 = static_cast<long long>(site_values.size());
    const double l = kernel.scale(L, n1);
    GridFunction out;
    out.length = L;
    out.values.assign(grid_size, 0.0);
    const double site_spacing = L / n1;
    for (int g = 0; g < grid_size; ++g) {
        const double x = L * g / grid_size;
        // Only sites with |x - x_j| < l contribute.
        const long long j_center = static_cast<long long>(std::floor(x / site_spacing - alpha));
        const long long reach = static_cast<long long>(std::ceil(l / site_spacing)) + 1;
        double acc = 0.0;
        for (long long j = j_center - reach; j <= j_center + reach; ++j) {
            const long long jw = ((j % n1) + n1) % n1;
            const double xj = (j + alpha) * site_spacing;  // unwrapped position
            const double d = x - xj;
            if (d < -l || d >= l) continue;
            acc += site_values[jw] * kernel.eval(d / l);
        }
        out.values[g] = acc;
    }
    return out;
}

GridFunction smoothed_target(const GridFunction& target, const SmoothingKernel& kernel,
                             long long n1, double alpha) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("smoothed_target: alpha in [0,1) required");
    const double L = target.length;
    const int band = std::min(target.size() / 4, 1024);
    const FourierSpectrum spec = fourier_transform(target, band);
    std::vector<double> site_values(n1);
    for (long long j = 0; j < n1; ++j)
        site_values[j] = spec.eval((j + alpha) * L / n1);
    return kernel_reconstruct(site_values, kernel, alpha, L, target.size());
}

}  // namespace qfn

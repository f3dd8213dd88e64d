#pragma once

#include <vector>

#include "qfn/grid_function.hpp"

namespace qfn {

/// Order-m smoothing kernel h on [-1, 1).  At every offset theta in [0, 1)
/// the node values h(2(j+theta)/(m+1) - 1), j = 0..m, solve the Vandermonde
/// moment system (1, 0, ..., 0); the closed-form solution is the Lagrange
/// basis evaluated at 0, so eval() is exact and continuous in theta.
class SmoothingKernel {
  public:
    static SmoothingKernel build(int m, int theta_grid_size = 1024);

    int order() const { return m_; }
    double bound() const { return H_; }  // max |h|
    const std::vector<double>& samples() const { return samples_; }

    /// h(y); zero outside [-1, 1).
    double eval(double y) const;

    /// Smoothing length scale l = (m+1) L / (2 n1).
    double scale(double L, long long n1) const {
        return (m_ + 1) * L / (2.0 * static_cast<double>(n1));
    }

  private:
    int m_ = 0;
    double H_ = 1.0;
    std::vector<double> samples_;  // h on a uniform y-grid over [-1, 1)
};

/// Residuals of the site-sum moment identities at position x:
/// sum_j (x_j - x)^k f(x - x_j) minus (1 for k=0, 0 for k=1..m),
/// for sites x_j = (j + alpha) L / n1 and f(x) = h(x/l).
std::vector<double> kernel_sum_rule_check(const SmoothingKernel& kernel, long long n1,
                                          double x, double alpha, double L);

/// phi*(x) = sum_j phi(x_j) f(x - x_j) on the grid of `target`; site values
/// are taken from the band-limited interpolant of the target.
GridFunction smoothed_target(const GridFunction& target, const SmoothingKernel& kernel,
                             long long n1, double alpha);

/// Shared reconstruction: given per-site values v_j at x_j = (j+alpha)L/n1,
/// return sum_j v_j f(x - x_j) on a grid of size G.
GridFunction kernel_reconstruct(const std::vector<double>& site_values,
                                const SmoothingKernel& kernel, double alpha, double L,
                                int grid_size);

}  // namespace qfn

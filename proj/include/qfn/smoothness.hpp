#pragma once

#include "qfn/grid_function.hpp"

namespace qfn {

/// Hölder-class parameters (q = m + sigma, seminorm budget M, sup cutoff a).
struct SmoothnessClass {
    double q = 1.0;
    int m = 0;          // m = ceil(q) - 1
    double sigma = 1.0; // q - m, in (0, 1]
    double M = 1.0;
    double L = 1.0;
    double a = 0.25;    // cutoff for the epsilon-supremum, a <= L/2

    SmoothnessClass() = default;
    SmoothnessClass(double q_, double M_, double L_ = 1.0, double a_ = -1.0);

    /// Right-hand side of the Hölder constraint: M^2 / L^{2q}.
    double seminorm_budget() const;
    /// Right-hand side of the Fourier sufficient condition: M^2 / (2 c0^2).
    double fourier_budget() const;
};

/// c0 = 2 (2pi)^m pi^sigma sup_{0<x<=pi} x^{-sigma} sin x, by 1-D maximization.
double c0_constant(const SmoothnessClass& cls);
double c0_constant(double q);

/// Discretized Hölder seminorm: sup over grid-multiple epsilon <= a of
/// (1/G) sum_j |(d^{(m)}(x_j+eps) - d^{(m)}(x_j)) / eps^sigma|^2,
/// with the m-th derivative taken by periodic central finite differences.
/// The constraint holds iff the returned value <= cls.seminorm_budget().
double holder_seminorm(const GridFunction& f, const SmoothnessClass& cls);

struct ConstraintCheck {
    double value = 0.0;
    bool satisfied = false;
};

/// Fourier sufficient condition: value = sum_{k>=1} k^{2q} |phi_k|^2,
/// satisfied iff value <= M^2 / (2 c0^2).
ConstraintCheck fourier_constraint(const FourierSpectrum& s, const SmoothnessClass& cls);

/// Periodic central-difference m-th derivative (exposed for tests).
std::vector<double> central_derivative(const std::vector<double>& v, int m, double h);

}  // namespace qfn

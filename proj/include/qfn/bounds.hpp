#pragma once

#include <vector>

#include "qfn/record.hpp"
#include "qfn/smoothness.hpp"

namespace qfn {

/// Sine-basis parametrization phi_u(x) = sum_k sqrt(2) u_k sin(2 pi k x / L);
/// in-class iff ||u|| <= rho = M K^{-q} / c0.
struct PhaseVector {
    std::vector<double> u;
    double rho = 0.0;
    double length = 1.0;

    int dim() const { return static_cast<int>(u.size()); }
    double norm() const;
    bool in_class() const { return norm() <= rho; }
};

PhaseVector make_phase_vector(std::vector<double> u, const SmoothnessClass& cls);

/// Single-particle Fisher information matrix of the output probe state, by
/// analytic parameter derivatives and grid quadrature.  Requires G >= 8K.
std::vector<std::vector<double>> qfi_matrix(const PhaseVector& u, int grid_size);

/// Same matrix with central-difference derivatives (step 1e-5); test oracle.
std::vector<std::vector<double>> qfi_matrix_fd(const PhaseVector& u, int grid_size,
                                               double step = 1e-5);

/// Uniform unbiased bound (K / 8N)^{1/2}.
double uub(long long K, long long N);

/// Worst-case biased bound: 1/delta_WBB = 1/delta_UUB + 1/rho.
double wbb(double delta_uub, double rho);

struct SqlLowerBound {
    double bound = 0.0;       // max over scanned K of delta_WBB
    long long k_star = 1;     // argmax
    double floor_value = 0.0; // closed form c1 (M^{1/q} N^{-1})^{q/(2q+1)}
    double c1 = 0.0;
};

SqlLowerBound sql_lower(double q, double M, long long N);

struct HeisenbergLowerBound {
    double bound = 0.0;       // c2 (M^{1/q} N^{-1})^{q/(q+1)}
    long long np_star = 1;
    double c2 = 0.0;
    bool fell_back_to_sql = false;
};

HeisenbergLowerBound heisenberg_lower(double q, double M, long long N);

struct ResourcePlan {
    long long n1 = 1;  // K for WS
    long long n2 = 1;  // n_c for WS
    long long n_p = 1;
};

/// Integer-rounded analytic resource split used as estimator defaults.
ResourcePlan resource_optima(double q, double M, long long N, Regime regime);

struct BoundReport {
    double q = 0, M = 0;
    long long N = 0;
    double delta_uub = 0, delta_wbb = 0, sql_lower = 0, hl_lower = 0;
    long long optimal_K = 1, max_np = 1;
    double c0 = 0, c1_floor = 0, c2_floor = 0;
};

BoundReport bound_report(double q, double M, long long N);

}  // namespace qfn

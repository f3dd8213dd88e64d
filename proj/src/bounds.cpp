#include "qfn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qfn {

namespace {

constexpr double kPi = std::numbers::pi;

// phi_u(x) = sum_k sqrt(2) u_k sin(2 pi k x / L) on a size-G grid over [0, L).
std::vector<double> phase_on_grid(const std::vector<double>& u, double L, int G) {
    std::vector<double> phi(G, 0.0);
    for (int t = 0; t < G; ++t) {
        const double x = L * t / G;
        double s = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k)
            s += u[k] * std::sin(2.0 * kPi * (k + 1) * x / L);
        phi[t] = std::numbers::sqrt2 * s;
    }
    return phi;
}

// Output probe state as a 2G-vector: components [0,G) are the ground branch,
// [G,2G) the excited branch carrying e^{i phi(x)}.  Uniform position weight.
std::vector<std::complex<double>> probe_state(const std::vector<double>& phi) {
    const int G = static_cast<int>(phi.size());
    const double w = 1.0 / std::sqrt(2.0 * G);
    std::vector<std::complex<double>> psi(2 * G);
    for (int t = 0; t < G; ++t) {
        psi[t] = w;
        psi[G + t] = w * std::exp(std::complex<double>(0.0, phi[t]));
    }
    return psi;
}

std::complex<double> inner(const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void check_qfi_args(const PhaseVector& u, int G) {
    const int K = u.dim();
    if (K < 1) throw std::invalid_argument("qfi_matrix: empty parameter vector");
    if (G < 8 * K) throw std::invalid_argument("qfi_matrix: grid too coarse, need G >= 8K");
}

}  // namespace

double PhaseVector::norm() const {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(s);
}

PhaseVector make_phase_vector(std::vector<double> u, const SmoothnessClass& cls) {
    PhaseVector p;
    const double K = static_cast<double>(u.size());
    p.rho = cls.M / (c0_constant(cls) * std::pow(K, cls.q));
    p.u = std::move(u);
    p.length = cls.L;
    return p;
}

std::vector<std::vector<double>> qfi_matrix(const PhaseVector& u, int grid_size) {
    check_qfi_args(u, grid_size);
    const int K = u.dim();
    const int G = grid_size;
    const double L = u.length;

    // d_j psi has only an excited branch: i sqrt(2) sin(2 pi j x / L) e^{i phi} / sqrt(2G).
    // <d_j psi|d_k psi> = (1/G) sum_x sin_j sin_k  (real),
    // <psi|d_j psi>     = i c_j with c_j = sqrt(2)/(2G) sum_x sin_j  (purely imaginary).
    std::vector<std::vector<double>> sines(K, std::vector<double>(G));
    for (int j = 0; j < K; ++j)
        for (int t = 0; t < G; ++t)
            sines[j][t] = std::sin(2.0 * kPi * (j + 1) * t / G);

    std::vector<double> c(K, 0.0);
    for (int j = 0; j < K; ++j) {
        double s = 0.0;
        for (int t = 0; t < G; ++t) s += sines[j][t];
        c[j] = std::numbers::sqrt2 * s / (2.0 * G);
    }

    std::vector<std::vector<double>> J(K, std::vector<double>(K, 0.0));
    for (int j = 0; j < K; ++j) {
        for (int k = j; k < K; ++k) {
            double a = 0.0;
            for (int t = 0; t < G; ++t) a += sines[j][t] * sines[k][t];
            a /= G;
            const double val = 4.0 * (a - c[j] * c[k]);
            J[j][k] = val;
            J[k][j] = val;
        }
    }
    return J;
}

std::vector<std::vector<double>> qfi_matrix_fd(const PhaseVector& u, int grid_size,
                                               double step) {
    check_qfi_args(u, grid_size);
    const int K = u.dim();
    const int G = grid_size;

    auto state_at = [&](const std::vector<double>& v) {
        return probe_state(phase_on_grid(v, u.length, G));
    };
    const auto psi = state_at(u.u);

    std::vector<std::vector<std::complex<double>>> dpsi(K);
    for (int j = 0; j < K; ++j) {
        auto up = u.u;
        auto dn = u.u;
        up[j] += step;
        dn[j] -= step;
        const auto pu = state_at(up);
        const auto pd = state_at(dn);
        dpsi[j].resize(2 * G);
        for (int i = 0; i < 2 * G; ++i) dpsi[j][i] = (pu[i] - pd[i]) / (2.0 * step);
    }

    std::vector<std::vector<double>> J(K, std::vector<double>(K, 0.0));
    for (int j = 0; j < K; ++j) {
        const auto pj = inner(psi, dpsi[j]);
        for (int k = j; k < K; ++k) {
            const auto pk = inner(psi, dpsi[k]);
            const double val =
                4.0 * std::real(inner(dpsi[j], dpsi[k]) - std::conj(pj) * pk);
            J[j][k] = val;
            J[k][j] = val;
        }
    }
    return J;
}

double uub(long long K, long long N) {
    if (K < 1 || N < 1) throw std::invalid_argument("uub: K and N must be positive");
    return std::sqrt(static_cast<double>(K) / (8.0 * static_cast<double>(N)));
}

double wbb(double delta_uub, double rho) {
    if (delta_uub <= 0.0 || rho <= 0.0)
        throw std::invalid_argument("wbb: arguments must be positive");
    return 1.0 / (1.0 / delta_uub + 1.0 / rho);
}

SqlLowerBound sql_lower(double q, double M, long long N) {
    if (q <= 0.0 || M <= 0.0 || N < 1)
        throw std::invalid_argument("sql_lower: arguments must be positive");
    SqlLowerBound out;
    const double c0 = c0_constant(q);
    out.c1 = q / (2.0 * (2.0 * q + 1.0) * (2.0 * q + 1.0)) *
             std::pow(q / c0, 2.0 * q / (2.0 * q + 1.0));
    out.floor_value =
        out.c1 * std::pow(std::pow(M, 1.0 / q) / static_cast<double>(N),
                          q / (2.0 * q + 1.0));

    // Continuous optimum of 1/(sqrt(8N/K) + c0 K^q / M); scan a window around
    // it to absorb integer effects.
    const double k_analytic = std::pow(
        std::sqrt(8.0 * static_cast<double>(N)) * M / (2.0 * q * c0),
        2.0 / (2.0 * q + 1.0));
    const long long lo = std::max<long long>(1, static_cast<long long>(k_analytic / 4.0));
    const long long hi =
        std::max<long long>(lo, static_cast<long long>(std::ceil(4.0 * k_analytic)));
    for (long long K = lo; K <= hi; ++K) {
        const double rho = M / (c0 * std::pow(static_cast<double>(K), q));
        const double val = wbb(uub(K, N), rho);
        if (val > out.bound) {
            out.bound = val;
            out.k_star = K;
        }
    }
    return out;
}

HeisenbergLowerBound heisenberg_lower(double q, double M, long long N) {
    if (q <= 0.0 || M <= 0.0 || N < 1)
        throw std::invalid_argument("heisenberg_lower: arguments must be positive");
    HeisenbergLowerBound out;
    const auto sql = sql_lower(q, M, N);
    out.c2 = std::pow(sql.c1 / kPi, (2.0 * q + 1.0) / (q + 1.0));
    const double np_bound =
        std::pow(std::pow(kPi / sql.c1, (2.0 * q + 1.0) / 2.0) / M *
                     std::pow(static_cast<double>(N), q),
                 1.0 / (q + 1.0));
    const long long np_star = static_cast<long long>(std::floor(np_bound));
    if (np_star < 1) {
        out.bound = sql.bound;
        out.np_star = 1;
        out.fell_back_to_sql = true;
        return out;
    }
    out.np_star = np_star;
    out.bound = out.c2 * std::pow(std::pow(M, 1.0 / q) / static_cast<double>(N),
                                  q / (q + 1.0));
    return out;
}

ResourcePlan resource_optima(double q, double M, long long N, Regime regime) {
    ResourcePlan plan;
    if (N <= 1) return plan;
    if (regime == Regime::SQL) {
        const double k = std::pow(M * M * static_cast<double>(N), 1.0 / (2.0 * q + 1.0));
        plan.n1 = std::clamp<long long>(std::llround(k), 1, N);
        plan.n2 = std::max<long long>(1, N / plan.n1);
        plan.n_p = 1;
        return plan;
    }
    const double k = std::pow(M * static_cast<double>(N), 1.0 / (q + 1.0));
    plan.n1 = std::clamp<long long>(std::llround(k), 1, N);
    const auto hl = heisenberg_lower(q, M, N);
    plan.n_p = std::clamp<long long>(hl.np_star, 1, N);
    plan.n2 = std::max<long long>(1, N / plan.n_p);
    return plan;
}

BoundReport bound_report(double q, double M, long long N) {
    BoundReport rep;
    rep.q = q;
    rep.M = M;
    rep.N = N;
    rep.c0 = c0_constant(q);
    const auto sql = sql_lower(q, M, N);
    rep.sql_lower = sql.bound;
    rep.optimal_K = sql.k_star;
    rep.c1_floor = sql.floor_value;
    rep.delta_uub = uub(sql.k_star, N);
    const double rho = M / (rep.c0 * std::pow(static_cast<double>(sql.k_star), q));
    rep.delta_wbb = wbb(rep.delta_uub, rho);
    const auto hl = heisenberg_lower(q, M, N);
    rep.hl_lower = hl.bound;
    rep.max_np = hl.np_star;
    rep.c2_floor = hl.bound;
    return rep;
}

}  // namespace qfn

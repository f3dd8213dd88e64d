#include "qfn/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qfn/bounds.hpp"
#include "qfn/grid_function.hpp"
#include "qfn/harness.hpp"
#include "qfn/kernel.hpp"
#include "qfn/random.hpp"
#include "qfn/sampling.hpp"
#include "qfn/smoothness.hpp"
#include "qfn/ws_estimator.hpp"

namespace qfn::accept {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

ExperimentConfig sweep_config(Method method, Regime regime, double q, double M,
                              int n_lo_pow, int n_hi_pow, int trials,
                              std::uint64_t seed, int kernel_m = -1) {
    ExperimentConfig c;
    c.method = method;
    c.regime = regime;
    c.q = q;
    c.M = M;
    c.G = 4096;
    for (int p = n_lo_pow; p <= n_hi_pow; ++p) c.N_list.push_back(1LL << p);
    c.trials = trials;
    c.seed = seed;
    c.kernel_m = kernel_m;
    return c;
}

struct Sweep {
    ExperimentConfig config;
    std::vector<EstimationRecord> records;
    ScalingFit fit;
};

Sweep run(std::ostream& out, const char* label, const ExperimentConfig& config) {
    out << "  running sweep: " << label << " ..." << std::flush;
    Sweep s;
    s.config = config;
    s.records = run_sweep(config);
    s.fit = fit_scaling(s.records);
    out << " exponent " << fmt(s.fit.exponent) << " (SE " << fmt(s.fit.std_error)
        << ")\n";
    return s;
}

CriterionResult slope_criterion(int id, const std::string& name, const Sweep& s,
                                double target, double tol) {
    CriterionResult r{id, name, std::abs(s.fit.exponent - target) <= tol, ""};
    r.detail = "exponent " + fmt(s.fit.exponent) + " vs " + fmt(target) + " +/- " +
               fmt(tol);
    return r;
}

void report(std::ostream& out, const CriterionResult& r) {
    out << "criterion " << r.id << " (" << r.name << "): "
        << (r.pass ? "PASS" : "FAIL") << " -- " << r.detail << '\n';
}

// --- criterion 5: kernel suite ---

CriterionResult kernel_suite() {
    CriterionResult r{5, "kernel suite", true, "ok"};

    // moment identities at 1024 offsets for m <= 4
    for (int m = 0; m <= 4 && r.pass; ++m) {
        const auto kernel = SmoothingKernel::build(m);
        const long long n1 = 16;
        for (int i = 0; i < 1024; ++i) {
            const double x = (i + 0.5) / 1024.0;
            const double alpha = std::fmod(0.61803398875 * (i + 1), 1.0);
            for (double res : kernel_sum_rule_check(kernel, n1, x, alpha, 1.0)) {
                if (std::abs(res) >= 1e-10) {
                    r.pass = false;
                    r.detail = "moment residual " + fmt(res) + " at m=" + fmt(m);
                    break;
                }
            }
            if (!r.pass) break;
        }
    }

    // m = 1 kernel is the triangular kernel
    if (r.pass) {
        const auto kernel = SmoothingKernel::build(1);
        for (int i = 0; i < 2048; ++i) {
            const double y = -1.0 + 2.0 * i / 2048.0;
            const double tri = std::max(0.0, 1.0 - std::abs(y));
            if (std::abs(kernel.eval(y) - tri) >= 1e-12) {
                r.pass = false;
                r.detail = "m=1 kernel differs from triangular at y=" + fmt(y);
                break;
            }
        }
    }

    // polynomial reproduction up to degree m (site sum on the real line)
    auto rng = make_rng({0x6b65726e5f726570ULL});
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int m = 0; m <= 4 && r.pass; ++m) {
        const auto kernel = SmoothingKernel::build(m);
        const long long n1 = 64;
        const double l = kernel.scale(1.0, n1);
        const double alpha = coeff(rng) * 0.5 + 0.5;
        std::vector<double> c(m + 1);
        for (auto& v : c) v = coeff(rng);
        auto poly = [&](double x) {
            double p = 0.0;
            for (int d = m; d >= 0; --d) p = p * x + c[d];
            return p;
        };
        for (int i = 0; i < 256 && r.pass; ++i) {
            const double x = 0.3 + 0.4 * i / 256.0;
            const long long j0 = static_cast<long long>(std::floor((x - l) * n1 - alpha)) - 1;
            const long long j1 = static_cast<long long>(std::ceil((x + l) * n1 - alpha)) + 1;
            double est = 0.0;
            for (long long j = j0; j <= j1; ++j) {
                const double xj = (j + alpha) / static_cast<double>(n1);
                est += poly(xj) * kernel.eval((x - xj) / l);
            }
            if (std::abs(est - poly(x)) >= 1e-8) {
                r.pass = false;
                r.detail = "degree-" + fmt(m) + " reproduction off by " +
                           fmt(est - poly(x));
            }
        }
    }
    return r;
}

// --- criterion 6: deterministic-error bound ---

double c_m_constant(int m) {
    if (m == 0) return 1.0;
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    return 2.0 * m * (m + 1.0) * (m + 1.0) /
           (2.0 * fact * fact * (4.0 * m * m - 1.0));
}

CriterionResult det_error_bound() {
    CriterionResult r{6, "deterministic-error bound", true, "ok"};
    const struct {
        double q;
        int m;
    } cases[] = {{1.0, 0}, {2.0, 1}, {0.5, 0}};
    auto rng = make_rng({0x6465745f626f756eULL});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& cse : cases) {
        const SmoothnessClass cls(cse.q, 1.0);
        const auto kernel = SmoothingKernel::build(cse.m);
        const long long n1 = 64;
        const double bound = c_m_constant(cse.m) *
                             std::pow((cse.m + 1) / 2.0, 2.0 * cse.q) *
                             std::pow(double(n1), -2.0 * cse.q);
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const auto target =
                sample_target(cls, 4096, std::nullopt,
                              derive_seed({0xdeb0u, std::uint64_t(cse.m * 100 + t),
                                           std::uint64_t(cse.q * 16)}),
                              0.95);
            const auto star = smoothed_target(target.f, kernel, n1, unit(rng));
            worst = std::max(worst, mspe(star, target.f) / bound);
        }
        if (worst > 1.0 + 1e-9) {
            r.pass = false;
            r.detail = "delta_det^2 exceeds bound by factor " + fmt(worst) +
                       " at q=" + fmt(cse.q);
            return r;
        }
        r.detail = r.pass ? "worst ratio " + fmt(worst) + " at q=" + fmt(cse.q) : r.detail;
    }
    return r;
}

// --- criterion 7: infidelity chain ---

CriterionResult infidelity_chain() {
    CriterionResult r{7, "infidelity chain", true, "ok"};
    const int G = 512;
    const int k_full = G / 2 - 1;
    const SmoothnessClass cls(1.0, 1.0);
    auto rng = make_rng({0x696e6669646cULL});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_np(0, 3);
    std::uniform_int_distribution<int> pick_k(4, 32);
    double worst1 = 1.0, worst2 = 1.0;

    for (int t = 0; t < 1000; ++t) {
        const long long n_p = 1LL << pick_np(rng);
        const int K = pick_k(rng);
        // band-limited target and perturbation, so that the k_full cutoff is
        // exact to machine precision
        const auto base = sample_target(cls, G, std::nullopt,
                                        derive_seed({0xf1de, std::uint64_t(t)}), 0.9,
                                        16);
        auto pert = sample_target(cls, G, std::nullopt,
                                  derive_seed({0xf2de, std::uint64_t(t)}), 0.9, 16);
        double amp = 0.0;
        for (double v : pert.f.values) amp = std::max(amp, std::abs(v));
        // first inequality needs |phit - phi| <= pi / n_p pointwise
        const double scale = amp > 0 ? unit(rng) * (kPi / double(n_p)) * 0.999 / amp : 0.0;
        GridFunction phit = base.f;
        for (int j = 0; j < G; ++j) phit.values[j] += scale * pert.f.values[j];

        const auto a = output_state(base.f, n_p, k_full);
        const auto b = output_state(phit, n_p, k_full);
        const auto c = project_low_wavenumber(a, K).state;

        const double oab = std::abs(state_overlap(a, b));
        const double oac2 = std::norm(state_overlap(a, c));
        const double ocb2 = std::norm(state_overlap(c, b));
        const double d2 = mspe(phit, base.f);

        const double slack1 = kPi * kPi / double(n_p * n_p) * (1.0 - oab) - d2;
        const double slack2 = (1.0 - oac2) + (1.0 - ocb2) - (1.0 - oab);
        worst1 = std::min(worst1, slack1);
        worst2 = std::min(worst2, slack2);
    }
    r.pass = worst1 >= -1e-10 && worst2 >= -1e-10;
    r.detail = "min slack: first " + fmt(worst1) + ", second " + fmt(worst2);
    return r;
}

// --- criterion 8: QFI checks ---

CriterionResult qfi_checks() {
    CriterionResult r{8, "QFI checks", true, "ok"};
    const int K = 8, G = 128;
    const SmoothnessClass cls(1.0, 1.0);

    const auto zero = make_phase_vector(std::vector<double>(K, 0.0), cls);
    const auto J0 = qfi_matrix(zero, G);
    for (int j = 0; j < K && r.pass; ++j)
        for (int k = 0; k < K; ++k) {
            const double want = j == k ? 2.0 : 0.0;
            if (std::abs(J0[j][k] - want) > 1e-6) {
                r.pass = false;
                r.detail = "J(0) entry off: " + fmt(J0[j][k]) + " vs " + fmt(want);
                break;
            }
        }

    auto rng = make_rng({0x7166695f75ULL});
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 100 && r.pass; ++t) {
        std::vector<double> u(K);
        double norm = 0.0;
        for (auto& v : u) {
            v = gauss(rng);
            norm += v * v;
        }
        auto p = make_phase_vector(u, cls);
        const double s = unit(rng) * p.rho / std::sqrt(norm);
        for (auto& v : p.u) v *= s;
        const auto J = qfi_matrix(p, G);
        for (int j = 0; j < K; ++j)
            if (J[j][j] > 8.0 + 1e-12) {
                r.pass = false;
                r.detail = "J_jj = " + fmt(J[j][j]) + " exceeds 8";
            }
        if (t == 0 && r.pass) {  // analytic vs finite differences
            const auto Jfd = qfi_matrix_fd(p, G);
            for (int j = 0; j < K; ++j)
                for (int k = 0; k < K; ++k)
                    if (std::abs(J[j][k] - Jfd[j][k]) > 1e-5) {
                        r.pass = false;
                        r.detail = "FD mismatch " + fmt(J[j][k] - Jfd[j][k]);
                    }
        }
    }
    return r;
}

// --- criterion 10: sufficiency property ---

CriterionResult sufficiency() {
    CriterionResult r{10, "Fourier sufficiency", true, "ok"};
    const double c0_err = std::abs(c0_constant(1.0) - 2.0 * kPi);
    if (c0_err > 1e-9) {
        r.pass = false;
        r.detail = "c0(1) off by " + fmt(c0_err);
        return r;
    }
    const double qs[] = {0.5, 1.0, 1.5, 2.0};
    auto rng = make_rng({0x73756666ULL});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const SmoothnessClass cls(qs[t % 4], 0.2 + 3.0 * unit(rng));
        const auto sample = sample_target(cls, 2048, std::nullopt,
                                          derive_seed({0x5ff, std::uint64_t(t)}), 0.95);
        const auto fc = fourier_constraint(sample.spectrum, cls);
        if (!fc.satisfied) {
            r.pass = false;
            r.detail = "generator violated the Fourier condition at t=" + fmt(t);
            return r;
        }
        const double sem = holder_seminorm(sample.f, cls);
        if (sem > cls.seminorm_budget() * (1.0 + 1e-9)) {
            r.pass = false;
            r.detail = "seminorm " + fmt(sem) + " > budget " +
                       fmt(cls.seminorm_budget()) + " at t=" + fmt(t);
            return r;
        }
    }
    r.detail = "200 spectra, c0(1) error " + fmt(c0_err);
    return r;
}

}  // namespace

bool run_all(std::ostream& out) {
    std::vector<CriterionResult> results;
    out << "acceptance suite\n";

    const auto ps_sql_q1 = run(out, "PS SQL q=1",
                               sweep_config(Method::PS, Regime::SQL, 1.0, 2.0 * kPi,
                                            10, 20, 200, 0x0a11ce01ULL));
    const auto ps_hl_q1 = run(out, "PS Heisenberg q=1",
                              sweep_config(Method::PS, Regime::Heisenberg, 1.0, 1.0,
                                           10, 18, 100, 0x0a11ce02ULL));
    const auto ps_sql_qh = run(out, "PS SQL q=1/2",
                               sweep_config(Method::PS, Regime::SQL, 0.5, 1.0, 10,
                                            20, 100, 0x0a11ce03ULL));
    const auto ps_sql_q2 = run(out, "PS SQL q=2 (m=2 kernel)",
                               sweep_config(Method::PS, Regime::SQL, 2.0, 2.0 * kPi,
                                            10, 20, 100, 0x0a11ce04ULL, 2));
    const auto ws_sql_q1 = run(out, "WS SQL q=1",
                               sweep_config(Method::WS, Regime::SQL, 1.0, 2.0 * kPi,
                                            10, 16, 100, 0x0a11ce05ULL));

    results.push_back(slope_criterion(1, "PS-SQL scaling", ps_sql_q1, -1.0 / 3.0, 0.05));

    {
        auto r = slope_criterion(2, "PS-Heisenberg scaling", ps_hl_q1, -0.5, 0.07);
        const long long cap_factor = 2 * 1 * 4 * 3;  // 2 c4 c5 c6
        for (const auto& rec : ps_hl_q1.records)
            if (rec.particles_used > cap_factor * rec.N) {
                r.pass = false;
                r.detail += "; particle budget exceeded at N=" + fmt(double(rec.N));
                break;
            }
        results.push_back(r);
    }

    {
        auto ra = slope_criterion(3, "fractional smoothness", ps_sql_qh, -0.25, 0.05);
        const auto rb = slope_criterion(3, "", ps_sql_q2, -0.4, 0.05);
        bool ws_refused = false;
        try {
            GridFunction flat{std::vector<double>(256, 0.0), 1.0};
            ProbeBudget budget;
            budget.N = 512;
            budget.n_p = 1;
            budget.n_c = 512;
            budget.K = 5;
            ws_estimate(flat, budget, SmoothnessClass(2.0, 1.0), KitaevConstants{}, 1);
        } catch (const std::exception&) {
            ws_refused = true;
        }
        ra.pass = ra.pass && rb.pass && ws_refused;
        ra.detail = "q=1/2: " + ra.detail + "; q=2: " + rb.detail +
                    "; WS q=2 refused: " + (ws_refused ? "yes" : "no");
        results.push_back(ra);
    }

    {
        CriterionResult r{4, "WS/PS equivalence", true, ""};
        const double diff = std::abs(ws_sql_q1.fit.exponent - ps_sql_q1.fit.exponent);
        r.pass = diff <= 0.05;
        r.detail = "PS " + fmt(ps_sql_q1.fit.exponent) + " vs WS " +
                   fmt(ws_sql_q1.fit.exponent) + " (diff " + fmt(diff) + ")";
        results.push_back(r);
    }

    results.push_back(kernel_suite());
    results.push_back(det_error_bound());
    results.push_back(infidelity_chain());
    results.push_back(qfi_checks());

    {
        CriterionResult r{9, "bound consistency", true, "ok"};
        const struct {
            const Sweep* s;
            Regime regime;
        } sweeps[] = {{&ps_sql_q1, Regime::SQL},
                      {&ps_hl_q1, Regime::Heisenberg},
                      {&ps_sql_qh, Regime::SQL},
                      {&ps_sql_q2, Regime::SQL},
                      {&ws_sql_q1, Regime::SQL}};
        for (const auto& sw : sweeps) {
            const auto check = check_bounds(sw.s->records, sw.s->config.q,
                                            sw.s->config.M, sw.regime);
            if (!check.pass) {
                r.pass = false;
                r.detail = "mean delta under the floor for q=" + fmt(sw.s->config.q);
            }
        }
        if (std::abs(wbb(1.0, 1.0) - 0.5) > 1e-12 ||
            std::abs(wbb(0.05, 0.1) - 1.0 / 30.0) > 1e-12) {
            r.pass = false;
            r.detail += "; wbb examples off";
        }
        results.push_back(r);
    }

    results.push_back(sufficiency());

    std::sort(results.begin(), results.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
    bool all = true;
    for (const auto& r : results) {
        report(out, r);
        all = all && r.pass;
    }
    out << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << '\n';
    return all;
}

}  // namespace qfn::accept

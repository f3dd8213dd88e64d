#include "qfn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qfn/kernel.hpp"
#include "qfn/ps_estimator.hpp"
#include "qfn/random.hpp"
#include "qfn/sampling.hpp"
#include "qfn/ws_estimator.hpp"

namespace qfn {

namespace {

constexpr std::uint64_t kTargetTag = 0x7461726765745f30ULL;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};

SlopeFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

// Usable (non-error-flagged) per-record delta values grouped by N, plus the
// set of N dropped for exceeding the 5% flag quota.
struct Grouped {
    std::map<long long, std::vector<double>> deltas;
    std::vector<long long> dropped;
    long long excluded = 0;
};

Grouped group_records(const std::vector<EstimationRecord>& records) {
    std::map<long long, std::vector<double>> all;
    std::map<long long, long long> bad;
    for (const auto& r : records) {
        auto& v = all[r.N];
        bad.try_emplace(r.N, 0);
        if (r.flags & kErrorFlags) {
            ++bad[r.N];
            continue;
        }
        v.push_back(std::sqrt(std::max(0.0, r.mspe)));
    }
    Grouped g;
    for (auto& [N, v] : all) {
        const long long total = static_cast<long long>(v.size()) + bad[N];
        g.excluded += bad[N];
        if (v.empty() || bad[N] * 20 > total) {  // > 5% flagged
            g.dropped.push_back(N);
            continue;
        }
        g.deltas.emplace(N, std::move(v));
    }
    return g;
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
    if (config.q <= 0.0) throw std::invalid_argument("config: q must be positive");
    if (config.M < 0.0) throw std::invalid_argument("config: M must be nonnegative");
    if (config.G < 16) throw std::invalid_argument("config: grid too small");
    if (config.N_list.empty()) throw std::invalid_argument("config: empty N_list");
    for (std::size_t i = 0; i < config.N_list.size(); ++i) {
        if (config.N_list[i] < 1)
            throw std::invalid_argument("config: N must be positive");
        if (i > 0 && config.N_list[i] <= config.N_list[i - 1])
            throw std::invalid_argument("config: N_list must be strictly increasing");
    }
    if (config.trials < 1) throw std::invalid_argument("config: trials must be positive");
    if (config.N_list.size() >= 4 && config.trials < 30)
        throw std::invalid_argument("config: fits need trials >= 30");
    if (config.method == Method::WS && config.q > 1.0)
        throw std::invalid_argument("config: WS supports q <= 1 only");
    if (config.constraint_fraction <= 0.0 || config.constraint_fraction > 1.0)
        throw std::invalid_argument("config: constraint_fraction in (0, 1]");
}

EstimationRecord run_trial(const ExperimentConfig& config, long long N, long long trial) {
    const std::uint64_t child =
        derive_seed({config.seed, static_cast<std::uint64_t>(N),
                     static_cast<std::uint64_t>(trial)});
    const SmoothnessClass cls(config.q, config.M, config.L);

    std::optional<double> cap = config.amplitude_cap;
    if (!cap && config.method == Method::PS && config.regime == Regime::SQL)
        cap = std::numbers::pi / 3.0;

    EstimationRecord rec;
    rec.method = method_name(config.method);
    rec.regime = regime_name(config.regime);
    rec.q = config.q;
    rec.M = config.M;
    rec.N = N;
    rec.trial = trial;
    rec.seed = child;

    try {
        const auto target = sample_target(cls, config.G, cap,
                                          derive_seed({child, kTargetTag}),
                                          config.constraint_fraction);
        const auto plan = resource_optima(config.q, config.M, N, config.regime);

        ProbeBudget budget;
        if (config.method == Method::PS) {
            long long n1 = std::clamp<long long>(plan.n1, 1, config.G / 4);
            n1 = std::min(n1, std::max<long long>(1, N / 2));
            const long long n2 = std::max<long long>(2, N / n1);
            budget.n1 = n1;
            budget.n2 = n2;
            budget.N = n1 * n2;
            const int m = config.kernel_m >= 0 ? config.kernel_m : cls.m;
            const auto kernel = SmoothingKernel::build(m);
            auto out = ps_estimate(target.f, budget, cls, config.regime, kernel,
                                   config.constants, child);
            rec.mspe = out.mspe;
            rec.err_a_sq = out.err_a_sq;
            rec.err_b_sq = out.err_b_sq;
            rec.particles_used = out.particles_used;
            rec.flags |= out.flags;
        } else {
            if (config.regime == Regime::SQL) {
                budget.n_p = 1;
                budget.n_c = N;
                budget.K = std::clamp<long long>(plan.n1, 1, config.G / 4);
                budget.K = std::min<long long>(budget.K,
                                               std::max<long long>(1, (N / 8 - 1) / 2));
            } else {
                long long np = 1;
                while (2 * np <= plan.n_p) np *= 2;  // ws cascade wants a power of 2
                budget.n_p = np;
                budget.n_c = std::max<long long>(1, N / np);
            }
            budget.N = budget.n_p * budget.n_c;
            auto out = ws_estimate(target.f, budget, cls, config.constants, child);
            rec.mspe = out.mspe;
            rec.err_a_sq = out.err_a_sq;
            rec.err_b_sq = out.err_b_sq;
            rec.particles_used = out.particles_used;
            rec.flags |= out.flags;
        }
        if (target.cap_limited) rec.flags |= kFlagCapLimited;
    } catch (const std::exception&) {
        rec.flags |= kFlagPrecondition;
    }
    return rec;
}

namespace {

std::vector<EstimationRecord> sweep_impl(const ExperimentConfig& config, bool parallel) {
    validate_config(config);
    struct Task {
        long long N;
        long long trial;
    };
    std::vector<Task> tasks;
    tasks.reserve(config.N_list.size() * config.trials);
    for (long long N : config.N_list)
        for (int t = 0; t < config.trials; ++t) tasks.push_back({N, t});

    std::vector<EstimationRecord> records(tasks.size());
    const long long n_tasks = static_cast<long long>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long long i = 0; i < n_tasks; ++i)
        records[i] = run_trial(config, tasks[i].N, tasks[i].trial);

    if (!config.records_path.empty()) write_records_csv(config.records_path, records);
    if (!config.fits_path.empty()) {
        try {
            const auto fit = fit_scaling(records);
            std::ofstream out(config.fits_path);
            out << fit_to_json_text(fit) << '\n';
        } catch (const std::exception&) {
            // too few N values for a fit; skip the artifact
        }
    }
    if (!config.svg_path.empty()) write_scatter_svg(config.svg_path, records);
    return records;
}

}  // namespace

std::vector<EstimationRecord> run_sweep(const ExperimentConfig& config) {
    return sweep_impl(config, true);
}

std::vector<EstimationRecord> run_sweep_serial(const ExperimentConfig& config) {
    return sweep_impl(config, false);
}

ScalingFit fit_scaling(const std::vector<EstimationRecord>& records) {
    const Grouped g = group_records(records);
    if (g.deltas.size() < 4)
        throw std::invalid_argument("fit_scaling: need >= 4 distinct usable N values");

    ScalingFit fit;
    fit.excluded_records = g.excluded;
    fit.dropped_n = g.dropped;

    std::vector<double> lx, ly;
    for (const auto& [N, v] : g.deltas) {
        const double m = mean_of(v);
        fit.window.push_back(N);
        fit.mean_delta.push_back(m);
        fit.ci_half_width.push_back(1.96 * sd_of(v, m) / std::sqrt(double(v.size())));
        lx.push_back(std::log(static_cast<double>(N)));
        ly.push_back(std::log(m));
    }
    const auto ls = least_squares(lx, ly);
    fit.exponent = ls.slope;
    fit.intercept = ls.intercept;
    fit.exponent_sq = 2.0 * ls.slope;

    // Bootstrap SE: resample each N's trials with replacement, refit.
    auto rng = make_rng({0xb007577a9ULL});
    std::vector<double> slopes;
    slopes.reserve(200);
    std::vector<double> by(lx.size());
    for (int b = 0; b < 200; ++b) {
        std::size_t gi = 0;
        for (const auto& [N, v] : g.deltas) {
            std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) s += v[pick(rng)];
            by[gi++] = std::log(s / static_cast<double>(v.size()));
        }
        slopes.push_back(least_squares(lx, by).slope);
    }
    const double ms = mean_of(slopes);
    fit.std_error = sd_of(slopes, ms);
    return fit;
}

BoundCheck check_bounds(const std::vector<EstimationRecord>& records, double q,
                        double M, Regime regime) {
    const Grouped g = group_records(records);
    BoundCheck out;
    for (const auto& [N, v] : g.deltas) {
        BoundCheckRow row;
        row.N = N;
        row.mean_delta = mean_of(v);
        row.sigma_mean = sd_of(v, row.mean_delta) / std::sqrt(double(v.size()));
        row.floor = regime == Regime::SQL ? sql_lower(q, M, N).floor_value
                                          : heisenberg_lower(q, M, N).bound;
        row.pass = row.mean_delta >= row.floor - 3.0 * row.sigma_mean;
        out.pass = out.pass && row.pass;
        out.rows.push_back(row);
    }
    return out;
}

// --- serialization ---

std::string records_to_csv(const std::vector<EstimationRecord>& records) {
    std::ostringstream out;
    out << "method,regime,q,M,N,trial,seed,mspe,err_a_sq,err_b_sq,particles_used,flags\n";
    for (const auto& r : records) {
        out << r.method << ',' << r.regime << ',' << fmt_double(r.q) << ','
            << fmt_double(r.M) << ',' << r.N << ',' << r.trial << ',' << r.seed << ','
            << fmt_double(r.mspe) << ',' << fmt_double(r.err_a_sq) << ','
            << fmt_double(r.err_b_sq) << ',' << r.particles_used << ',' << r.flags
            << '\n';
    }
    return out.str();
}

std::vector<EstimationRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("records_from_csv: empty input");
    std::vector<EstimationRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 12)
            throw std::invalid_argument("records_from_csv: malformed row: " + line);
        EstimationRecord r;
        r.method = fields[0];
        r.regime = fields[1];
        r.q = std::stod(fields[2]);
        r.M = std::stod(fields[3]);
        r.N = std::stoll(fields[4]);
        r.trial = std::stoll(fields[5]);
        r.seed = std::stoull(fields[6]);
        r.mspe = std::stod(fields[7]);
        r.err_a_sq = std::stod(fields[8]);
        r.err_b_sq = std::stod(fields[9]);
        r.particles_used = std::stoll(fields[10]);
        r.flags = std::stoi(fields[11]);
        records.push_back(std::move(r));
    }
    return records;
}

void write_records_csv(const std::string& path, const std::vector<EstimationRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << records_to_csv(records);
}

std::vector<EstimationRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return records_from_csv(buf.str());
}

std::string fit_to_json_text(const ScalingFit& fit) {
    nlohmann::json j;
    j["exponent"] = fit.exponent;
    j["intercept"] = fit.intercept;
    j["std_error"] = fit.std_error;
    j["exponent_sq"] = fit.exponent_sq;
    j["window"] = fit.window;
    j["mean_delta"] = fit.mean_delta;
    j["ci_half_width"] = fit.ci_half_width;
    j["excluded_records"] = fit.excluded_records;
    j["dropped_n"] = fit.dropped_n;
    return j.dump(2);
}

std::string bound_report_to_json_text(const BoundReport& r) {
    nlohmann::json j;
    j["q"] = r.q;
    j["M"] = r.M;
    j["N"] = r.N;
    j["delta_uub"] = r.delta_uub;
    j["delta_wbb"] = r.delta_wbb;
    j["sql_lower"] = r.sql_lower;
    j["hl_lower"] = r.hl_lower;
    j["optimal_K"] = r.optimal_K;
    j["max_np"] = r.max_np;
    j["c0"] = r.c0;
    j["c1_floor"] = r.c1_floor;
    j["c2_floor"] = r.c2_floor;
    return j.dump(2);
}

std::string grid_to_csv(const GridFunction& f) {
    std::ostringstream out;
    out << "x,value\n";
    for (int j = 0; j < f.size(); ++j)
        out << fmt_double(f.x(j)) << ',' << fmt_double(f.values[j]) << '\n';
    return out.str();
}

std::string spectrum_to_json_text(const FourierSpectrum& s) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int k = -s.k_max; k <= s.k_max; ++k) {
        const auto c = s.at(k);
        coeffs.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
    }
    nlohmann::json j;
    j["k_max"] = s.k_max;
    j["length"] = s.length;
    j["coeffs"] = coeffs;
    return j.dump(2);
}

std::string scatter_svg(const std::vector<EstimationRecord>& records) {
    const int W = 640, H = 440, ML = 60, MR = 20, MT = 20, MB = 50;
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records) {
        if (r.flags & kErrorFlags) continue;
        if (r.mspe <= 0.0 || r.N < 1) continue;
        pts.emplace_back(std::log10(double(r.N)), 0.5 * std::log10(r.mspe));
    }
    double x0 = 0, x1 = 1, y0 = -1, y1 = 0;
    if (!pts.empty()) {
        x0 = x1 = pts[0].first;
        y0 = y1 = pts[0].second;
        for (const auto& [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        if (x1 - x0 < 1e-12) x1 = x0 + 1;
        if (y1 - y0 < 1e-12) y1 = y0 + 1;
    }
    auto px = [&](double x) { return ML + (x - x0) / (x1 - x0) * (W - ML - MR); };
    auto py = [&](double y) { return H - MB - (y - y0) / (y1 - y0) * (H - MT - MB); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR
        << "\" y2=\"" << H - MB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">log10 N</text>\n";
    out << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (MT + H - MB) / 2 << ")\">log10 delta</text>\n";
    char buf[64];
    for (int i = 0; i <= 4; ++i) {
        const double x = x0 + (x1 - x0) * i / 4.0;
        const double y = y0 + (y1 - y0) * i / 4.0;
        std::snprintf(buf, sizeof(buf), "%.2f", x);
        out << "<text x=\"" << px(x) << "\" y=\"" << H - MB + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof(buf), "%.2f", y);
        out << "<text x=\"" << ML - 6 << "\" y=\"" << py(y) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
    }
    for (const auto& [x, y] : pts) {
        std::snprintf(buf, sizeof(buf), "%.2f", px(x));
        out << "<circle cx=\"" << buf << "\" cy=\"";
        std::snprintf(buf, sizeof(buf), "%.2f", py(y));
        out << buf << "\" r=\"2\" fill=\"steelblue\" fill-opacity=\"0.5\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_scatter_svg(const std::string& path, const std::vector<EstimationRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << scatter_svg(records);
}

// --- config (de)serialization ---

ExperimentConfig config_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentConfig c;
    if (j.contains("method")) {
        const std::string m = j["method"];
        if (m == "PS") c.method = Method::PS;
        else if (m == "WS") c.method = Method::WS;
        else throw std::invalid_argument("config: unknown method " + m);
    }
    if (j.contains("regime")) {
        const std::string r = j["regime"];
        if (r == "SQL") c.regime = Regime::SQL;
        else if (r == "Heisenberg") c.regime = Regime::Heisenberg;
        else throw std::invalid_argument("config: unknown regime " + r);
    }
    c.q = j.value("q", c.q);
    c.M = j.value("M", c.M);
    c.L = j.value("L", c.L);
    c.G = j.value("G", c.G);
    if (j.contains("N_list")) c.N_list = j["N_list"].get<std::vector<long long>>();
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.constants.c4 = j.value("c4", c.constants.c4);
    c.constants.c5 = j.value("c5", c.constants.c5);
    c.constants.c6 = j.value("c6", c.constants.c6);
    c.kernel_m = j.value("kernel_m", c.kernel_m);
    c.constraint_fraction = j.value("constraint_fraction", c.constraint_fraction);
    if (j.contains("amplitude_cap") && !j["amplitude_cap"].is_null())
        c.amplitude_cap = j["amplitude_cap"].get<double>();
    c.records_path = j.value("records_path", c.records_path);
    c.fits_path = j.value("fits_path", c.fits_path);
    c.svg_path = j.value("svg_path", c.svg_path);
    return c;
}

std::string config_to_json_text(const ExperimentConfig& c) {
    nlohmann::json j;
    j["method"] = method_name(c.method);
    j["regime"] = regime_name(c.regime);
    j["q"] = c.q;
    j["M"] = c.M;
    j["L"] = c.L;
    j["G"] = c.G;
    j["N_list"] = c.N_list;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["c4"] = c.constants.c4;
    j["c5"] = c.constants.c5;
    j["c6"] = c.constants.c6;
    j["kernel_m"] = c.kernel_m;
    j["constraint_fraction"] = c.constraint_fraction;
    if (c.amplitude_cap) j["amplitude_cap"] = *c.amplitude_cap;
    else j["amplitude_cap"] = nullptr;
    j["records_path"] = c.records_path;
    j["fits_path"] = c.fits_path;
    j["svg_path"] = c.svg_path;
    return j.dump(2);
}

}  // namespace qfn

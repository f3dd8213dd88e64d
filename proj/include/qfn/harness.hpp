#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfn/bounds.hpp"
#include "qfn/grid_function.hpp"
#include "qfn/probe.hpp"
#include "qfn/record.hpp"
#include "qfn/smoothness.hpp"

namespace qfn {

enum class Method { PS, WS };

inline const char* method_name(Method m) { return m == Method::PS ? "PS" : "WS"; }

struct ExperimentConfig {
    Method method = Method::PS;
    Regime regime = Regime::SQL;
    double q = 1.0;
    double M = 1.0;
    double L = 1.0;
    int G = 4096;
    std::vector<long long> N_list;
    int trials = 200;
    std::uint64_t seed = 0;
    KitaevConstants constants;
    int kernel_m = -1;  // -1: use ceil(q) - 1
    double constraint_fraction = 0.9;
    std::optional<double> amplitude_cap;  // defaults to pi/3 for PS-SQL
    std::string records_path;
    std::string fits_path;
    std::string svg_path;
};

/// Throws std::invalid_argument on violated invariants (N_list strictly
/// increasing, trials >= 30, WS requires q <= 1, ...).
void validate_config(const ExperimentConfig& config);

ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

/// Monte Carlo sweep over (N, trial); each trial draws a fresh target and
/// runs the configured estimator at the resource_optima split.  Child seeds
/// derive from (master, N, trial), so results are deterministic and identical
/// between the parallel and serial drivers.
std::vector<EstimationRecord> run_sweep(const ExperimentConfig& config);
std::vector<EstimationRecord> run_sweep_serial(const ExperimentConfig& config);

/// One trial, exposed for the CLI `estimate` subcommand.
EstimationRecord run_trial(const ExperimentConfig& config, long long N, long long trial);

// Flags that mark a record as unusable for fits; kFlagCapLimited is benign
// (the target is merely weaker than class-typical) and stays included.
inline constexpr int kErrorFlags = kFlagAmplitude | kFlagDegraded | kFlagPrecondition;

struct ScalingFit {
    double exponent = 0.0;   // slope of ln(mean delta) vs ln N
    double intercept = 0.0;  // ln-scale intercept
    double std_error = 0.0;  // bootstrap SE of the exponent (200 resamples)
    double exponent_sq = 0.0;  // for delta^2: exactly 2 * exponent
    std::vector<long long> window;      // N values used
    std::vector<double> mean_delta;     // per window entry
    std::vector<double> ci_half_width;  // 1.96 * SE of mean delta
    long long excluded_records = 0;
    std::vector<long long> dropped_n;   // N dropped for >5% flagged trials
};

/// Least squares on (log N, log mean delta), error-flagged records excluded.
/// Requires >= 4 distinct N in the window after exclusions.
ScalingFit fit_scaling(const std::vector<EstimationRecord>& records);

struct BoundCheckRow {
    long long N = 0;
    double mean_delta = 0.0;
    double sigma_mean = 0.0;
    double floor = 0.0;
    bool pass = true;
};

struct BoundCheck {
    std::vector<BoundCheckRow> rows;
    bool pass = true;
};

/// mean delta >= closed-form lower-bound floor, with 3-sigma allowance on the
/// mean, for every N present in the records.
BoundCheck check_bounds(const std::vector<EstimationRecord>& records, double q,
                        double M, Regime regime);

// --- serialization ---

std::string records_to_csv(const std::vector<EstimationRecord>& records);
std::vector<EstimationRecord> records_from_csv(const std::string& text);
void write_records_csv(const std::string& path, const std::vector<EstimationRecord>& records);
std::vector<EstimationRecord> read_records_csv(const std::string& path);

std::string fit_to_json_text(const ScalingFit& fit);
std::string bound_report_to_json_text(const BoundReport& report);
std::string grid_to_csv(const GridFunction& f);
std::string spectrum_to_json_text(const FourierSpectrum& s);

/// Static log10-log10 scatter of (N, delta) points, one circle per record.
std::string scatter_svg(const std::vector<EstimationRecord>& records);
void write_scatter_svg(const std::string& path, const std::vector<EstimationRecord>& records);

}  // namespace qfn

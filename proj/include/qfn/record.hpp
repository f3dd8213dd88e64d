#pragma once

#include <cstdint>
#include <string>

namespace qfn {

enum class Regime { SQL, Heisenberg };

inline const char* regime_name(Regime r) { return r == Regime::SQL ? "SQL" : "Heisenberg"; }

/// Resource accounting.  PS tags N = n1*n2, WS tags N = n_p*n_c.
struct ProbeBudget {
    long long N = 0;
    long long n1 = 1;
    long long n2 = 1;
    long long n_p = 1;
    long long n_c = 1;
    long long K = 0;
};

// Record flags
inline constexpr int kFlagCapLimited = 1;       // generator hit the amplitude cap
inline constexpr int kFlagAmplitude = 2;        // SQL small-phase precondition violated
inline constexpr int kFlagDegraded = 4;         // Kitaev cascade died at level 0
inline constexpr int kFlagPrecondition = 8;     // estimator refused the configuration

/// One trial's outcome.  err_a_sq/err_b_sq hold the error decomposition:
/// (delta_stat^2, delta_det^2) for PS, (delta_PS^2, delta_QT^2) for WS.
struct EstimationRecord {
    std::string method;   // "PS" or "WS"
    std::string regime;   // "SQL" or "Heisenberg"
    double q = 0.0;
    double M = 0.0;
    long long N = 0;
    long long trial = 0;
    std::uint64_t seed = 0;
    double mspe = 0.0;
    double err_a_sq = 0.0;
    double err_b_sq = 0.0;
    long long particles_used = 0;
    int flags = 0;
};

}  // namespace qfn

#pragma once

#include <cstdint>

#include "qfn/grid_function.hpp"
#include "qfn/kernel.hpp"
#include "qfn/probe.hpp"
#include "qfn/record.hpp"
#include "qfn/smoothness.hpp"

namespace qfn {

/// Position-state estimation: sample n1 equispaced sites at a random offset,
/// estimate each site phase (Ramsey for SQL, Kitaev cascade for Heisenberg),
/// reconstruct by kernel smoothing.  err_a_sq = delta_stat^2 (against the
/// smoothed target), err_b_sq = delta_det^2.
EstimationRecord ps_estimate(const GridFunction& target, const ProbeBudget& budget,
                             const SmoothnessClass& cls, Regime regime,
                             const SmoothingKernel& kernel,
                             const KitaevConstants& constants, std::uint64_t seed);

}  // namespace qfn

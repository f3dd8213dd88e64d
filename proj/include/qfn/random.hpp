#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qfn {

using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Splittable counter scheme: any (master, N, trial, site, level, ...) tuple
/// maps to an independent stream, so subsets of work reproduce independently
/// of scheduling.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto t : tags) h = detail::splitmix64(h ^ t);
    return h;
}

inline Rng make_rng(std::initializer_list<std::uint64_t> tags) {
    return Rng(derive_seed(tags));
}

}  // namespace qfn

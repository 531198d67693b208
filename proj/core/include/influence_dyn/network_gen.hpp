#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "influence_dyn/netcore.hpp"

namespace influence_dyn {

/// Portable random source used for every seeded construction in the library.
///
/// Engine: std::mt19937_64 (MT19937-64, fully specified by the C++ standard)
/// seeded with the 64-bit seed. Standard-library distributions are not used
/// because their output is implementation-defined; instead:
///   uniform01()        = (r >> 11) * 2^-53                  in [0, 1)
///   uniform_open01()   = ((r >> 11) + 1) * 2^-53            in (0, 1]
///   below(k)           = rejection sampling: draw r until r < 2^64 - (2^64 mod k), return r mod k
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform01();
    double uniform_open01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    std::size_t below(std::size_t k);

    // Fisher-Yates: for i = n-1 down to 1 swap(v[i], v[below(i + 1)]).
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::mt19937_64 engine_;
};

// Seeded random interaction matrix. Draw order:
//   1. a uniformly random permutation pi (Fisher-Yates above); edges
//      pi[k] -> pi[k+1 mod n] form a Hamiltonian cycle
//   2. for i = 0..n-1, j = 0..n-1, j != i, row-major:
//        cycle edge         -> weight uniform_open01()
//        otherwise          -> if uniform01() < density: weight uniform_open01()
//   3. zero diagonal, each row divided by its sum
// density = 0 keeps only the cycle. Requires n >= 2 and density in [0, 1].
InteractionMatrix generate_random_network(std::size_t n, double density, std::uint64_t seed);

}  // namespace influence_dyn

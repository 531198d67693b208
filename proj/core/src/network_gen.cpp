#include "influence_dyn/network_gen.hpp"

#include <fmt/format.h>

#include <limits>
#include <numeric>
#include <utility>

namespace influence_dyn {

namespace {
constexpr double kTwoPowMinus53 = 1.0 / 9007199254740992.0;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * kTwoPowMinus53; }

double Rng::uniform_open01() { return static_cast<double>((next() >> 11) + 1) * kTwoPowMinus53; }

std::size_t Rng::below(std::size_t k) {
    if (k == 0) throw PreconditionError("Rng::below: bound must be positive");
    const std::uint64_t bound = k;
    // 2^64 mod k, computed without overflow.
    const std::uint64_t rem = (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;  // accept r <= limit
    std::uint64_t r = next();
    while (r > limit) r = next();
    return static_cast<std::size_t>(r % bound);
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    for (std::size_t i = n; i-- > 1;) std::swap(v[i], v[below(i + 1)]);
    return v;
}

InteractionMatrix generate_random_network(std::size_t n, double density, std::uint64_t seed) {
    if (n < 2) throw PreconditionError("generate_random_network: need n >= 2");
    if (!(density >= 0.0 && density <= 1.0)) {
        throw PreconditionError(fmt::format("generate_random_network: density {} outside [0, 1]", density));
    }
    Rng rng(seed);
    const auto order = rng.permutation(n);
    std::vector<std::size_t> successor(n);
    for (std::size_t k = 0; k < n; ++k) successor[order[k]] = order[(k + 1) % n];

    const auto nn = static_cast<Eigen::Index>(n);
    Matrix m = Matrix::Zero(nn, nn);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            if (successor[i] == j) {
                m(ii, jj) = rng.uniform_open01();
            } else if (rng.uniform01() < density) {
                m(ii, jj) = rng.uniform_open01();
            }
        }
    }
    for (Eigen::Index i = 0; i < nn; ++i) m.row(i) /= m.row(i).sum();
    return InteractionMatrix(std::move(m));
}

}  // namespace influence_dyn

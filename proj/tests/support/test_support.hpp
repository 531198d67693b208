#pragma once

// Independent oracles and random instance generators shared by the unit and
// acceptance suites. Nothing here calls the library routine it is used to
// check: reachability is by transitive closure, consensus by plain iteration
// of the update, Perron vectors by Eigen's general eigensolver.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "influence_dyn/dynamics.hpp"
#include "influence_dyn/netcore.hpp"
#include "influence_dyn/network_gen.hpp"
#include "influence_dyn/schedule.hpp"

namespace influence_dyn::testing {

// 3-cycle: agent 0 listens to 1, 1 to 2, 2 to 0.
inline Matrix cycle3() {
    Matrix p = Matrix::Zero(3, 3);
    p(0, 1) = p(1, 2) = p(2, 0) = 1.0;
    return p;
}

// Path 0 - 1 - 2 with agent 1 splitting its attention; Perron vector (1/4, 1/2, 1/4).
inline Matrix path3() {
    Matrix p(3, 3);
    p << 0, 1, 0, 0.5, 0, 0.5, 0, 1, 0;
    return p;
}

// Star with centre c: c listens uniformly to everybody, everybody listens to c.
inline Matrix star(std::size_t n, std::size_t c) {
    const auto nn = static_cast<Eigen::Index>(n);
    const auto cc = static_cast<Eigen::Index>(c);
    Matrix p = Matrix::Zero(nn, nn);
    for (Eigen::Index j = 0; j < nn; ++j) {
        if (j == cc) continue;
        p(cc, j) = 1.0 / static_cast<double>(n - 1);
        p(j, cc) = 1.0;
    }
    return p;
}

// Transitive closure (Floyd-Warshall) strong-connectivity oracle.
inline bool strongly_connected_closure(const Matrix& m) {
    const auto n = m.rows();
    std::vector<std::vector<char>> r(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (Eigen::Index i = 0; i < n; ++i) {
        r[i][i] = 1;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (m(i, j) > 0.0) r[i][j] = 1;
        }
    }
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (r[i][k] && r[k][j]) r[i][j] = 1;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (!r[i][j]) return false;
    return true;
}

// Left eigenvector for the eigenvalue of largest real part, via Eigen's
// general (QR-based) eigensolver; simplex-normalised.
inline Vector perron_oracle(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m.transpose());
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k) {
        if (es.eigenvalues()(k).real() > es.eigenvalues()(best).real()) best = k;
    }
    Vector v = es.eigenvectors().col(best).real();
    return v / v.sum();
}

// Brute-force iteration of y <- (A + BP) y + C y0 straight from the
// coefficient vectors, no library stepping.
inline Vector iterate_update(const Matrix& p, const Coefficients& c, const Vector& y0, std::size_t steps) {
    const Matrix a = c.a.asDiagonal();
    const Matrix b = c.b.asDiagonal();
    const Matrix cm = c.C();
    Vector y = y0;
    for (std::size_t t = 0; t < steps; ++t) y = (a + b * p) * y + cm * y0;
    return y;
}

// Random ModelI map with values in [0, 0.47] on [0, 1] so any a + b <= 0.94.
inline ScalarMap random_model_i_map(Rng& rng) {
    switch (rng.below(4)) {
        case 0: return ScalarMap::constant(rng.uniform(0.0, 0.47));
        case 1: {
            const double c0 = rng.uniform(0.0, 0.3);
            return ScalarMap::affine(c0, rng.uniform(-c0, 0.47 - c0));
        }
        case 2: {
            const double c0 = rng.uniform(0.0, 0.2);
            const double c1 = rng.uniform(0.0, 0.15);
            return ScalarMap::polynomial({c0, c1, rng.uniform(0.0, 0.47 - c0 - c1)});
        }
        default: return ScalarMap::affine(0.0, rng.uniform(0.0, 0.47));
    }
}

// Random ModelII a-map with values in [0, 0.9] on [0, 1], or the identity.
inline ScalarMap random_model_ii_map(Rng& rng) {
    switch (rng.below(4)) {
        case 0: return ScalarMap::constant(rng.uniform(0.0, 0.9));
        case 1: {
            const double c0 = rng.uniform(0.0, 0.5);
            return ScalarMap::affine(c0, rng.uniform(-c0, 0.9 - c0));
        }
        case 2: {
            const double c0 = rng.uniform(0.0, 0.3);
            return ScalarMap::polynomial({c0, 0.0, rng.uniform(0.0, 0.9 - c0)});
        }
        default: return ScalarMap::identity();
    }
}

inline CoefficientSchedule random_model_i(Rng& rng, std::size_t n, bool random_perm = true) {
    std::vector<ScalarMap> a, b;
    for (std::size_t i = 0; i < n; ++i) {
        a.push_back(random_model_i_map(rng));
        b.push_back(random_model_i_map(rng));
    }
    return CoefficientSchedule::model_i(std::move(a), std::move(b),
                                        random_perm ? rng.permutation(n) : identity_permutation(n));
}

inline CoefficientSchedule random_model_ii(Rng& rng, std::size_t n) {
    std::vector<ScalarMap> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(random_model_ii_map(rng));
    return CoefficientSchedule::model_ii(std::move(a));
}

// Interior point of the simplex (normalised uniform(0,1] draws).
inline SimplexVector random_simplex(Rng& rng, std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& e : v) e = rng.uniform_open01();
    return SimplexVector::normalized(v);
}

inline OpinionVector random_opinions(Rng& rng, std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& e : v) e = rng.uniform01();
    return OpinionVector(v);
}

inline InteractionMatrix random_network(Rng& rng, std::size_t n) {
    return generate_random_network(n, rng.uniform(0.0, 0.8), rng.next());
}

// Zero-diagonal doubly stochastic matrix: a convex combination of the cyclic
// shift along a random Hamiltonian cycle (strong connectivity) and a few random
// derangements.
inline Matrix random_doubly_stochastic(Rng& rng, std::size_t n) {
    const auto nn = static_cast<Eigen::Index>(n);
    auto perm_matrix = [&](const std::vector<std::size_t>& succ) {
        Matrix m = Matrix::Zero(nn, nn);
        for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(succ[i])) = 1.0;
        return m;
    };
    const auto order = rng.permutation(n);
    std::vector<std::size_t> cyc(n);
    for (std::size_t k = 0; k < n; ++k) cyc[order[k]] = order[(k + 1) % n];
    double w = rng.uniform(0.2, 1.0);
    Matrix m = w * perm_matrix(cyc);
    double total = w;
    const std::size_t extra = rng.below(3);
    for (std::size_t k = 0; k < extra; ++k) {
        std::vector<std::size_t> d;
        do {
            d = rng.permutation(n);
        } while ([&] {
            for (std::size_t i = 0; i < n; ++i)
                if (d[i] == i) return true;
            return false;
        }());
        w = rng.uniform(0.0, 1.0);
        m += w * perm_matrix(d);
        total += w;
    }
    return m / total;
}

}  // namespace influence_dyn::testing

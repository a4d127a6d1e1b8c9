#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "signet/geometry.hpp"

using namespace signet;

namespace {

Vec random_vec(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Vec v(dim);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("angular cosine distance on canonical directions", "[geometry]") {
    REQUIRE(angular_cosine_distance({1, 0}, {1, 0}) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(angular_cosine_distance({1, 0}, {0, 1}) == Catch::Approx(1.0));
    REQUIRE(angular_cosine_distance({1, 0}, {-1, 0}) == Catch::Approx(2.0));
}

TEST_CASE("angular cosine distance: zero-norm rule and mismatch", "[geometry]") {
    REQUIRE(angular_cosine_distance({0, 0}, {1, 0}) == 1.0);
    REQUIRE_THROWS_AS(angular_cosine_distance({1, 0}, {1, 0, 0}), std::invalid_argument);
}

TEST_CASE("angular cosine distance is symmetric, bounded, scale-invariant",
          "[geometry]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vec a = random_vec(rng, 4), b = random_vec(rng, 4);
        double d = angular_cosine_distance(a, b);
        REQUIRE(d >= 0.0);
        REQUIRE(d <= 2.0);
        REQUIRE(angular_cosine_distance(b, a) == Catch::Approx(d).margin(1e-12));
        double alpha = scale(rng), beta = scale(rng);
        Vec sa = a, sb = b;
        for (double& x : sa) x *= alpha;
        for (double& x : sb) x *= beta;
        REQUIRE(angular_cosine_distance(sa, sb) == Catch::Approx(d).margin(1e-12));
    }
}

TEST_CASE("min_distance_to_set basics", "[geometry]") {
    Vec x{1, 0};
    REQUIRE(min_distance_to_set(x, {{0, 1}, {1, 0}}, DistanceKind::AngularCosine) == 0.0);
    REQUIRE(min_distance_to_set(x, {}, DistanceKind::AngularCosine) ==
            std::numeric_limits<double>::infinity());

    // Hand oracle over both candidates: d([1,0],[0,1]) = 1, d([1,0],[1,1]) = 1 - 1/sqrt(2).
    std::vector<Vec> set{{0, 1}, {1, 1}};
    double expected = std::min(angular_cosine_distance(x, set[0]),
                               angular_cosine_distance(x, set[1]));
    REQUIRE(expected == Catch::Approx(1.0 - 1.0 / std::sqrt(2.0)));
    REQUIRE(min_distance_to_set(x, set, DistanceKind::AngularCosine) ==
            Catch::Approx(expected));
}

TEST_CASE("dataset_min_pairwise matches brute force and handles duplicates",
          "[geometry]") {
    std::vector<Vec> pts{{1, 0}, {0, 1}, {1, 1}};
    double brute = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            brute = std::min(brute, angular_cosine_distance(pts[i], pts[j]));
    REQUIRE(brute == Catch::Approx(1.0 - 1.0 / std::sqrt(2.0)));
    REQUIRE(dataset_min_pairwise(pts, DistanceKind::AngularCosine) == Catch::Approx(brute));

    std::vector<Vec> dup{{1, 0}, {0, 1}, {1, 0}};
    REQUIRE(dataset_min_pairwise(dup, DistanceKind::AngularCosine) == 0.0);

    // Invariant under permutation.
    std::vector<Vec> perm{{1, 1}, {1, 0}, {0, 1}};
    REQUIRE(dataset_min_pairwise(perm, DistanceKind::AngularCosine) == Catch::Approx(brute));

    REQUIRE_THROWS_AS(dataset_min_pairwise({{1, 0}}, DistanceKind::AngularCosine),
                      std::invalid_argument);
}

TEST_CASE("knn on colinear points and exhaustive case", "[geometry]") {
    std::vector<Vec> pool{{0.0}, {1.0}, {3.0}};
    auto nn = knn(0, pool, 1, DistanceKind::Euclidean, true);
    REQUIRE(nn == std::vector<std::size_t>{1});

    auto all = knn(1, pool, 3, DistanceKind::Euclidean, false);
    REQUIRE(all.size() == 3);
    REQUIRE(all[0] == 1);  // self at distance 0
    std::vector<std::size_t> sorted_all = all;
    std::sort(sorted_all.begin(), sorted_all.end());
    REQUIRE(sorted_all == std::vector<std::size_t>{0, 1, 2});

    REQUIRE_THROWS_AS(knn(0, pool, 3, DistanceKind::Euclidean, true), std::invalid_argument);
}

TEST_CASE("knn matches a quadratic sort oracle on random pools", "[geometry]") {
    std::mt19937_64 rng(42);
    std::vector<Vec> pool;
    for (int i = 0; i < 50; ++i) pool.push_back(random_vec(rng, 3));

    for (std::size_t q = 0; q < pool.size(); ++q) {
        auto got = knn(q, pool, 5, DistanceKind::AngularCosine, true);

        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (i == q) continue;
            ranked.emplace_back(angular_cosine_distance(pool[q], pool[i]), i);
        }
        std::sort(ranked.begin(), ranked.end());
        std::vector<std::size_t> expected;
        for (int i = 0; i < 5; ++i) expected.push_back(ranked[i].second);
        REQUIRE(got == expected);
    }
}

TEST_CASE("knn ties break by ascending index", "[geometry]") {
    std::vector<Vec> pool{{1.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}, {2.0, 0.0}};
    // Pool 1 and 2 are the same direction from pool 0; 3 is identical direction to 0.
    auto nn = knn(0, pool, 3, DistanceKind::AngularCosine, true);
    REQUIRE(nn == std::vector<std::size_t>{3, 1, 2});
}

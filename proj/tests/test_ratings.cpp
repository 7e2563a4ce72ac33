#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "xdrec/ratings.hpp"

using namespace xdrec;

TEST_SUITE("ratings") {

TEST_CASE("build_matrix constructs and indexes") {
    auto m = build_matrix({{0, 0, 5}, {1, 1, 3}}, 2, 2, 5);
    CHECK(m.n_observed() == 2);
    CHECK(m.density() == doctest::Approx(0.5));
    CHECK(m.n_users() == 2);
    CHECK(m.r_max() == 5);
    CHECK(m.user_entries(0).size() == 1);
    CHECK(m.user_entries(0)[0].rating == 5);
    CHECK(m.item_entry_ids(1).size() == 1);
}

TEST_CASE("build_matrix rejects bad input") {
    CHECK_THROWS_WITH_AS(build_matrix({{0, 0, 5}, {0, 0, 4}}, 2, 2, 5),
                         doctest::Contains("DuplicateEntry"), DataError);
    CHECK_THROWS_WITH_AS(build_matrix({{0, 0, 0}}, 1, 1, 5), doctest::Contains("InvalidRating"),
                         DataError);
    CHECK_THROWS_WITH_AS(build_matrix({{0, 0, 6}}, 1, 1, 5), doctest::Contains("InvalidRating"),
                         DataError);
    CHECK_THROWS_WITH_AS(build_matrix({{2, 0, 1}}, 2, 2, 5), doctest::Contains("OutOfBounds"),
                         DataError);
    CHECK_THROWS_WITH_AS(build_matrix({{0, 5, 1}}, 2, 2, 5), doctest::Contains("OutOfBounds"),
                         DataError);
}

TEST_CASE("observed_mean") {
    CHECK(observed_mean(build_matrix({{0, 0, 5}, {1, 1, 3}}, 2, 2, 5)) == doctest::Approx(4.0));
    CHECK(observed_mean(build_matrix({{0, 0, 2}}, 1, 1, 5)) == doctest::Approx(2.0));
    CHECK_THROWS_WITH_AS(observed_mean(build_matrix({}, 2, 2, 5)),
                         doctest::Contains("EmptyMatrix"), DataError);
}

TEST_CASE("masked_residual_sq") {
    auto one = build_matrix({{0, 0, 4}}, 1, 1, 5);
    DenseMatrix a(1, 1);
    a << 4.0;
    CHECK(masked_residual_sq(one, a) == doctest::Approx(0.0));
    a << 2.0;
    CHECK(masked_residual_sq(one, a) == doctest::Approx(4.0));

    // hand oracle: (4-0)^2 + (2-0)^2 = 20, missing entries do not contribute
    auto two = build_matrix({{0, 0, 4}, {0, 1, 2}}, 2, 3, 5);
    CHECK(masked_residual_sq(two, DenseMatrix::Zero(2, 3)) == doctest::Approx(20.0));

    CHECK_THROWS_WITH_AS(masked_residual_sq(two, DenseMatrix::Zero(3, 3)),
                         doctest::Contains("ShapeMismatch"), DataError);
}

TEST_CASE("adjacency enumerates every triple exactly once") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = testing::random_matrix(rng, 8, 7, 0.4);
        std::set<std::pair<int, int>> from_users, from_items, direct;
        for (const auto& t : m.triples()) direct.insert({t.user, t.item});
        for (int u = 0; u < m.n_users(); ++u) {
            for (const auto& t : m.user_entries(u)) {
                CHECK(t.user == u);
                CHECK(from_users.insert({t.user, t.item}).second);
            }
        }
        for (int i = 0; i < m.n_items(); ++i) {
            for (auto id : m.item_entry_ids(i)) {
                const auto& t = m.triples()[static_cast<std::size_t>(id)];
                CHECK(t.item == i);
                CHECK(from_items.insert({t.user, t.item}).second);
            }
        }
        CHECK(from_users == direct);
        CHECK(from_items == direct);
        CHECK(direct.size() == m.n_observed());
    }
}

TEST_CASE("densify round-trip has zero masked residual") {
    Rng rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        auto m = testing::random_matrix(rng, 6, 9, 0.3);
        CHECK(masked_residual_sq(m, densify(m)) == doctest::Approx(0.0));
        double mean = observed_mean(m);
        CHECK(mean >= 1.0);
        CHECK(mean <= m.r_max());
    }
}

}  // TEST_SUITE

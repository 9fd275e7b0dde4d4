#include <doctest.h>

#include <linident/lattice.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace linident;

namespace {

IntMat random_mat(std::mt19937_64& rng, size_t rows, size_t cols, int lo = -4,
                  int hi = 4) {
    std::uniform_int_distribution<int> d(lo, hi);
    IntMat a(rows, IntVec(cols));
    for (auto& r : a)
        for (auto& x : r) x = d(rng);
    return a;
}

IntVec mat_vec(const IntMat& a, const IntVec& x) {
    IntVec b(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) b[i] += a[i][j] * x[j];
    return b;
}

bool is_zero_vec(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

} // namespace

TEST_CASE("lattice: hermite form goldens") {
    CHECK(hnf_row({{2, 4}, {1, 1}}) == IntMat{{1, 1}, {0, 2}});
    CHECK(hnf_row({{4}, {6}}) == IntMat{{2}});
    CHECK(hnf_row({{0, 0}, {0, 0}}).empty());
    CHECK(hnf_row({{-1, 0}, {0, -1}}) == IntMat{{1, 0}, {0, 1}});
    CHECK(hnf_row({{3, 5}}) == IntMat{{3, 5}});
}

TEST_CASE("lattice: hermite form is canonical for the row lattice") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 30; ++it) {
        IntMat a = random_mat(rng, 3, 4);
        IntMat h = hnf_row(a);
        CHECK(hnf_row(h) == h);

        IntMat shuffled = a;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(hnf_row(shuffled) == h);

        IntMat negated = a;
        for (auto& x : negated[0]) x = -x;
        CHECK(hnf_row(negated) == h);

        // adding a row already in the lattice changes nothing
        IntMat extended = a;
        IntVec combo(4, 0);
        for (size_t j = 0; j < 4; ++j) combo[j] = a[0][j] * 2 - a[1][j];
        extended.push_back(combo);
        CHECK(hnf_row(extended) == h);
    }
}

TEST_CASE("lattice: transform is unimodular") {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 25; ++it) {
        size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
        IntMat a = random_mat(rng, rows, cols);
        HnfTransform t = hnf_with_transform(a);
        REQUIRE(t.h.size() == rows);
        REQUIRE(t.u.size() == rows);
        CHECK(testutil::zmat_mul(t.u, a) == t.h);
        Int d = testutil::det_int(t.u);
        CHECK((d == 1 || d == -1));
        // zero rows sit at the bottom
        bool seen_zero = false;
        for (const auto& row : t.h) {
            bool z = is_zero_vec(row);
            if (seen_zero) CHECK(z);
            if (z) seen_zero = true;
        }
        // same row lattice
        CHECK(hnf_row(t.h) == hnf_row(a));
    }
}

TEST_CASE("lattice: kernels are saturated") {
    IntMat k = kernel_basis({{2, 2}});
    REQUIRE(k.size() == 1);
    CHECK(lattice_contains(k, {1, -1}));

    CHECK(kernel_basis({{1, 0}, {0, 1}}).empty());

    IntMat k2 = kernel_basis({{1, 2, 3}, {2, 4, 6}});
    REQUIRE(k2.size() == 2);
    CHECK(lattice_contains(k2, {2, -1, 0}));
    CHECK(lattice_contains(k2, {3, 0, -1}));

    IntMat kz = kernel_basis({{0, 0, 0}, {0, 0, 0}});
    REQUIRE(kz.size() == 3);
    CHECK(lattice_contains(kz, {1, 0, 0}));
    CHECK(lattice_contains(kz, {0, 1, 0}));
    CHECK(lattice_contains(kz, {0, 0, 1}));

    std::mt19937_64 rng(13);
    for (int it = 0; it < 30; ++it) {
        size_t rows = 1 + rng() % 3, cols = 1 + rng() % 5;
        IntMat a = random_mat(rng, rows, cols);
        IntMat kb = kernel_basis(a);
        for (const auto& v : kb) CHECK(is_zero_vec(mat_vec(a, v)));
        CHECK((int)kb.size() + int_rank(a) == (int)cols);
    }
}

TEST_CASE("lattice: rank and membership") {
    CHECK(int_rank({{1, 2}, {2, 4}}) == 1);
    CHECK(int_rank({{1, 0}, {0, 1}}) == 2);
    CHECK(int_rank({{0, 0}}) == 0);

    IntMat basis{{2, 0}, {0, 3}};
    CHECK(lattice_contains(basis, {4, 3}));
    CHECK(lattice_contains(basis, {2, 3}));
    CHECK(lattice_contains(basis, {0, 0}));
    CHECK_FALSE(lattice_contains(basis, {1, 0}));
    CHECK_FALSE(lattice_contains(basis, {2, 1}));
}

TEST_CASE("lattice: integral solves") {
    auto s = solve_integer({{2, 0}, {0, 3}}, {4, 9});
    REQUIRE(s.has_value());
    CHECK(*s == IntVec{2, 3});

    CHECK_FALSE(solve_integer({{2, 0}, {0, 3}}, {1, 0}).has_value());

    auto s2 = solve_integer({{1, 1}}, {5});
    REQUIRE(s2.has_value());
    CHECK((*s2)[0] + (*s2)[1] == 5);

    auto s3 = solve_integer({{1}, {2}}, {3, 6});
    REQUIRE(s3.has_value());
    CHECK((*s3)[0] == 3);
    CHECK_FALSE(solve_integer({{1}, {2}}, {3, 5}).has_value());

    std::mt19937_64 rng(17);
    for (int it = 0; it < 30; ++it) {
        size_t rows = 1 + rng() % 3, cols = 1 + rng() % 4;
        IntMat a = random_mat(rng, rows, cols);
        IntVec x(cols);
        std::uniform_int_distribution<int> d(-3, 3);
        for (auto& v : x) v = d(rng);
        IntVec b = mat_vec(a, x);
        auto got = solve_integer(a, b);
        REQUIRE(got.has_value());
        CHECK(mat_vec(a, *got) == b);
    }
}

#include <algorithm>
#include <random>

#include "capkit/space.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capkit;

namespace {

// sup of mu(B(x,2r))/mu(B(x,r)) over a dense set of radii around every breakpoint
double brute_doubling(const Space& s) {
    double best = 1;
    const int n = static_cast<int>(s.size());
    std::vector<double> probes;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y)
                for (double d : {s.d(x, y), s.d(x, y) / 2})
                    for (double f : {1 - 1e-9, 1.0, 1 + 1e-9})
                        probes.push_back(d * f);
    for (int x = 0; x < n; ++x)
        for (double r : probes)
            best = std::max(best, oracle::ball_mass(s, x, 2 * r) / oracle::ball_mass(s, x, r));
    return best;
}

bool ternary_cantor(long a, int depth) {
    for (int k = 0; k < depth; ++k, a /= 3)
        if (a % 3 == 1)
            return false;
    return true;
}

}  // namespace

TEST_SUITE("space") {
    TEST_CASE("fixtures validate and have the expected window") {
        const Space s = two_point_space();
        CHECK(validate_metric(s).ok);
        const ScaleWindow w = scale_window(s);
        CHECK(w.n0 == -1);
        CHECK(w.n_max == 0);
        CHECK(w.tail_start == 1);
        const ScaleWindow w3 = scale_window(three_chain());
        CHECK(w3.n0 == -2);
        CHECK(w3.n_max == 0);
    }

    TEST_CASE("non-symmetric matrix is rejected with the offending pair") {
        const Space s({"a", "b", "c"}, {1, 1, 1}, {0, 1, 2, 1.5, 0, 1, 2, 1, 0});
        const ValidationReport r = validate_metric(s);
        CHECK_FALSE(r.ok);
        CHECK(r.axiom == "symmetry");
        REQUIRE(r.witness.size() == 2);
        CHECK(s.id(r.witness[0]) == "a");
        CHECK(s.id(r.witness[1]) == "b");
    }

    TEST_CASE("triangle and mass violations") {
        const Space bad({"a", "b", "c"}, {1, 1, 1}, {0, 1, 5, 1, 0, 1, 5, 1, 0});
        const ValidationReport r = validate_metric(bad);
        CHECK(r.axiom == "triangle");
        CHECK(validate_metric(bad, 1e-12, false).ok);
        const Space m({"a", "b"}, {1, 0}, {0, 1, 1, 0});
        CHECK(validate_metric(m).axiom == "mass");
    }

    TEST_CASE("doubling constant matches a dense radius scan") {
        std::mt19937_64 rng(11);
        CHECK(doubling_constant(two_point_space()) == doctest::Approx(brute_doubling(two_point_space())));
        CHECK(doubling_constant(three_chain()) == doctest::Approx(brute_doubling(three_chain())));
        for (int t = 0; t < 10; ++t) {
            const Space s = oracle::random_space(rng, 3 + t);
            CHECK(doubling_constant(s) == doctest::Approx(brute_doubling(s)).epsilon(1e-12));
        }
        CHECK(doubling_constant(build_grid(1, 5)) == doctest::Approx(brute_doubling(build_grid(1, 5))));
    }

    TEST_CASE("balls: open inside closed, counts monotone in r") {
        const Space s = build_grid(2, 3);
        for (int x : {0, 9, 40})
            for (double r = 0.01; r < 1.5; r += 0.07) {
                CHECK(s.ball_count(x, r) <= s.ball_count(x, r, true));
                CHECK(s.ball_count(x, r) <= s.ball_count(x, r + 0.07));
                CHECK(ball_measure(s, x, r) == doctest::Approx(oracle::ball_mass(s, x, r)));
            }
    }

    TEST_CASE("grid builder") {
        const Space g = build_grid(2, 3);
        CHECK(g.size() == 64);
        double tot = 0;
        for (double m : g.masses())
            tot += m;
        CHECK(tot == doctest::Approx(1.0));
        CHECK(validate_metric(g).ok);
    }

    TEST_CASE("cantor set membership agrees with ternary digits") {
        for (int depth = 3; depth <= 6; ++depth) {
            const CantorSpace c = build_cantor(1.0 / 3, depth);
            CHECK(c.set.size() == (std::size_t{1} << depth));
            for (std::size_t a = 0; a < c.space.size(); ++a) {
                const bool in = std::binary_search(c.set.begin(), c.set.end(), static_cast<int>(a));
                CHECK(in == ternary_cantor(static_cast<long>(a), depth));
            }
        }
    }

    TEST_CASE("stats: grids reverse double, fixtures do not") {
        for (int level : {4, 6}) {
            const SpaceStats st = estimate_stats(build_grid(1, level));
            REQUIRE(st.c_R.has_value());
            CHECK(*st.c_R < 1);
            CHECK(st.c_mu >= 1);
            CHECK(st.sigma > 0);
        }
        CHECK_FALSE(estimate_stats(two_point_space()).c_R.has_value());
        for (int depth = 3; depth <= 5; ++depth)
            CHECK(estimate_stats(build_cantor(1.0 / 3, depth).space).c_R.has_value());
    }

    TEST_CASE("bucket_of") {
        CHECK(bucket_of(1.0) == -1);
        CHECK(bucket_of(0.5) == 0);
        CHECK(bucket_of(0.75) == 0);
        CHECK(bucket_of(2.0) == -2);
    }
}

#include <cmath>
#include <random>

#include "capkit/capacity.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capkit;

namespace {

CapacityParams params(double beta, double p, double q) {
    CapacityParams prm;
    prm.beta = beta;
    prm.p = p;
    prm.q = q;
    return prm;
}

// 3-chain, E={0}, ball B(0,0.6): phi(0)=1, phi(2)=0, phi(1)=t free.
// Band -2 holds the pair (0,2), band -1 holds (0,1) and (1,2).
double three_chain_relative_oracle() {
    const double far = oracle::min_norm_kkt({{std::sqrt(2.0), std::sqrt(2.0)}}, {1});
    auto near = [](double t) { return oracle::min_norm_kkt({{1, 1, 0}, {0, 1, 1}}, {1 - t, t}); };
    const double best = -oracle::golden_max([&](double t) { return -near(t); }, 0, 1);
    return far + best;
}

}  // namespace

TEST_SUITE("capacity") {
    TEST_CASE("two points, single point set") {
        const Space s = two_point_space();
        const double expect = oracle::dual_value(s, {1, 0}, 0.5, 2, 2);
        CHECK(expect == doctest::Approx(1.0 / 3).epsilon(1e-12));
        const CapacityCertificate c = cap_tl_primal(s, {0}, params(0.5, 2, 2));
        CHECK(c.value == doctest::Approx(1.0 / 3).epsilon(1e-6));
        CHECK(c.dual_value == doctest::Approx(1.0 / 3).epsilon(1e-6));
        const CapacityCertificate d = cap_tl_dual(s, {0}, params(0.5, 2, 2));
        CHECK(d.dual_value == doctest::Approx(1.0 / 3).epsilon(1e-6));
        CHECK(certificate_residual(s, c).max_violation <= 1e-9);
    }

    TEST_CASE("two points, whole space, every q") {
        const Space s = two_point_space();
        for (double q : {1.0, 1.5, 2.0, 3.0, kInf}) {
            const double expect = oracle::golden_max(
                [&](double t) { return oracle::dual_value(s, {t, 1 - t}, 0.5, 2, q); }, 0, 1);
            const CapacityCertificate c = cap_tl_primal(s, {0, 1}, params(0.5, 2, q));
            CAPTURE(q);
            CHECK(c.value == doctest::Approx(expect).epsilon(1e-5));
            CHECK(c.rel_gap <= 1e-5);
        }
    }

    TEST_CASE("riesz capacity on two points") {
        const Space s = two_point_space();
        const CapacityCertificate c = cap_riesz(s, {0}, 0.5, 2);
        CHECK(c.value == doctest::Approx(1).epsilon(1e-6));
        CHECK(certificate_residual(s, c).max_violation <= 1e-9);
    }

    TEST_CASE("relative capacity on the 3-chain") {
        const double expect = three_chain_relative_oracle();
        CHECK(expect == doctest::Approx(5.0 / 12).epsilon(1e-9));
        const Space s = three_chain();
        const CapacityCertificate c = cap_relative(s, {0}, 0, 0.6, params(0.5, 2, 2));
        CHECK(c.value == doctest::Approx(expect).epsilon(1e-6));
        CHECK(c.phi[1] == doctest::Approx(0.5).epsilon(1e-3));
        CHECK(certificate_residual(s, c).max_violation <= 1e-9);
    }

    TEST_CASE("relative capacity vanishes when the ball covers the space") {
        const CapacityCertificate c = cap_relative(two_point_space(), {0}, 0, 1, params(0.5, 2, 2));
        CHECK(c.value == 0);
    }

    TEST_CASE("strong duality on random spaces") {
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<int> pick(0, 1);
        const std::pair<double, double> pq[] = {{2, 2}, {2, kInf}, {3, 1.5}, {2, 1}};
        for (int t = 0; t < 16; ++t) {
            const Space s = oracle::random_space(rng, 5 + t);
            PointSet e;
            for (int x = 0; x < static_cast<int>(s.size()); ++x)
                if (pick(rng))
                    e.push_back(x);
            if (e.empty())
                e.push_back(0);
            const auto [p, q] = pq[t % 4];
            const CapacityParams prm = params(0.5, p, q);
            const CapacityCertificate c = cap_tl_primal(s, e, prm);
            CAPTURE(t);
            CHECK(c.rel_gap <= 1e-4);
            CHECK(c.dual_value <= c.value * (1 + 1e-9));
            CHECK(certificate_residual(s, c).max_violation <= 1e-9);
            // the returned measure, rescored independently
            CHECK(oracle::dual_value(s, c.dual, 0.5, p, q) == doctest::Approx(c.dual_value).epsilon(1e-6));
            CHECK(tl_dual_ratio(s, c.dual, prm) == doctest::Approx(c.dual_value).epsilon(1e-9));
        }
    }

    TEST_CASE("monotone in the set and in q") {
        std::mt19937_64 rng(23);
        const Space s = oracle::random_space(rng, 12);
        const CapacityParams prm = params(0.5, 2, 2);
        const double small = cap_tl_primal(s, {0, 3}, prm).value;
        const double big = cap_tl_primal(s, {0, 3, 5, 7}, prm).value;
        CHECK(small <= big * (1 + 1e-5));
        double prev = 0;
        for (double q : {kInf, 3.0, 2.0, 1.5, 1.0}) {
            const double v = cap_tl_primal(s, {0, 3}, params(0.5, 2, q)).value;
            CHECK(v >= prev * (1 - 1e-5));
            prev = v;
        }
    }

    TEST_CASE("extra head scales do not change the value") {
        std::mt19937_64 rng(29);
        const Space s = oracle::random_space(rng, 9);
        const CapacityParams prm = params(0.4, 2, 2);
        SolverOptions more;
        more.extra_head = 4;
        CHECK(cap_tl_primal(s, {1, 2}, prm, more).value ==
              doctest::Approx(cap_tl_primal(s, {1, 2}, prm).value).epsilon(1e-5));
    }

    TEST_CASE("empty set and bad parameters") {
        const Space s = two_point_space();
        CHECK(cap_tl_primal(s, {}, params(0.5, 2, 2)).value == 0);
        CHECK_THROWS_AS(cap_tl_primal(s, {0}, params(0.5, 0.5, 2)), Error);
        CHECK_THROWS_AS(cap_tl_primal(s, {0}, params(-1, 2, 2)), Error);
        CHECK_THROWS_AS(cap_tl_primal(s, {0}, params(0.5, 2, 0.5)), Error);
        CHECK_THROWS_AS(cap_relative(s, {0}, 0, 1, params(1.5, 2, 2)), Error);
        CHECK_THROWS_AS(cap_relative(s, {1}, 0, 0.5, params(0.5, 2, 2)), Error);
        CHECK_THROWS_AS(cap_tl_primal(s, {7}, params(0.5, 2, 2)), Error);
    }
}

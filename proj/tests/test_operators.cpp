#include <cmath>
#include <random>

#include "capkit/operators.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capkit;

namespace {

const double r2 = std::sqrt(2.0);

PointFunction random_function(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1, 1);
    PointFunction f(n);
    for (double& v : f)
        v = u(rng);
    return f;
}

}  // namespace

TEST_SUITE("operators") {
    TEST_CASE("conjugate exponents") {
        CHECK(conjugate(2) == doctest::Approx(2));
        CHECK(conjugate(1.5) == doctest::Approx(3));
        CHECK(std::isinf(conjugate(1)));
        CHECK(conjugate(kInf) == 1);
        CHECK(lq_norm({3, 4}, 2) == doctest::Approx(5));
        CHECK(lq_norm({3, 4}, kInf) == 4);
        CHECK(lq_norm({3, 4}, 1) == 7);
    }

    TEST_CASE("dual sequence on two points, point mass at a") {
        const Space s = two_point_space();
        const PointMeasure nu{1, 0};
        const HdualValues l1 = hdual_sequence(s, nu, 0.5, 1);
        const double expect = r2 / 2 + 1 + (1 / r2) / (1 - 1 / r2);
        CHECK(l1.point_norm(0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(l1.point_norm(1) == doctest::Approx(r2 / 2));
        const HdualValues linf = hdual_sequence(s, nu, 0.5, kInf);
        CHECK(linf.point_norm(0) == doctest::Approx(1));
        CHECK(linf.point_norm(1) == doctest::Approx(r2 / 2));
    }

    TEST_CASE("dual sequence norm agrees with a term by term sum") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0, 1);
        for (int t = 0; t < 12; ++t) {
            const Space s = oracle::random_space(rng, 4 + t);
            PointMeasure nu(s.size());
            for (double& v : nu)
                v = u(rng) < 0.5 ? 0 : u(rng);
            nu[0] = 1;
            const double beta = 0.3 + 0.1 * (t % 5);
            for (auto [pd, qd] : {std::pair{2.0, 2.0}, {2.0, 1.0}, {3.0, kInf}, {1.5, 3.0}}) {
                const HdualValues h = hdual_sequence(s, nu, beta, qd);
                CHECK(hdual_norm(s, h, pd) ==
                      doctest::Approx(oracle::hdual_norm(s, nu, beta, pd, qd)).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("tail collapse matches the explicit geometric sum") {
        ScaleWindow w{-1, 0, 1};
        double sum = 0;
        for (int n = 1; n < 2000; ++n)
            sum += std::pow(2.0, -0.5 * n * 2);
        CHECK(tail_weight(w, 0.5, 2) == doctest::Approx(std::sqrt(sum)));
        CHECK(tail_weight(w, 0.5, kInf) == doctest::Approx(1 / r2));
    }

    TEST_CASE("fractional maximal function and maximal function") {
        const Space s = two_point_space();
        const PointFunction m = frac_max(s, {1, 0}, 0.5);
        CHECK(m[0] == doctest::Approx(1));
        CHECK(m[1] == doctest::Approx(r2 / 2));
        const PointFunction mf = max_noncentered(s, {1, 0});
        CHECK(mf[0] == doctest::Approx(1));
        CHECK(mf[1] == doctest::Approx(0.5));
    }

    TEST_CASE("maximal function dominates the function and is scale free") {
        std::mt19937_64 rng(5);
        const Space s = oracle::random_space(rng, 15);
        PointFunction f = random_function(rng, s.size());
        const PointFunction mf = max_noncentered(s, f);
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(mf[i] >= std::abs(f[i]) - 1e-15);
        for (double& v : f)
            v *= 3;
        const PointFunction mf3 = max_noncentered(s, f);
        for (std::size_t i = 0; i < f.size(); ++i)
            CHECK(mf3[i] == doctest::Approx(3 * mf[i]));
    }

    TEST_CASE("potential H and mixed norm on two points") {
        const Space s = two_point_space();
        ScaleSequence f(scale_window(s), 2);
        f.at(-1, 0) = 1;
        f.at(-1, 1) = 1;
        const PointFunction h = potential_H(s, f, 0.5);
        CHECK(h[0] == doctest::Approx(r2));
        CHECK(h[1] == doctest::Approx(r2));
        f.at(0, 0) = 1;
        CHECK(mixed_norm(s, f, all_points(s), 2, 2) == doctest::Approx(std::sqrt(3.0)));
    }

    TEST_CASE("potential H is linear and monotone") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0, 1);
        const Space s = oracle::random_space(rng, 10);
        ScaleSequence f(scale_window(s), s.size()), g = f;
        for (std::size_t i = 0; i < f.head.size(); ++i) {
            f.head[i] = u(rng);
            g.head[i] = f.head[i] + u(rng);
        }
        const PointFunction hf = potential_H(s, f, 0.5), hg = potential_H(s, g, 0.5);
        ScaleSequence f2 = f;
        for (double& v : f2.head)
            v *= 2;
        const PointFunction hf2 = potential_H(s, f2, 0.5);
        for (std::size_t x = 0; x < s.size(); ++x) {
            CHECK(hg[x] >= hf[x]);
            CHECK(hf2[x] == doctest::Approx(2 * hf[x]));
        }
    }

    TEST_CASE("riesz potential on two points") {
        const Space s = two_point_space();
        const PointFunction i = riesz_I(s, {1, 0}, 0.5);
        CHECK(i[0] == 0);
        CHECK(i[1] == doctest::Approx(1));
    }

    TEST_CASE("partition of unity sums to one with bounded overlap") {
        const Space two = two_point_space();
        const PartitionOfUnity p0 = partition_of_unity(two, 0);
        REQUIRE(p0.centers.size() == 2);
        CHECK(p0.value(0, 0) == doctest::Approx(0.5));
        const Space g = build_grid(1, 6);
        for (const PartitionOfUnity& pu : partitions_for_window(g, scale_window(g))) {
            for (int x = 0; x < static_cast<int>(g.size()); ++x) {
                double sum = 0;
                for (std::size_t i = 0; i < pu.centers.size(); ++i)
                    sum += pu.value(i, x);
                CHECK(sum == doctest::Approx(1));
            }
            CHECK(pu.kappa > 0);
            CHECK(pu.N_overlap >= 1);
            for (std::size_t i = 0; i < pu.centers.size(); ++i) {
                PointFunction psi(g.size());
                for (int x = 0; x < static_cast<int>(g.size()); ++x)
                    psi[x] = pu.value(i, x);
                CHECK(lipschitz_constant(g, psi) <= pu.L_pou * std::ldexp(1.0, pu.n) * (1 + 1e-12));
            }
        }
    }

    TEST_CASE("pointwise gradient is a valid gradient and tight") {
        std::mt19937_64 rng(21);
        for (int t = 0; t < 8; ++t) {
            const Space s = oracle::random_space(rng, 6 + t);
            const PointFunction u = random_function(rng, s.size());
            const GradientSequence g = pointwise_gradient(s, u, all_points(s), 0.5);
            CHECK(is_fractional_gradient(s, u, g, all_points(s), 0.5).ok);
            GradientSequence half = g;
            for (auto& [k, v] : half.g)
                for (double& x : v)
                    x *= 0.4;
            CHECK_FALSE(is_fractional_gradient(s, u, half, all_points(s), 0.5).ok);
        }
    }

    TEST_CASE("leibniz rule yields a gradient of the product") {
        std::mt19937_64 rng(4);
        for (int t = 0; t < 8; ++t) {
            const Space s = oracle::random_space(rng, 8 + t);
            const PointFunction u = random_function(rng, s.size());
            PointFunction eta(s.size());
            for (int x = 0; x < static_cast<int>(s.size()); ++x)
                eta[x] = std::max(0.0, 1 - 2 * s.d(0, x));
            const GradientSequence g = pointwise_gradient(s, u, all_points(s), 0.5);
            const GradientSequence rho = leibniz_gradient(s, u, g, eta, 2, 1, 0.5);
            PointFunction prod(s.size());
            for (std::size_t x = 0; x < s.size(); ++x)
                prod[x] = u[x] * eta[x];
            CHECK(is_fractional_gradient(s, prod, rho, all_points(s), 0.5, 1e-9).ok);
        }
        const Space two = two_point_space();
        CHECK_THROWS_AS(leibniz_gradient(two, {1, 1}, {}, {1, 0}, 0.5, 1, 0.5), Error);
    }
}

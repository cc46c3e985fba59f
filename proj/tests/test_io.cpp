#include <cmath>
#include <random>

#include "capkit/io.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capkit;

TEST_SUITE("io") {
    TEST_CASE("reals") {
        CHECK(std::isinf(io::parse_real("inf")));
        CHECK(std::isinf(io::parse_real("Infinity")));
        CHECK(io::parse_real("1.5") == 1.5);
        CHECK_THROWS_AS(io::parse_real("1.5x"), Error);
        CHECK_THROWS_AS(io::parse_real(""), Error);
        CHECK(io::format_real(kInf) == "inf");
        CHECK(io::parse_real(io::format_real(0.1)) == 0.1);
    }

    TEST_CASE("explicit space round trip, full and triangular matrices") {
        const std::string full =
            R"({"metric":"explicit","points":[{"id":"a","mass":1},{"id":"b","mass":2}],"matrix":[[0,1],[1,0]]})";
        const std::string tri =
            R"({"metric":"explicit","points":[{"id":"a","mass":1},{"id":"b","mass":2}],"matrix":[[0],[1,0]]})";
        const Space s = io::parse_space(full);
        const Space t = io::parse_space(tri);
        CHECK(s.dist_table() == t.dist_table());
        CHECK(s.mass(1) == 2);
        const Space back = io::parse_space(io::dump_space(s));
        CHECK(back.ids() == s.ids());
        CHECK(back.dist_table() == s.dist_table());
        CHECK_FALSE(io::declares_euclidean(full));
    }

    TEST_CASE("euclidean space round trip") {
        std::mt19937_64 rng(2);
        const Space s = oracle::random_space(rng, 7);
        const std::string text = io::dump_space(s);
        CHECK(io::declares_euclidean(text));
        const Space back = io::parse_space(text);
        for (int x = 0; x < 7; ++x)
            for (int y = 0; y < 7; ++y)
                CHECK(back.d(x, y) == doctest::Approx(s.d(x, y)).epsilon(1e-15));
        CHECK(back.masses() == s.masses());
    }

    TEST_CASE("malformed spaces") {
        CHECK_THROWS_AS(io::parse_space("{"), Error);
        CHECK_THROWS_AS(io::parse_space(R"({"points":3})"), Error);
        CHECK_THROWS_AS(io::parse_space(R"({"points":[{"id":"a"}]})"), Error);
        CHECK_THROWS_AS(io::parse_space(R"({"points":[{"id":"a","mass":1},{"id":"a","mass":1}],"matrix":[[0],[1,0]]})"),
                        Error);
        CHECK_THROWS_AS(io::parse_space(R"({"points":[{"id":"a","mass":1},{"id":"b","mass":1}],"matrix":[[0,1]]})"),
                        Error);
    }

    TEST_CASE("sets") {
        const Space s = three_chain();
        CHECK(io::parse_set_arg(s, "{2,0}") == PointSet{0, 2});
        CHECK(io::parse_set_arg(s, R"(["1"])") == PointSet{1});
        CHECK(io::parse_set(s, io::dump_set(s, {0, 1})) == PointSet{0, 1});
        CHECK_THROWS_AS(io::parse_set_arg(s, "{7}"), Error);
        CHECK_THROWS_AS(io::parse_set_arg(s, "0,1"), Error);
    }

    TEST_CASE("sequences and point values") {
        const Space s = two_point_space();
        ScaleSequence f(scale_window(s), 2);
        f.at(-1, 0) = 0.25;
        f.at(0, 1) = 3;
        f.tail[1] = 0.5;
        const ScaleSequence g = io::parse_sequence(s, io::dump_sequence(s, f));
        CHECK(g.head == f.head);
        CHECK(g.tail == f.tail);
        CHECK_THROWS_AS(io::parse_sequence(s, "5 a 1\n"), Error);
        CHECK_THROWS_AS(io::parse_sequence(s, "0 a -1\n"), Error);
        CHECK_THROWS_AS(io::parse_sequence(s, "0 zz 1\n"), Error);
        const std::vector<double> v{1.5, kInf};
        CHECK(io::parse_point_values(s, io::dump_point_values(s, v)) == v);
    }

    TEST_CASE("certificates survive a round trip and still check") {
        const Space s = three_chain();
        CapacityParams prm;
        const CapacityCertificate tl = cap_tl_primal(s, {0, 2}, prm);
        const CapacityCertificate tl2 = io::parse_certificate(s, io::dump_certificate(s, tl));
        CHECK(tl2.kind == "tl");
        CHECK(tl2.value == tl.value);
        CHECK(certificate_residual(s, tl2).max_violation <= 1e-9);
        CHECK(certificate_residual(s, tl2).objective == doctest::Approx(tl.value).epsilon(1e-9));

        const CapacityCertificate rel = cap_relative(s, {0}, 0, 0.6, prm);
        const CapacityCertificate rel2 = io::parse_certificate(s, io::dump_certificate(s, rel));
        CHECK(rel2.center == 0);
        CHECK(certificate_residual(s, rel2).max_violation <= 1e-9);

        const CapacityCertificate rz = cap_riesz(s, {1}, 0.5, 2);
        CHECK(certificate_residual(s, io::parse_certificate(s, io::dump_certificate(s, rz))).max_violation <= 1e-9);
        CHECK_THROWS_AS(io::parse_certificate(s, R"({"kind":"tl"})"), Error);
    }
}

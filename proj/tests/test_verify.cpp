#include <set>

#include "capkit/verify.hpp"
#include "doctest.h"

using namespace capkit;
using namespace capkit::verify;

TEST_SUITE("verify") {
    TEST_CASE("check ids are unique and known") {
        const auto& ids = check_ids();
        CHECK(ids.size() >= 17);
        CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
        for (const auto& id : ids)
            CHECK(is_check_id(id));
        CHECK_FALSE(is_check_id("nope"));
        CHECK_THROWS(run_check("nope", Instance::two_point(), CheckConfig{}));
    }

    TEST_CASE("duality on two points reproduces one third") {
        const CheckResult r = run_check("duality", Instance::two_point(), CheckConfig{});
        CHECK(r.pass);
        CHECK(r.status == "pass");
        CHECK(r.rhs == doctest::Approx(1.0 / 3).epsilon(1e-6));
        CHECK(r.lhs == doctest::Approx(1.0 / 3).epsilon(1e-6));
    }

    TEST_CASE("explicit checks report their bound") {
        CheckConfig cfg;
        cfg.samples = 6;
        for (const char* id : {"disc_vs_H", "m_twosided", "riesz_twosided", "leibniz"}) {
            const CheckResult r = run_check(id, Instance::three_chain(), cfg);
            CAPTURE(id);
            CHECK(r.pass);
            REQUIRE(r.explicit_bound.has_value());
            CHECK(r.measured_constant <= *r.explicit_bound * (1 + cfg.slack));
        }
    }

    TEST_CASE("existential check records a refinement") {
        CheckConfig cfg;
        cfg.samples = 4;
        const CheckResult r = run_check("mw", Instance::grid(1, 4), cfg);
        CHECK(r.refined_constant.has_value());
        CHECK(r.status != "");
        if (r.status == "hypothesis-skipped")
            CHECK_FALSE(r.pass);
    }

    TEST_CASE("hypothesis-skipped never counts as pass or failure") {
        Report rep;
        CheckResult a;
        a.status = "hypothesis-skipped";
        CheckResult b;
        b.status = "fail";
        CheckResult c;
        c.status = "pass";
        c.pass = true;
        rep.results = {a, b, c};
        CHECK(rep.failures() == 1);
        CHECK(Report{}.failures() == 0);
    }

    TEST_CASE("suite runs are deterministic and independent of the job count") {
        CheckConfig cfg;
        cfg.samples = 4;
        std::vector<SuiteEntry> entries;
        for (const char* id : {"disc_vs_H", "m_twosided", "duality", "mw"})
            entries.push_back({id, Instance::grid(1, 4), std::nullopt});
        const std::string one = report_json(run_suite(entries, cfg, 1));
        CHECK(one == report_json(run_suite(entries, cfg, 1)));
        CHECK(one == report_json(run_suite(entries, cfg, 3)));
        cfg.seed = 99;
        CHECK(report_json(run_suite(entries, cfg, 1)).find("\"seed\": 99") != std::string::npos);
    }

    TEST_CASE("csv layout") {
        Report rep;
        CheckResult c;
        c.check_id = "duality";
        c.instance = "two_point";
        c.lhs = 1;
        c.rhs = 2;
        c.measured_constant = 0.5;
        rep.results.push_back(c);
        CHECK(report_csv(rep) == "check_id,instance,lhs,rhs,ratio\nduality,two_point,1,2,0.5\n");
    }

    TEST_CASE("slope fit") {
        CHECK(fit_slope({1, 2, 3}, {2, 4, 8}) == doctest::Approx(1));
        CHECK(fit_slope({0, 1, 2, 3}, {1, 0.5, 0.25, 0.125}) == doctest::Approx(-1));
    }

    TEST_CASE("instances") {
        CHECK(Instance::grid(1, 5).label() == "grid-1d-level5");
        CHECK(Instance::grid(1, 5).refined().level == 6);
        CHECK(Instance::cantor(1.0 / 3, 4).refined().depth == 5);
        CHECK_FALSE(Instance::two_point().refinable());
        CHECK_THROWS_AS(Instance::two_point().refined(), Error);
        CHECK(Instance::cantor(1.0 / 3, 3).build().size() == 27);
    }

    TEST_CASE("default suite covers every check") {
        const auto suite = default_suite(CheckConfig{});
        std::set<std::string> seen;
        for (const auto& e : suite)
            seen.insert(e.check_id);
        CHECK(seen.size() == check_ids().size());
    }
}

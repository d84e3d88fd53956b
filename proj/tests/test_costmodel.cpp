#include <catch2/catch_amalgamated.hpp>

#include "dhrom/costmodel.hpp"
#include "dhrom/pipeline.hpp"
#include "dhrom/presets.hpp"

using namespace dhrom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("flop count formulas") {
    CHECK_THAT(c_fom(3.0, 2.0), WithinRel(2.0 * 3.0 * 5.0 * 2.0, 1e-15));
    CHECK_THAT(c_rom(2.0), WithinRel(8.0, 1e-15));
    // published operating point: P = 40012, Q = 86401 -> 2.77e14 flops
    CHECK_THAT(c_fom(40012.0, 86401.0), WithinRel(2.765e14, 5e-3));
    CHECK_THROWS_AS(c_fom(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(c_rom(0.0), std::invalid_argument);
}

TEST_CASE("break-even thresholds") {
    CHECK_THAT(p_min(1e6), WithinAbs(707.1, 0.1));
    CHECK_THAT(q_max(8012.0), WithinRel(1.28e8, 1e-2));
    // thresholds are consistent with the leading-order cost balance
    const double q = 5000.0;
    CHECK_THAT(2.0 * p_min(q) * p_min(q) * q, WithinRel((q + 1.0) * (q + 1.0), 1e-12));
    CHECK_THAT(ratio(8012.0, q_max(8012.0)), WithinAbs(1.0, 1e-3));
}

TEST_CASE("improvement ratio") {
    CHECK_THAT(ratio(4000.0, 1e6), WithinAbs(32.0, 0.5));
    SECTION("overhead adjustment") {
        CHECK_THAT(adjusted_ratio(32.0, 100.0, 0.0), WithinRel(32.0, 1e-15));
        CHECK(adjusted_ratio(32.0, 100.0, 100.0) < 32.0);
        CHECK_THAT(adjusted_ratio(32.0, 100.0, 100.0), WithinRel(0.5 * 31.0 + 1.0, 1e-12));
        CHECK_THROWS_AS(adjusted_ratio(32.0, 0.0, 1.0), std::invalid_argument);
    }
    SECTION("report bundles the formulas") {
        const CostReport r = cost_report(4000.0, 1e6);
        CHECK(r.fom_flops == c_fom(4000.0, 1e6));
        CHECK(r.rom_flops == c_rom(1e6));
        CHECK(r.improvement == ratio(4000.0, 1e6));
    }
}

TEST_CASE("benchmark harness") {
    SECTION("run bookkeeping") {
        int calls = 0;
        const BenchResult r = detail::bench_kernel([&] { ++calls; }, 3);
        CHECK(calls == 4);  // warm-up plus measured runs
        CHECK(r.runs == 3);
        REQUIRE(r.wall_times.size() == 3);
        CHECK(r.best <= r.mean);
        CHECK(r.mean <= r.worst);
        CHECK_THROWS_AS(detail::bench_kernel([] {}, 0), std::invalid_argument);
    }
    SECTION("fom kernel timing is positive") {
        const PipeConfig cfg = presets::dn25();
        const LinearSystem sys = assemble(cfg, Discretization{51, 0.3});
        const BenchResult r = bench_fom(sys, 1.0, 0.0, 0.3, 200, 3);
        CHECK(r.mean > 0.0);
    }
}

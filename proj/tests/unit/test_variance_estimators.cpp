#include <catch_amalgamated.hpp>

#include <cmath>

#include "estlab/datasets.hpp"
#include "estlab/errors.hpp"
#include "estlab/variance_estimators.hpp"

using namespace estlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const PartialMomentTable kTable = murthy67_moments();
constexpr int kN = 7, kNPrime = 15;

double row(const std::vector<VarRow>& rows, const std::string& id) {
    for (const auto& r : rows) {
        if (r.id == id) return r.mse;
    }
    FAIL("missing row " << id);
    return 0;
}

}  // namespace

TEST_CASE("variance of the sample variance") {
    const auto v = var_sy2(kTable, kN);
    CHECK_THAT(v.relative, WithinRel(2.726 / 7, 1e-12));
    CHECK_FALSE(v.absolute.has_value());
    const auto a = var_sy2(kTable, kN, 4.0);
    CHECK_THAT(*a.absolute, WithinRel(16 * 2.726 / 7, 1e-12));
    CHECK_THROWS_AS(var_sy2(kTable, 1), Error);
}

TEST_CASE("own-optimum shape of the x family") {
    const auto m = starred_moments(kTable);
    CHECK_THAT(m.d220 / m.d040, WithinRel(1.10094, 1e-5));
    const auto opt = var_optima(kTable, kN, kNPrime, VarOptimaMode::grid);
    CHECK_THAT(opt.single.p * opt.single.x1(), WithinRel(1.10094, 1e-5));
}

TEST_CASE("point values at the truth") {
    const VarianceFamilyParams v = VarianceFamilyParams::from_shape(0.7, 0.4, 1.5, 2);
    const auto t = var_point({5, 3, 2, 3, 2}, v);
    for (double x : t) CHECK_THAT(x, WithinRel(5.0, 1e-14));
    const auto u = var_point_twophase({5, 3, 2, 3, 2, 2}, v);
    for (double x : u) CHECK_THAT(x, WithinRel(5.0, 1e-14));
    CHECK_THAT(var_point({5, 6, 2, 3, 2}, v)[0], WithinRel(2.5, 1e-15));
}

TEST_CASE("fractional power of a negative base is a domain error") {
    const VarianceFamilyParams v = VarianceFamilyParams::from_shape(2, 0.4, 0.5, 1);
    CHECK_THROWS_AS(var_point({5, 6, 2, 3, 2}, v), Error);
}

TEST_CASE("family members reduce to the fixed estimators") {
    const auto m = starred_moments(kTable);
    const auto half = var_single_report(kTable, kN, VarianceFamilyParams::from_shape(0.5, -0.5));
    CHECK_THAT(row(half, "t5"), WithinRel(row(half, "t2"), 1e-14));
    CHECK_THAT(row(half, "t6"), WithinRel(row(half, "t3"), 1e-14));
    const auto one = var_single_report(kTable, kN, VarianceFamilyParams::from_shape(1.0, 0.3));
    CHECK_THAT(row(one, "t5"), WithinRel(row(one, "t1"), 1e-14));
    for (double u : {0.3, 1.1}) {
        for (double w : {-0.4, 0.6}) {
            CHECK_THAT(t7_quadratic(m, 1, u, w), WithinRel(m.d400 + u * u * m.d040 - 2 * u * m.d220, 1e-14));
            CHECK_THAT(t7_quadratic(m, 0, u, w), WithinRel(m.d400 + w * w * m.d004 - 2 * w * m.d202, 1e-14));
            const double inv = 1.0 / kN - 1.0 / kNPrime;
            CHECK_THAT(t7p_quadratic(m, kN, kNPrime, 1, u, w),
                       WithinRel(m.d400 / kN + inv * (u * u * m.d040 - 2 * u * m.d220), 1e-14));
            CHECK_THAT(t7p_quadratic(m, kN, kNPrime, 0, u, w),
                       WithinRel(m.d400 / kN + (w * w * m.d004 - 2 * w * m.d202) / kNPrime, 1e-14));
        }
    }
}

TEST_CASE("MSEs depend on the constants only through x1 and x2") {
    VarianceFamilyParams a;
    a.a = 2;
    a.b = 1;
    a.c = 4;
    a.d = 2;
    VarianceFamilyParams b = a;
    b.a = 6;
    b.b = 3;
    b.c = 3;
    b.d = 1.5;
    const auto ra = var_single_report(kTable, kN, a);
    const auto rb = var_single_report(kTable, kN, b);
    for (std::size_t i = 0; i < ra.size(); ++i) CHECK(ra[i].mse == rb[i].mse);
    // p x1 is what matters, not p and x1 separately
    const auto c = var_single_report(kTable, kN, VarianceFamilyParams::from_shape(0.6, 0.2, 2, 1));
    const auto d = var_single_report(kTable, kN, VarianceFamilyParams::from_shape(1.2, 0.2, 1, 1));
    CHECK_THAT(row(c, "t5"), WithinRel(row(d, "t5"), 1e-14));
}

TEST_CASE("grid optima dominate a dense parameter sweep") {
    const auto opt = var_optima(kTable, kN, kNPrime, VarOptimaMode::grid);
    const auto best = var_single_report(kTable, kN, opt);
    const auto m = starred_moments(kTable);
    for (int i = 0; i <= 100000; ++i) {
        const double s = -3 + 6.0 * i / 100000;
        const auto r = var_single_report(kTable, kN, VarianceFamilyParams::from_shape(s, s));
        if (row(r, "t5") < row(best, "t5") * (1 - 1e-12) || row(r, "t6") < row(best, "t6") * (1 - 1e-12)) {
            FAIL("grid point " << s << " beats the optimum");
        }
        const double k = -3 + 6.0 * i / 100000;
        const double t7 = t7_quadratic(m, k, opt.singleT7.p * opt.singleT7.x1(), opt.singleT7.q * opt.singleT7.x2()) / kN;
        if (t7 < row(best, "t7") * (1 - 1e-12)) FAIL("k7 = " << k << " beats the optimum");
    }
    CHECK_THAT(row(best, "t5"), WithinRel((m.d400 - m.d220 * m.d220 / m.d040) / kN, 1e-12));
    CHECK_THAT(row(best, "t6"), WithinRel((m.d400 - m.d202 * m.d202 / m.d004) / kN, 1e-12));
    CHECK(row(best, "t7") <= std::min(row(best, "t5"), row(best, "t6")) * (1 + 1e-12));
}

TEST_CASE("joint optimum of t7 is no worse than the grid optimum") {
    const auto g = var_optima(kTable, kN, kNPrime, VarOptimaMode::grid);
    const auto j = var_optima(kTable, kN, kNPrime, VarOptimaMode::joint);
    CHECK(row(var_single_report(kTable, kN, j), "t7") <= row(var_single_report(kTable, kN, g), "t7") * (1 + 1e-12));
    CHECK(row(var_twophase_report(kTable, kN, kNPrime, j), "t7'") <=
          row(var_twophase_report(kTable, kN, kNPrime, g), "t7'") * (1 + 1e-12));
}

TEST_CASE("single-phase efficiencies") {
    const auto r = var_single_report(kTable, kN, var_optima(kTable, kN, kNPrime, VarOptimaMode::grid));
    CHECK_THAT(r[1].pre, WithinRel(636.9158, 1e-6));
    CHECK_THAT(r[2].pre, WithinRel(248.0436, 1e-6));
    CHECK_THAT(r[5].pre, WithinRel(667.2895, 1e-6));
    const auto minus = var_single_report(kTable, kN, var_optima(kTable, kN, kNPrime, VarOptimaMode::grid),
                                         T3Sign::printed_minus);
    CHECK(minus[3].mse < r[3].mse);
}

TEST_CASE("two-phase MSEs as the first phase grows") {
    const auto opt = var_optima(kTable, kN, kNPrime, VarOptimaMode::grid);
    double prev2 = INFINITY, prev5 = INFINITY, prev3 = -INFINITY;
    for (int np : {8, 10, 15, 30, 100, 1000}) {
        const auto r = var_twophase_report(kTable, kN, np, var_optima(kTable, kN, np, VarOptimaMode::grid));
        CHECK(row(r, "t2'") <= prev2);
        CHECK(row(r, "t5'") <= prev5);
        // with the product-type sign t3' gets worse as the first phase grows
        CHECK(row(r, "t3'") >= prev3);
        prev2 = row(r, "t2'");
        prev5 = row(r, "t5'");
        prev3 = row(r, "t3'");
    }
    (void)opt;
}

TEST_CASE("a huge first phase collapses two-phase estimators onto single-phase ones") {
    const int big = 100000000;
    const auto p = VarianceFamilyParams::from_shape(0.8, 0.3);
    const auto two = var_twophase_report(kTable, kN, big, p);
    const auto one = var_single_report(kTable, kN, p);
    CHECK_THAT(row(two, "t2'"), WithinRel(row(one, "t2"), 1e-6));
    CHECK_THAT(row(two, "t5'"), WithinRel(row(one, "t5"), 1e-6));
    CHECK_THAT(row(two, "t6'"), WithinRel(row(one, "s_y^2"), 1e-6));
}

TEST_CASE("design checks") {
    CHECK_THROWS_AS(var_optima(kTable, 7, 7, VarOptimaMode::grid), Error);
    CHECK_THROWS_AS(var_optima(kTable, 7, 15, VarOptimaMode::grid, 0, 1), Error);
    VarianceFamilyParams v;
    v.c = v.d = 1;
    CHECK_THROWS_AS(v.x1(), Error);
}

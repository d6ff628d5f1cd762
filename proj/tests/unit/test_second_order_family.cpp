#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "estlab/datasets.hpp"
#include "estlab/errors.hpp"
#include "estlab/reproduction.hpp"
#include "estlab/second_order_family.hpp"

using namespace estlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr std::array<MeanEstimator, 5> kAll{MeanEstimator::t1, MeanEstimator::t2, MeanEstimator::t3,
                                            MeanEstimator::t4, MeanEstimator::t5};

MeanFamilyParams with(MeanEstimator e) {
    MeanFamilyParams p;
    p.estimator = e;
    return p;
}

MomentTable random_moments(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.05, 2.0), r(-0.95, 0.95), any(-1.0, 1.0);
    MomentTable m;
    const double c20 = u(gen), c02 = u(gen);
    m.set(2, 0, c20);
    m.set(0, 2, c02);
    m.set(1, 1, r(gen) * std::sqrt(c20 * c02));
    for (auto [p, q] : {std::pair{3, 0}, {2, 1}, {1, 2}, {0, 3}, {4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}}) {
        m.set(p, q, p + q == 4 ? u(gen) * 3 : any(gen));
    }
    return m;
}

}  // namespace

TEST_CASE("point estimator degeneracies") {
    auto t1 = with(MeanEstimator::t1);
    t1.alpha = 0;
    CHECK(mean_point_estimates(10, 5, 4, t1) == 10);
    t1.alpha = 1;
    CHECK_THAT(mean_point_estimates(10, 5, 4, t1), WithinRel(8.0, 1e-15));
    auto t2 = with(MeanEstimator::t2);
    CHECK_THAT(mean_point_estimates(10, 5, 4, t2), WithinRel(10.0 * 4 / 5, 1e-15));
    auto t4 = with(MeanEstimator::t4);
    t4.a = 0;
    t4.b = 1;
    t4.p = 1;
    CHECK_THAT(mean_point_estimates(10, 5, 4, t4), WithinRel(12.5, 1e-15));
}

TEST_CASE("point estimator reductions on random inputs") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.5, 20);
    for (int i = 0; i < 200; ++i) {
        const double y = u(gen), x = u(gen), X = u(gen);
        auto t1 = with(MeanEstimator::t1);
        auto t2 = with(MeanEstimator::t2);
        CHECK_THAT(mean_point_estimates(y, x, X, t1), WithinRel(y * X / x, 1e-12));
        CHECK_THAT(mean_point_estimates(y, x, X, t2), WithinRel(y * X / x, 1e-12));
        t1.alpha = 0;
        CHECK(mean_point_estimates(y, x, X, t1) == y);
    }
}

TEST_CASE("fractional power of a negative base is rejected") {
    auto t2 = with(MeanEstimator::t2);
    t2.beta = 3;
    t2.gExp = 0.5;
    try {
        (void)mean_point_estimates(10, 1, 9, t2);
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
}

TEST_CASE("linearization matches the point estimator near the truth") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int rep = 0; rep < 20; ++rep) {
        for (MeanEstimator est : kAll) {
            MeanFamilyParams q = with(est);
            q.alpha = u(gen);
            q.beta = u(gen);
            q.gExp = u(gen);
            q.w = u(gen);
            q.a = u(gen) * 0.3;
            q.b = u(gen) * 0.3;
            q.p = u(gen);
            q.lambdaExp = u(gen);
            q.delta = u(gen);
            const Series4 s = linearization(q);
            for (double e : {1e-3, -2e-3}) {
                const double exact = mean_point_estimates(1.0, 1.0 + e, 1.0, q);
                double series = 0;
                for (int i = 4; i >= 0; --i) series = series * e + s[static_cast<std::size_t>(i)];
                INFO(to_string(est) << " e=" << e);
                CHECK_THAT(series, WithinAbs(exact, 1e-11));
            }
        }
    }
}

TEST_CASE("first-order special cases") {
    std::mt19937_64 gen(1);
    const MomentTable m = random_moments(gen);
    const auto c = design_coefficients(100, 20);
    const double Y = 7.5;
    auto t1 = with(MeanEstimator::t1);
    t1.alpha = 0;
    CHECK_THAT(first_order_report(m, c, Y, t1).mse, WithinRel(Y * Y * c.L1 * m.at(0, 2), 1e-14));
    auto t3 = with(MeanEstimator::t3);
    t3.w = 1;
    const BiasMse r = first_order_report(m, c, Y, t3);
    CHECK_THAT(r.bias, WithinRel(-Y * c.L1 * m.at(1, 1), 1e-12));
    CHECK_THAT(r.mse, WithinRel(Y * Y * c.L1 * (m.at(0, 2) + m.at(2, 0) - 2 * m.at(1, 1)), 1e-12));
}

TEST_CASE("first-order optimum is common to all five families") {
    std::mt19937_64 gen(99);
    const auto c = design_coefficients(340, 70);
    for (int rep = 0; rep < 100; ++rep) {
        const MomentTable m = random_moments(gen);
        const double Y = 50;
        const double target = Y * Y * c.L1 * (m.at(0, 2) - m.at(1, 1) * m.at(1, 1) / m.at(2, 0));
        for (MeanEstimator est : kAll) {
            const FamilyOptimum o = family_optimum(m, c, Y, with(est));
            CHECK_THAT(o.mse1, WithinRel(target, 1e-12));
            CHECK_THAT(first_order_report(m, c, Y, o.params).mse, WithinRel(target, 1e-12));
        }
    }
}

TEST_CASE("optimum parameters in closed form") {
    std::mt19937_64 gen(5);
    const MomentTable m = random_moments(gen);
    const auto c = design_coefficients(50, 10);
    const double h = m.at(1, 1) / m.at(2, 0);
    CHECK_THAT(family_optimum(m, c, 3, with(MeanEstimator::t1)).parameter, WithinRel(h, 1e-12));
    CHECK_THAT(family_optimum(m, c, 3, with(MeanEstimator::t2)).parameter, WithinRel(h, 1e-12));
}

TEST_CASE("grid search never beats the closed-form optimum") {
    std::mt19937_64 gen(8);
    const MomentTable m = random_moments(gen);
    const auto c = design_coefficients(60, 12);
    const double Y = 4;
    for (MeanEstimator est : kAll) {
        const FamilyOptimum o = family_optimum(m, c, Y, with(est));
        double best = INFINITY;
        for (int i = 0; i <= 10000; ++i) {
            MeanFamilyParams q = o.params;
            const double v = o.parameter - 5 + 10.0 * i / 10000;
            switch (est) {
                case MeanEstimator::t1: q.alpha = v; break;
                case MeanEstimator::t2: q.beta = v; break;
                case MeanEstimator::t3: q.w = v; break;
                case MeanEstimator::t4: q.b = v; break;
                case MeanEstimator::t5: q.lambdaExp = v; break;
            }
            best = std::min(best, first_order_report(m, c, Y, q).mse);
        }
        INFO(to_string(est));
        CHECK(best >= o.mse1 * (1 - 1e-9));
        CHECK(best <= o.mse1 * (1 + 1e-4));
    }
}

TEST_CASE("flat objective") {
    MomentTable m;
    m.set(2, 0, 0);
    m.set(0, 2, 1);
    m.set(1, 1, 0);
    try {
        (void)family_optimum(m, design_coefficients(20, 5), 1, with(MeanEstimator::t1));
        FAIL("expected degenerate optimum");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate_optimum);
    }
}

TEST_CASE("zero higher-order coefficients collapse the second order") {
    std::mt19937_64 gen(12);
    const MomentTable m = random_moments(gen);
    DesignCoefficients c = design_coefficients(80, 16);
    c.L2 = c.L3 = c.L4 = 0;
    for (MeanEstimator est : kAll) {
        MeanFamilyParams q = with(est);
        q.alpha = 0.7;
        q.beta = 0.4;
        q.gExp = 1.3;
        q.w = 0.6;
        q.a = 0.2;
        q.b = 0.9;
        q.p = 1.5;
        q.lambdaExp = 0.8;
        q.delta = 0.3;
        for (ExpansionForm form : {ExpansionForm::printed, ExpansionForm::derived}) {
            const BiasMse one = first_order_report(m, c, 10, q, form);
            const BiasMse two = second_order_report(m, c, 10, q, form);
            INFO(to_string(est));
            CHECK_THAT(two.bias, WithinAbs(one.bias, 1e-12 * (1 + std::abs(one.bias))));
            CHECK_THAT(two.mse, WithinAbs(one.mse, 1e-12 * (1 + std::abs(one.mse))));
        }
    }
}

TEST_CASE("missing moments are reported") {
    MomentTable m;
    m.set(2, 0, 0.5);
    m.set(1, 1, 0.2);
    try {
        (void)first_order_report(m, design_coefficients(20, 5), 1, with(MeanEstimator::t1));
        FAIL("expected incomplete input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::incomplete_input);
        CHECK(std::string(e.what()).find("C_02") != std::string::npos);
    }
}

TEST_CASE("village moments with the back-solved C20") {
    const double c20 = backsolve_c20(39.217225);
    CHECK_THAT(c20, WithinRel(0.5557, 1e-4));
    const MomentTable m = aligarh_moments(c20);
    const auto c = design_coefficients(340, 70);
    const double Y = 73.76765;
    for (MeanEstimator est : kAll) {
        CHECK_THAT(family_optimum(m, c, Y, with(est)).mse1, WithinRel(39.217225, 1e-12));
    }
    const auto o = family_optimum(m, c, Y, with(MeanEstimator::t1));
    CHECK_THAT(second_order_report(m, c, Y, o.params).bias, WithinRel(0.004424, 5e-3));
}

TEST_CASE("single-stratum report equals the SRSWOR report") {
    PopulationColumns cols;
    cols.y = {3, 7, 4, 9, 6, 12, 5, 8};
    cols.x = std::vector<double>{2, 5, 3, 6, 4, 9, 4, 5};
    cols.stratum = std::vector<std::string>(8, "s");
    const FinitePopulation p(cols);
    const auto strat = StratifiedPopulation::from_population(p, {{"s", 3}});
    const MomentTable m = MomentTable::from_population(p);
    const auto c = design_coefficients(8, 3);
    const double Y = strat.meanY();
    for (MeanEstimator est : kAll) {
        const MeanFamilyParams q = with(est);
        const BiasMse a = stratified_report(strat, Y, q, 1);
        const BiasMse b = first_order_report(m, c, Y, q);
        CHECK_THAT(a.mse, WithinRel(b.mse, 1e-12));
        CHECK_THAT(a.bias, WithinAbs(b.bias, 1e-12 * (1 + std::abs(b.bias))));
        const BiasMse a2 = stratified_report(strat, Y, q, 2);
        const BiasMse b2 = second_order_report(m, c, Y, q);
        CHECK_THAT(a2.mse, WithinRel(b2.mse, 1e-10));
    }
}

TEST_CASE("stratified first-order MSE equals the enumerated linearized MSE") {
    PopulationColumns cols;
    cols.y = {3, 7, 4, 9, 6, 12, 15, 11, 18};
    cols.x = std::vector<double>{2, 5, 3, 6, 4, 9, 10, 8, 14};
    cols.stratum = std::vector<std::string>{"a", "a", "a", "a", "a", "b", "b", "b", "b"};
    const FinitePopulation p(cols);
    const auto strat = StratifiedPopulation::from_population(p, {{"a", 2}, {"b", 2}});
    const double Y = strat.meanY(), X = strat.meanX();
    // t1 at alpha = 1 linearizes to Y (e0 - e1).
    double sum = 0;
    int count = 0;
    for (int a0 = 0; a0 < 5; ++a0) {
        for (int a1 = a0 + 1; a1 < 5; ++a1) {
            for (int b0 = 5; b0 < 9; ++b0) {
                for (int b1 = b0 + 1; b1 < 9; ++b1) {
                    const double ybar = 5.0 / 9 * (cols.y[a0] + cols.y[a1]) / 2 + 4.0 / 9 * (cols.y[b0] + cols.y[b1]) / 2;
                    const double xbar =
                        5.0 / 9 * ((*cols.x)[a0] + (*cols.x)[a1]) / 2 + 4.0 / 9 * ((*cols.x)[b0] + (*cols.x)[b1]) / 2;
                    const double d = Y * ((ybar / Y - 1) - (xbar / X - 1));
                    sum += d * d;
                    ++count;
                }
            }
        }
    }
    REQUIRE(count == 60);
    CHECK_THAT(stratified_report(strat, Y, with(MeanEstimator::t1), 1).mse, WithinRel(sum / count, 1e-12));
}

TEST_CASE("D3 defaults to the continued pattern") {
    MeanFamilyParams q = with(MeanEstimator::t4);
    q.a = 0.2;
    q.b = 0.7;
    q.p = 2.5;
    CHECK_THAT(q.D3(), WithinRel(q.D2() * 0.5 * (2.5 - 3) / 4, 1e-15));
    q.D3input = 0.125;
    CHECK(q.D3() == 0.125);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "estlab/datasets.hpp"
#include "estlab/errors.hpp"
#include "estlab/moments.hpp"
#include "estlab/sampling_oracle.hpp"

using namespace estlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FinitePopulation xy_pop(const std::vector<double>& x, const std::vector<double>& y) {
    PopulationColumns c;
    c.y = y;
    c.x = x;
    return FinitePopulation(c);
}

FinitePopulation two_strata() {
    PopulationColumns c;
    c.y = {3, 7, 4, 9, 6, 12, 15, 11, 18};
    c.x = std::vector<double>{2, 5, 3, 6, 4, 9, 10, 8, 14};
    c.stratum = std::vector<std::string>{"a", "a", "a", "a", "a", "b", "b", "b", "b"};
    return FinitePopulation(c);
}

}  // namespace

TEST_CASE("first central moments vanish") {
    const auto p = xy_pop({1, 3, 4, 8}, {2, 2, 5, 9});
    CHECK_THAT(cpq(p, 1, 0), WithinAbs(0, 1e-15));
    CHECK_THAT(cpq(p, 0, 1), WithinAbs(0, 1e-15));
    CHECK(cpq(p, 0, 0) == 1);
}

TEST_CASE("identical columns give C11 = C20") {
    const auto p = xy_pop({1, 3, 4, 8}, {1, 3, 4, 8});
    CHECK_THAT(cpq(p, 1, 1), WithinRel(cpq(p, 2, 0), 1e-14));
}

TEST_CASE("C21 by definition and by expanded raw sums") {
    std::vector<double> x, y;
    for (int i = 1; i <= 6; ++i) {
        x.push_back(i);
        y.push_back(i * i);
    }
    const double N = 6;
    double sx = 0, sy = 0, sx2 = 0, sxy = 0, sx2y = 0;
    for (int i = 0; i < 6; ++i) {
        sx += x[i];
        sy += y[i];
        sx2 += x[i] * x[i];
        sxy += x[i] * y[i];
        sx2y += x[i] * x[i] * y[i];
    }
    const double X = sx / N, Y = sy / N;
    const double mu21 = (sx2y - Y * sx2 - 2 * X * sxy + 2 * X * Y * sx + X * X * sy - N * X * X * Y) / N;
    CHECK_THAT(cpq(xy_pop(x, y), 2, 1), WithinRel(mu21 / (X * X * Y), 1e-12));
}

TEST_CASE("C_pq is invariant to rescaling x") {
    const auto a = xy_pop({1, 3, 4, 8, 2}, {2, 2, 5, 9, 1});
    const auto b = xy_pop({3.5, 10.5, 14, 28, 7}, {2, 2, 5, 9, 1});
    for (int p = 0; p <= 4; ++p) {
        for (int q = 0; p + q <= 4; ++q) {
            CHECK_THAT(cpq(b, p, q), WithinAbs(cpq(a, p, q), 1e-12 * (1 + std::abs(cpq(a, p, q)))));
        }
    }
}

TEST_CASE("zero mean denominator") {
    const auto p = xy_pop({-1, 1, -2, 2}, {1, 2, 3, 4});
    CHECK_THROWS_AS(cpq(p, 1, 1), Error);
}

TEST_CASE("moment table lookups") {
    MomentTable m;
    m.set(2, 0, 0.5);
    CHECK(m.contains(2, 0));
    CHECK_FALSE(m.contains(0, 2));
    try {
        (void)m.at(0, 2);
        FAIL("expected incomplete input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::incomplete_input);
        CHECK(std::string(e.what()).find("C_02") != std::string::npos);
    }
    CHECK_THROWS_AS(m.set(3, 2, 1.0), Error);
}

TEST_CASE("partial moments self-normalize") {
    PopulationColumns c;
    c.y = {1, 4, 2, 8, 5, 7};
    c.x = std::vector<double>{2, 3, 3, 9, 4, 6};
    c.z = std::vector<double>{9, 1, 5, 2, 7, 3};
    const FinitePopulation p(c);
    CHECK_THAT(partial_pqr(p, 2, 0, 0), WithinAbs(1, 1e-14));
    CHECK_THAT(partial_pqr(p, 0, 2, 0), WithinAbs(1, 1e-14));
    CHECK_THAT(partial_pqr(p, 0, 0, 2), WithinAbs(1, 1e-14));
    const auto t = PartialMomentTable::from_population(p);
    CHECK(t.at(4, 0, 0) >= 1);
    CHECK_THAT(t.starred(4, 0, 0), WithinAbs(t.at(4, 0, 0) - 1, 1e-15));
    CHECK_THROWS_AS(t.starred(3, 1, 0), Error);
}

TEST_CASE("variance-ratio moments as printed") {
    const auto t = murthy67_moments();
    CHECK_THAT(t.starred(4, 0, 0), WithinAbs(2.726, 1e-12));
    CHECK_THAT(t.starred(0, 0, 4), WithinAbs(1.808, 1e-12));
    PartialMomentTable u;
    u.set_starred(2, 2, 0, 2.105);
    CHECK_THAT(u.at(2, 2, 0), WithinAbs(3.105, 1e-15));
}

TEST_CASE("Gaussian kurtosis from a large sample") {
    std::mt19937_64 gen(2024);
    std::normal_distribution<double> nd(50, 5);
    PopulationColumns c;
    c.x = std::vector<double>();
    c.z = std::vector<double>();
    for (int i = 0; i < 200000; ++i) {
        c.y.push_back(nd(gen));
        c.x->push_back(nd(gen));
        c.z->push_back(nd(gen));
    }
    const FinitePopulation p(c);
    CHECK_THAT(partial_pqr(p, 4, 0, 0), WithinAbs(3.0, 0.05));
    CHECK_THAT(partial_pqr(p, 2, 2, 0), WithinAbs(1.0, 0.03));
}

TEST_CASE("kurtosis bound on random data") {
    std::mt19937_64 gen(5);
    std::exponential_distribution<double> ed(1.0);
    for (int rep = 0; rep < 30; ++rep) {
        PopulationColumns c;
        c.x = std::vector<double>();
        c.z = std::vector<double>();
        for (int i = 0; i < 15; ++i) {
            c.y.push_back(1 + ed(gen));
            c.x->push_back(1 + ed(gen));
            c.z->push_back(1 + ed(gen));
        }
        const FinitePopulation p(c);
        CHECK(partial_pqr(p, 4, 0, 0) >= 1 - 1e-12);
        CHECK(partial_pqr(p, 0, 4, 0) >= 1 - 1e-12);
        CHECK(cpq(p, 4, 0) >= 0);
    }
}

TEST_CASE("single stratum reduces to SRSWOR") {
    PopulationColumns c;
    c.y = {3, 7, 4, 9, 6, 12};
    c.x = std::vector<double>{2, 5, 3, 6, 4, 9};
    c.stratum = std::vector<std::string>(6, "only");
    const FinitePopulation p(c);
    const auto s = StratifiedPopulation::from_population(p, {{"only", 3}});
    const auto d = design_coefficients(6, 3);
    CHECK_THAT(stratified_vrs(s, 2, 0), WithinRel(d.L1 * cpq(p, 0, 2), 1e-12));
    CHECK_THAT(stratified_vrs(s, 0, 2), WithinRel(d.L1 * cpq(p, 2, 0), 1e-12));
    CHECK_THAT(stratified_vrs(s, 1, 1), WithinRel(d.L1 * cpq(p, 1, 1), 1e-12));
    CHECK_THAT(stratified_vrs(s, 0, 3), WithinRel(d.L2 * cpq(p, 3, 0), 1e-12));
}

TEST_CASE("identical strata with equal allocation") {
    PopulationColumns c;
    const std::vector<double> y{3, 7, 4, 9, 6}, x{2, 5, 3, 6, 4};
    c.x = std::vector<double>();
    c.stratum = std::vector<std::string>();
    for (const char* h : {"a", "b"}) {
        for (std::size_t i = 0; i < y.size(); ++i) {
            c.y.push_back(y[i]);
            c.x->push_back(x[i]);
            c.stratum->push_back(h);
        }
    }
    const auto s = StratifiedPopulation::from_population(FinitePopulation(c), {{"a", 2}, {"b", 2}});
    double my = 0, mx = 0, sxy = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        my += y[i] / 5;
        mx += x[i] / 5;
    }
    for (std::size_t i = 0; i < y.size(); ++i) sxy += (y[i] - my) * (x[i] - mx) / 4;
    const double gamma = (1.0 - 2.0 / 5.0) / 2.0;
    CHECK_THAT(stratified_vrs(s, 1, 1), WithinRel(2 * 0.25 * gamma * sxy / (mx * my), 1e-12));
}

TEST_CASE("constant y within strata has no y variance") {
    PopulationColumns c;
    c.y = {5, 5, 5, 5, 9, 9, 9, 9};
    c.x = std::vector<double>{1, 2, 4, 6, 3, 7, 5, 2};
    c.stratum = std::vector<std::string>{"a", "a", "a", "a", "b", "b", "b", "b"};
    const auto s = StratifiedPopulation::from_population(FinitePopulation(c), {{"a", 2}, {"b", 2}});
    CHECK_THAT(stratified_vrs(s, 2, 0), WithinAbs(0, 1e-15));
    CHECK_THAT(stratified_vrs(s, 2, 2), WithinAbs(0, 1e-15));
}

TEST_CASE("exact V_rs against stratified enumeration") {
    const FinitePopulation p = two_strata();
    const auto s = StratifiedPopulation::from_population(p, {{"a", 2}, {"b", 2}});
    const auto& y = p.y();
    const auto& x = *p.columns().x;
    double Y = 0, X = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        Y += y[i] / 9;
        X += x[i] / 9;
    }
    // stratum a = units 0..4 (W 5/9), b = 5..8 (W 4/9)
    std::vector<std::array<double, 2>> ea, eb;
    std::vector<std::size_t> ca{0, 1}, cb{0, 1};
    do {
        ea.push_back({(y[ca[0]] + y[ca[1]]) / 2, (x[ca[0]] + x[ca[1]]) / 2});
    } while (next_combination(ca, 5));
    do {
        eb.push_back({(y[5 + cb[0]] + y[5 + cb[1]]) / 2, (x[5 + cb[0]] + x[5 + cb[1]]) / 2});
    } while (next_combination(cb, 4));
    REQUIRE(ea.size() == 10);
    REQUIRE(eb.size() == 6);
    for (int r = 0; r <= 4; ++r) {
        for (int q = 0; r + q <= 4; ++q) {
            double sum = 0;
            for (const auto& a : ea) {
                for (const auto& b : eb) {
                    const double ybar = 5.0 / 9 * a[0] + 4.0 / 9 * b[0];
                    const double xbar = 5.0 / 9 * a[1] + 4.0 / 9 * b[1];
                    sum += std::pow(ybar / Y - 1, r) * std::pow(xbar / X - 1, q);
                }
            }
            const double oracle = sum / 60;
            INFO("V_" << r << q);
            CHECK_THAT(stratified_vrs(s, r, q), WithinAbs(oracle, 1e-12 * (1 + std::abs(oracle))));
        }
    }
}

TEST_CASE("within-stratum V_rs drops cross-stratum fourth-order products") {
    const auto s = StratifiedPopulation::from_population(two_strata(), {{"a", 2}, {"b", 2}});
    CHECK_THAT(stratified_vrs(s, 2, 0, VrsMode::within_stratum), WithinRel(stratified_vrs(s, 2, 0), 1e-14));
    CHECK_THAT(stratified_vrs(s, 2, 1, VrsMode::within_stratum), WithinRel(stratified_vrs(s, 2, 1), 1e-14));
    CHECK(std::abs(stratified_vrs(s, 2, 2, VrsMode::within_stratum) - stratified_vrs(s, 2, 2)) > 1e-8);
}

TEST_CASE("stratum allocation errors") {
    const FinitePopulation p = two_strata();
    CHECK_THROWS_AS(StratifiedPopulation::from_population(p, {{"a", 2}}), Error);
    CHECK_THROWS_AS(StratifiedPopulation::from_population(p, {{"a", 5}, {"b", 2}}), Error);
}

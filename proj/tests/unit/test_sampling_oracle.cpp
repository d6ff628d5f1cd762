#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "estlab/datasets.hpp"
#include "estlab/errors.hpp"
#include "estlab/sampling_oracle.hpp"

using namespace estlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no estlab::Error thrown");
    return ErrorKind::io;
}

FinitePopulation pop2() { return FinitePopulation(*builtin_dataset("ch4-pop2").raw); }

EstimatorSpec mean_of_y(double target) {
    return {"ybar", [](const Draw& d) { return sample_mean(d.pop->y(), d.units); }, target};
}

EstimatorSpec ratio_est(double X, double target) {
    return {"ratio",
            [X](const Draw& d) { return sample_mean(d.pop->y(), d.units) * X / sample_mean(d.pop->x(), d.units); },
            target};
}

FinitePopulation small_pop(std::size_t N) {
    PopulationColumns c;
    c.x = std::vector<double>();
    for (std::size_t i = 1; i <= N; ++i) {
        c.x->push_back(static_cast<double>(i));
        c.y.push_back(static_cast<double>((i * i) % 7 + 1));
    }
    return FinitePopulation(c);
}

}  // namespace

TEST_CASE("binomial and combination ranking") {
    CHECK(binomial(10, 4) == 210);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(4, 5) == 0);
    CHECK(binomial(60, 30) == 118264581564861424ULL);
    CHECK(binomial(200, 100) == UINT64_MAX);

    std::vector<std::size_t> c(3), u(3);
    unrank_combination(0, 7, 3, c);
    CHECK(c == std::vector<std::size_t>{0, 1, 2});
    std::uint64_t r = 0;
    do {
        unrank_combination(r, 7, 3, u);
        CHECK(u == c);
        ++r;
    } while (next_combination(c, 7));
    CHECK(r == binomial(7, 3));
    CHECK(c == std::vector<std::size_t>{4, 5, 6});
}

TEST_CASE("sample mean is unbiased over all hive samples") {
    const FinitePopulation pop = pop2();
    DesignSpec spec;
    spec.n = 4;
    const auto r = enumerate_design(pop, spec, mean_of_y(52));
    CHECK(r.count == 210);
    CHECK(r.exact);
    CHECK_THAT(r.bias, WithinAbs(0, 1e-12));
    const auto c = design_coefficients(10, 4);
    CHECK_THAT(r.mse, WithinRel(c.lambda * 66.0, 1e-12));
    CHECK(design_sample_count(pop, spec) == 210);
}

TEST_CASE("systematic enumeration visits every start") {
    const FinitePopulation pop = small_pop(12);
    DesignSpec spec;
    spec.kind = DesignKind::systematic;
    spec.n = 3;
    std::vector<std::vector<std::size_t>> seen;
    const EstimatorSpec grab{"grab",
                             [&seen](const Draw& d) {
#pragma omp critical
                                 seen.emplace_back(d.units.begin(), d.units.end());
                                 return 0.0;
                             },
                             0};
    const auto r = enumerate_design(pop, spec, grab, Execution::serial);
    CHECK(r.count == 4);
    REQUIRE(seen.size() == 4);
    for (std::size_t s = 0; s < 4; ++s) CHECK(seen[s] == std::vector<std::size_t>{s, s + 4, s + 8});
    const auto m = enumerate_design(pop, spec, {"x", [](const Draw& d) { return sample_mean(d.pop->x(), d.units); }, 6.5});
    CHECK_THAT(m.bias, WithinAbs(0, 1e-12));
    spec.k = 5;
    CHECK(kind_of([&] { validate(spec, pop); }) == ErrorKind::design);
}

TEST_CASE("serial and parallel kernels agree bitwise") {
    const FinitePopulation pop = small_pop(20);
    DesignSpec spec;
    spec.n = 6;
    spec.replicates = 5000;
    spec.seed = 123;
    const std::vector<EstimatorSpec> est{mean_of_y(0), ratio_est(10.5, 0)};
    const auto a = monte_carlo(pop, spec, est, Execution::serial);
    const auto b = monte_carlo(pop, spec, est, Execution::parallel);
    const auto c = monte_carlo(pop, spec, est, Execution::parallel);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mean == b[i].mean);
        CHECK(a[i].mse == b[i].mse);
        CHECK(b[i].mean == c[i].mean);
    }
    const auto e1 = enumerate_design(pop, spec, est, Execution::serial);
    const auto e2 = enumerate_design(pop, spec, est, Execution::parallel);
    for (std::size_t i = 0; i < e1.size(); ++i) {
        CHECK(e1[i].mean == e2[i].mean);
        CHECK(e1[i].mse == e2[i].mse);
    }
    spec.seed = 124;
    CHECK(monte_carlo(pop, spec, est[0]).mean != a[0].mean);
}

TEST_CASE("Monte Carlo agrees with enumeration for the ratio estimator") {
    const FinitePopulation pop = pop2();
    DesignSpec spec;
    spec.n = 4;
    spec.replicates = 200000;
    const auto ex = enumerate_design(pop, spec, ratio_est(42, 52));
    const auto mc = monte_carlo(pop, spec, ratio_est(42, 52));
    CHECK_FALSE(mc.exact);
    CHECK(mc.count == 200000);
    CHECK(std::abs(mc.mean - ex.mean) < 4 * mc.mcStdError);
    CHECK(std::abs(mc.mse - ex.mse) < 4 * mc.mseStdError);
}

TEST_CASE("follow-up sizes") {
    CHECK(followup_size(0, 2) == 0);
    CHECK(followup_size(1, 2) == 1);
    CHECK(followup_size(1, 5) == 1);
    CHECK(followup_size(3, 2) == 2);
    CHECK(followup_size(5, 2) == 3);
    CHECK(followup_size(4, 3) == 1);
    CHECK(followup_size(10, 4) == 3);
    CHECK(followup_size(7, 1) == 7);
    CHECK_THROWS_AS(followup_size(3, 0.5), Error);
}

TEST_CASE("Hansen-Hurwitz draw edge cases") {
    Rng rng(1, 0);
    const std::vector<double> y{1, 2, 3, 4};
    const auto all = hansen_hurwitz_draw(y, std::vector<int>{1, 1, 1, 1}, 2, rng);
    CHECK(all.n2 == 0);
    CHECK(all.h2 == 0);
    CHECK_THAT(all.ybarStar, WithinAbs(2.5, 1e-15));
    const auto none = hansen_hurwitz_draw(y, std::vector<int>{0, 0, 0, 0}, 1, rng);
    CHECK(none.n1 == 0);
    CHECK(none.h2 == 4);
    CHECK_THAT(none.ybarStar, WithinAbs(2.5, 1e-15));
    const auto half = hansen_hurwitz_draw(y, std::vector<int>{1, 1, 0, 0}, 2, rng);
    CHECK(half.h2 == 1);
    CHECK((std::abs(half.ybarStar - (3 + 2 * 3.0) / 4) < 1e-15 || std::abs(half.ybarStar - (3 + 2 * 4.0) / 4) < 1e-15));
    CHECK_THROWS_AS(hansen_hurwitz_draw(y, std::vector<int>{1, 0}, 2, rng), Error);
}

TEST_CASE("follow-up subsampling is unbiased under SRSWOR") {
    PopulationColumns c = *builtin_dataset("ch4-pop2").raw;
    c.responder = std::vector<int>{1, 0, 1, 1, 0, 1, 0, 1, 1, 0};
    const FinitePopulation pop(c);
    DesignSpec spec;
    spec.kind = DesignKind::srswor_nonresponse;
    spec.n = 4;
    spec.nonresponse = NonResponseDesign{2};
    const EstimatorSpec ystar{"ystar", [](const Draw& d) { return *d.ybarStar; }, 52};
    const auto r = enumerate_design(pop, spec, ystar);
    CHECK_THAT(r.bias, WithinAbs(0, 1e-12));
    CHECK(r.mse > design_coefficients(10, 4).lambda * 66.0);
    spec.replicates = 100000;
    const auto mc = monte_carlo(pop, spec, ystar);
    CHECK(std::abs(mc.mean - 52) < 4 * mc.mcStdError);

    DesignSpec bad;
    bad.kind = DesignKind::srswor_nonresponse;
    bad.n = 4;
    CHECK(kind_of([&] { validate(bad, pop); }) == ErrorKind::design);
    bad.nonresponse = NonResponseDesign{2};
    CHECK(kind_of([&] { validate(bad, pop2()); }) == ErrorKind::schema);
}

TEST_CASE("two-phase enumeration") {
    const FinitePopulation pop = small_pop(8);
    DesignSpec spec;
    spec.kind = DesignKind::two_phase;
    spec.n = 2;
    spec.nPrime = 4;
    CHECK(design_sample_count(pop, spec) == binomial(8, 4) * binomial(4, 2));
    const EstimatorSpec first{"xfirst", [](const Draw& d) { return sample_mean(d.pop->x(), d.firstPhase); }, 4.5};
    const EstimatorSpec second{"x", [](const Draw& d) { return sample_mean(d.pop->x(), d.units); }, 4.5};
    const auto r = enumerate_design(pop, spec, {first, second});
    CHECK_THAT(r[0].bias, WithinAbs(0, 1e-12));
    CHECK_THAT(r[1].bias, WithinAbs(0, 1e-12));
    CHECK(r[0].mse < r[1].mse);
    spec.nPrime = 2;
    CHECK(kind_of([&] { validate(spec, pop); }) == ErrorKind::design);
}

TEST_CASE("moment identities hold exactly") {
    const auto checks = verify_moment_identities(small_pop(12), 5);
    REQUIRE(checks.size() >= 10);
    for (const auto& c : checks) {
        INFO(c.identity << ": analytic " << c.analytic << ", enumerated " << c.enumerated);
        CHECK(c.residual < 1e-10);
    }
}

TEST_CASE("third moment of the sample mean vanishes when N = 2n") {
    const FinitePopulation pop = small_pop(10);
    DesignSpec spec;
    spec.n = 5;
    const double X = 5.5;
    const EstimatorSpec cube{"e1^3", [X](const Draw& d) { return std::pow(sample_mean(d.pop->x(), d.units) / X - 1, 3); }, 0};
    CHECK_THAT(enumerate_design(pop, spec, cube).mean, WithinAbs(0, 1e-15));
}

TEST_CASE("enumeration cap") {
    const FinitePopulation pop = small_pop(30);
    DesignSpec spec;
    spec.n = 15;
    spec.enumerationCap = 1000;
    CHECK(kind_of([&] { (void)enumerate_design(pop, spec, mean_of_y(0)); }) == ErrorKind::enumeration_too_large);
    CHECK(kind_of([&] { (void)verify_moment_identities(pop, 15, 1000); }) == ErrorKind::enumeration_too_large);
}

TEST_CASE("random stream determinism") {
    Rng a(9, 3), b(9, 3), c(9, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next();
        CHECK(va == b.next());
        differs = differs || va != c.next();
    }
    CHECK(differs);
    Rng u(5, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK((x >= 0 && x < 1));
        CHECK(u.below(7) < 7);
    }
}

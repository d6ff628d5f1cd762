#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "estlab/core_model.hpp"

namespace estlab {

/// xoshiro256** seeded through SplitMix64. Each (seed, stream) pair gets its own
/// generator, so replicate r draws the same numbers whichever thread runs it.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() noexcept;
    /// Uniform on {0, ..., bound - 1}; bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state) noexcept;

enum class DesignKind { srswor, systematic, srswor_nonresponse, two_phase };

[[nodiscard]] std::string_view to_string(DesignKind k) noexcept;

struct NonResponseDesign {
    double L = 2;  // inverse subsampling fraction
};

struct DesignSpec {
    DesignKind kind = DesignKind::srswor;
    std::size_t n = 0;
    std::optional<std::size_t> k;       // systematic interval
    std::optional<std::size_t> nPrime;  // first-phase size
    /// Hansen-Hurwitz follow-up, driven by the population's responder column.
    /// Required for srswor_nonresponse, optional for systematic.
    std::optional<NonResponseDesign> nonresponse;
    std::uint64_t seed = 42;
    std::uint64_t replicates = 10000;
    std::uint64_t enumerationCap = 10'000'000;
};

/// Throws design errors for inconsistent parameters.
void validate(const DesignSpec& spec, const FinitePopulation& pop);

/// One realised sample. `units` is the (second-phase) sample in draw order;
/// `firstPhase` is empty unless the design is two-phase.
struct Draw {
    const FinitePopulation* pop = nullptr;
    std::span<const std::size_t> units;
    std::span<const std::size_t> firstPhase;
    std::optional<double> ybarStar;  // Hansen-Hurwitz mean when non-response is modelled
};

[[nodiscard]] double sample_mean(const std::vector<double>& column, std::span<const std::size_t> units);
/// Divisor m - 1.
[[nodiscard]] double sample_var(const std::vector<double>& column, std::span<const std::size_t> units);

struct EstimatorSpec {
    std::string id;
    std::function<double(const Draw&)> fn;
    double target = 0;  // population quantity the estimator aims at
};

struct SimulationResult {
    std::string estimatorId;
    double mean = 0;
    double bias = 0;
    double mse = 0;
    double mcStdError = 0;   // of the mean; 0 when exact
    double mseStdError = 0;  // of the MSE; 0 when exact
    std::uint64_t count = 0;
    bool exact = false;
};

enum class Execution { serial, parallel };

/// Exact expectation over every sample the design can produce (every start for systematic,
/// every subset for SRSWOR, every follow-up subsample when non-response is modelled).
[[nodiscard]] std::vector<SimulationResult> enumerate_design(const FinitePopulation& pop, const DesignSpec& spec,
                                                             const std::vector<EstimatorSpec>& estimators,
                                                             Execution exec = Execution::parallel);

[[nodiscard]] SimulationResult enumerate_design(const FinitePopulation& pop, const DesignSpec& spec,
                                                const EstimatorSpec& estimator, Execution exec = Execution::parallel);

/// Results are bitwise identical for a given seed whatever the execution mode or thread count.
[[nodiscard]] std::vector<SimulationResult> monte_carlo(const FinitePopulation& pop, const DesignSpec& spec,
                                                        const std::vector<EstimatorSpec>& estimators,
                                                        Execution exec = Execution::parallel);

[[nodiscard]] SimulationResult monte_carlo(const FinitePopulation& pop, const DesignSpec& spec,
                                           const EstimatorSpec& estimator, Execution exec = Execution::parallel);

/// Number of samples enumerate_design would visit; saturates at UINT64_MAX.
[[nodiscard]] std::uint64_t design_sample_count(const FinitePopulation& pop, const DesignSpec& spec);

[[nodiscard]] std::uint64_t binomial(std::uint64_t n, std::uint64_t k) noexcept;

/// The `rank`-th k-subset of {0, ..., n - 1} in lexicographic order.
void unrank_combination(std::uint64_t rank, std::size_t n, std::size_t k, std::span<std::size_t> out);
/// Advances to the next k-subset in lexicographic order; false after the last.
bool next_combination(std::span<std::size_t> c, std::size_t n) noexcept;

/// h2 = max(1, round(n2 / L)) for n2 >= 1, 0 otherwise; halves round away from zero.
[[nodiscard]] std::size_t followup_size(std::size_t n2, double L);

struct HHDraw {
    double ybarStar = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t h2 = 0;
};

/// y and responder flags of the sampled units, in sample order.
[[nodiscard]] HHDraw hansen_hurwitz_draw(std::span<const double> ySample, std::span<const int> responderSample,
                                         double L, Rng& rng);

struct IdentityCheck {
    std::string identity;
    double analytic = 0;
    double enumerated = 0;
    double residual = 0;  // relative, or absolute when the analytic value is 0
};

/// Checks E[e0] = E[e1] = 0 and the moment identities (i)-(viii) against full SRSWOR enumeration.
/// Item (viii) uses E[e1^2 e0^2] = L3 C22 + L4 (C20 C02 + 2 C11^2).
[[nodiscard]] std::vector<IdentityCheck> verify_moment_identities(const FinitePopulation& pop, std::size_t n,
                                                                  std::uint64_t cap = 10'000'000);

}  // namespace estlab

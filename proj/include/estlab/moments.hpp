#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "estlab/core_model.hpp"

namespace estlab {

enum class MomentSource { raw_data, user_supplied };

/// C_pq = mu_pq / (meanX^p meanY^q) with mu_pq the divisor-N central product
/// moment of x^p y^q. p indexes x, q indexes y.
class MomentTable {
public:
    explicit MomentTable(MomentSource source = MomentSource::user_supplied);

    [[nodiscard]] static MomentTable from_population(const FinitePopulation& pop);

    void set(int p, int q, double value);
    [[nodiscard]] bool contains(int p, int q) const;
    /// Throws incomplete_input naming C_pq when absent.
    [[nodiscard]] double at(int p, int q) const;
    [[nodiscard]] MomentSource source() const noexcept { return source_; }
    [[nodiscard]] const std::map<std::pair<int, int>, double>& entries() const noexcept { return entries_; }

private:
    MomentSource source_;
    std::map<std::pair<int, int>, double> entries_;
};

[[nodiscard]] double cpq(const FinitePopulation& pop, int p, int q);

/// d_pqr = mu_pqr / (mu_200^{p/2} mu_020^{q/2} mu_002^{r/2}); p indexes y, q x, r z.
class PartialMomentTable {
public:
    explicit PartialMomentTable(MomentSource source = MomentSource::user_supplied);

    [[nodiscard]] static PartialMomentTable from_population(const FinitePopulation& pop, int max_order = 4);

    void set(int p, int q, int r, double value);
    /// Sets d_pqr from a starred value (d* = d - 1).
    void set_starred(int p, int q, int r, double starred_value);
    [[nodiscard]] bool contains(int p, int q, int r) const;
    [[nodiscard]] double at(int p, int q, int r) const;
    /// Only the paired even indices 400, 040, 004, 220, 202, 022 have a starred form.
    [[nodiscard]] double starred(int p, int q, int r) const;
    [[nodiscard]] MomentSource source() const noexcept { return source_; }
    [[nodiscard]] const std::map<std::array<int, 3>, double>& entries() const noexcept { return entries_; }

private:
    MomentSource source_;
    std::map<std::array<int, 3>, double> entries_;
};

[[nodiscard]] double partial_pqr(const FinitePopulation& pop, int p, int q, int r);

/// One stratum's sizes, means and raw central moments mu(p,q) (divisor N_h, p for x, q for y).
struct Stratum {
    std::string label;
    std::size_t N = 0;
    std::size_t n = 0;
    double W = 0;  // set by StratifiedPopulation
    double meanY = 0;
    double meanX = 0;
    std::map<std::pair<int, int>, double> central;

    [[nodiscard]] double gamma() const;
    [[nodiscard]] double k1() const;
    [[nodiscard]] double k2() const;
    [[nodiscard]] double k3() const;
    [[nodiscard]] double mu(int p, int q) const;
};

class StratifiedPopulation {
public:
    explicit StratifiedPopulation(std::vector<Stratum> strata);

    /// Builds strata from the population's stratum labels; `allocation` maps label to n_h.
    [[nodiscard]] static StratifiedPopulation from_population(const FinitePopulation& pop,
                                                              const std::map<std::string, std::size_t>& allocation);

    [[nodiscard]] const std::vector<Stratum>& strata() const noexcept { return strata_; }
    [[nodiscard]] std::size_t N() const noexcept { return N_; }
    [[nodiscard]] double meanY() const noexcept { return meanY_; }
    [[nodiscard]] double meanX() const noexcept { return meanX_; }

private:
    std::vector<Stratum> strata_;
    std::size_t N_ = 0;
    double meanY_ = 0;
    double meanX_ = 0;
};

/// exact: full E[e0^r e1^s] including cross-stratum products (the fourth-order
/// terms pick up sum_{h != h'} contributions).
/// within_stratum: only the single-stratum sums, as the stratified tables write them.
enum class VrsMode { exact, within_stratum };

/// V_rs = E[e0^r e1^s] under stratified SRSWOR, e0 for y and e1 for x, r + s <= 4.
[[nodiscard]] double stratified_vrs(const StratifiedPopulation& strat, int r, int s, VrsMode mode = VrsMode::exact);

}  // namespace estlab

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace estlab {

/// Divisor used for population variances and covariances.
enum class Divisor { N, NMinus1 };

[[nodiscard]] double divisor_value(Divisor d, std::size_t n) noexcept;

/// Column data handed to FinitePopulation. Optional columns are all-or-nothing.
struct PopulationColumns {
    std::vector<double> y;
    std::optional<std::vector<double>> x;
    std::optional<std::vector<double>> z;
    std::optional<std::vector<int>> phi1;
    std::optional<std::vector<int>> phi2;
    std::optional<std::vector<std::string>> stratum;
    std::optional<std::vector<int>> responder;
};

/// Ordered unit-level records. Validated on construction and immutable after.
class FinitePopulation {
public:
    explicit FinitePopulation(PopulationColumns columns);

    [[nodiscard]] std::size_t size() const noexcept { return cols_.y.size(); }

    [[nodiscard]] const std::vector<double>& y() const noexcept { return cols_.y; }
    [[nodiscard]] const std::vector<double>& x() const;
    [[nodiscard]] const std::vector<double>& z() const;
    [[nodiscard]] const std::vector<int>& phi1() const;
    [[nodiscard]] const std::vector<int>& phi2() const;
    [[nodiscard]] const std::vector<std::string>& stratum() const;
    [[nodiscard]] const std::vector<int>& responder() const;

    [[nodiscard]] bool has_x() const noexcept { return cols_.x.has_value(); }
    [[nodiscard]] bool has_z() const noexcept { return cols_.z.has_value(); }
    [[nodiscard]] bool has_phi() const noexcept { return cols_.phi1.has_value() && cols_.phi2.has_value(); }
    [[nodiscard]] bool has_stratum() const noexcept { return cols_.stratum.has_value(); }
    [[nodiscard]] bool has_responder() const noexcept { return cols_.responder.has_value(); }

    [[nodiscard]] const PopulationColumns& columns() const noexcept { return cols_; }

private:
    PopulationColumns cols_;
};

/// Population means, (co)variances, correlations and CVs of y, x, z.
/// Fields of an absent column are NaN and the matching has_* flag is false.
struct SummaryStats {
    std::size_t N = 0;
    bool has_x = false;
    bool has_z = false;
    double meanY = 0, meanX = 0, meanZ = 0;
    double varY = 0, varX = 0, varZ = 0;
    double covYX = 0, covYZ = 0, covZX = 0;
    double rhoYX = 0, rhoYZ = 0, rhoZX = 0;
    double cvY = 0, cvX = 0, cvZ = 0;
    double ratioR1 = 0, ratioR2 = 0;

    void require_x(const char* who) const;
    void require_z(const char* who) const;
};

/// Summary values as printed in a source table rather than computed from raw data.
struct PrintedSummary {
    std::size_t N = 0;
    double meanY = 0, meanX = 0, meanZ = 0;
    double varY = 0, varX = 0, varZ = 0;
    double rhoYX = 0, rhoYZ = 0, rhoZX = 0;
};

[[nodiscard]] SummaryStats summarize_numeric(const FinitePopulation& pop, Divisor divisor = Divisor::NMinus1);
[[nodiscard]] SummaryStats summary_from_printed(const PrintedSummary& s);

struct AttributeSummary {
    std::size_t N = 0;
    double meanY = 0, varY = 0;
    double P1 = 0, P2 = 0;
    double varPhi1 = 0, varPhi2 = 0;
    double covYPhi1 = 0, covYPhi2 = 0, covPhi1Phi2 = 0;
    double rhoPb1 = 0, rhoPb2 = 0, rhoPhi = 0;
    double cvY = 0, cvP1 = 0, cvP2 = 0;
    double kPb1 = 0, kPb2 = 0, kPhi = 0;
};

struct PrintedAttributeSummary {
    std::size_t N = 0;
    double meanY = 0, varY = 0;
    double P1 = 0, P2 = 0;
    double varPhi1 = 0, varPhi2 = 0;
    double rhoPb1 = 0, rhoPb2 = 0, rhoPhi = 0;
};

[[nodiscard]] AttributeSummary summarize_attributes(const FinitePopulation& pop, Divisor divisor = Divisor::NMinus1);
[[nodiscard]] AttributeSummary attribute_summary_from_printed(const PrintedAttributeSummary& s);

struct DesignCoefficients {
    std::size_t N = 0;
    std::size_t n = 0;
    std::optional<std::size_t> nPrime;
    double f = 0;
    double lambda = 0;
    double f1 = 0;
    double g = 0;
    double L1 = 0, L2 = 0, L3 = 0, L4 = 0;  // L3, L4 are NaN when N < 4
};

[[nodiscard]] DesignCoefficients design_coefficients(std::size_t N, std::size_t n,
                                                     std::optional<std::size_t> nPrime = std::nullopt);

}  // namespace estlab

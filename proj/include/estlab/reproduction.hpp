#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "estlab/render.hpp"

namespace estlab {

/// match and loose_match cells fail when their residual exceeds the tolerance;
/// documented_discrepancy cells are reported but never fail; property cells fail when violated.
enum class CellClass { match, loose_match, documented_discrepancy, property };

enum class CellStatus { match, loose_match, documented_discrepancy, mismatch, holds, violated };

[[nodiscard]] std::string_view to_string(CellClass c) noexcept;
[[nodiscard]] std::string_view to_string(CellStatus s) noexcept;

struct ToleranceEntry {
    CellClass cls = CellClass::match;
    double tol = 0;
    bool absolute = false;  // residual is |computed - tabulated| instead of relative
};

struct ToleranceProfile {
    std::string name;
    std::map<std::string, ToleranceEntry> cells;  // keyed "table/cell"

    /// Throws validation when the cell has no entry.
    [[nodiscard]] const ToleranceEntry& at(const std::string& key) const;
};

[[nodiscard]] ToleranceProfile default_profile();
/// The default profile with every tolerance halved.
[[nodiscard]] ToleranceProfile strict_profile();
/// JSON {"name": ..., "cells": {"table/cell": {"class": ..., "tol": ..., "absolute": ...}}};
/// listed cells override `base`.
[[nodiscard]] ToleranceProfile profile_from_json(const std::string& text, const ToleranceProfile& base);
/// "default", "strict", or a path to a JSON file.
[[nodiscard]] ToleranceProfile load_profile(const std::string& nameOrPath);

struct ReproRow {
    std::string cellId;
    std::optional<double> tabulated;
    double computed = 0;
    std::optional<double> residual;
    ToleranceEntry tolerance;
    CellStatus status = CellStatus::match;
    std::string note;
};

struct ReproductionReport {
    std::string tableId;
    std::string profile;
    std::vector<ReproRow> rows;

    /// False when a match-class cell mismatches or a property is violated.
    [[nodiscard]] bool passed() const;
};

[[nodiscard]] const std::vector<std::string>& reproducible_tables();

/// Throws unknown_id for an unrecognised table.
[[nodiscard]] ReproductionReport reproduce_table(const std::string& tableId, const ToleranceProfile& profile);

[[nodiscard]] Table to_table(const ReproductionReport& r);

/// C20 making the common optimum first-order MSE equal `mse` for the aligarh constants.
[[nodiscard]] double backsolve_c20(double mse);

}  // namespace estlab

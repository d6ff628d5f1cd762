#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "estlab/core_model.hpp"
#include "estlab/moments.hpp"
#include "estlab/systematic_nonresponse.hpp"

namespace estlab {

struct Constant {
    std::string key;
    double value = 0;
    std::string citation;
    std::string note;         // typo or reading notes, empty when none
    bool calibrated = false;  // not printed in the source; fitted to a tabulated value
};

struct DatasetDescriptor {
    std::string id;
    std::string title;
    std::string source;
    std::vector<Constant> constants;
    std::optional<PopulationColumns> raw;
    std::vector<std::string> notes;

    [[nodiscard]] bool has(std::string_view key) const;
    /// Throws unknown_id when the key is absent.
    [[nodiscard]] const Constant& constant(std::string_view key) const;
    [[nodiscard]] double at(std::string_view key) const { return constant(key).value; }
};

[[nodiscard]] const std::vector<std::string>& builtin_dataset_ids();

/// Throws unknown_id for an unrecognised id.
[[nodiscard]] const DatasetDescriptor& builtin_dataset(std::string_view id);

/// Typed views of the builtin constants.
[[nodiscard]] SystematicInputs murthy_systematic_inputs();
[[nodiscard]] AttributeSummary pakrice_summary();
/// C20 is not stored; the caller supplies it. C12 takes the first printed value and C21 the second.
[[nodiscard]] MomentTable aligarh_moments(double c20);
[[nodiscard]] PartialMomentTable murthy67_moments();

enum class SummarySource { printed, printed_corrected, raw };
/// printed_corrected replaces the ch4-pop2 rho_zx by the raw-data value; raw needs a raw population.
[[nodiscard]] SummaryStats ch4_summary(std::string_view id, SummarySource source);

}  // namespace estlab

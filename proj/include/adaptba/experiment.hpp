#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adaptba/config.hpp"

namespace adaptba {

/// Result of an experiment: '#' comment lines, one header, numeric rows.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;
    std::vector<double> column_values(std::string_view name) const;
};

/// Comma separated, '.' decimal, comments prefixed with "# ".
void write_csv(std::ostream& out, const Table& table);

/// Writes to a sibling temporary file and renames it into place, so a failed
/// run never leaves a partial file behind.
void write_csv_file(const std::string& path, const Table& table);

/// Runs the spec's metric over its sweep. Columns: the sweep variable, the
/// per-type series in ascending k, then the overall series. The resolved
/// config is echoed in the comments.
Table run_experiment(const ExperimentSpec& spec);

/// Mean-model comparison of the spec's network against one with
/// spec.alt_type_probs, calibrated to equal mean signal and interference.
Table compare_mean_model(const ExperimentSpec& spec);

std::vector<std::string> figure_names();

/// Preset sweeps fig1..fig9. Network, power, mode and simulation settings are
/// taken from `base`; the type mix, K and sweep are fixed by the preset.
Table run_figure(std::string_view name, const ExperimentSpec& base = {});

}  // namespace adaptba

#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adaptba/allocation.hpp"
#include "adaptba/meta_distribution.hpp"
#include "adaptba/pathloss.hpp"
#include "adaptba/simulator.hpp"

namespace adaptba {

/// Invalid experiment configuration. what() names the offending field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Metric { SuccessProb, MetaDist, Throughput, ThroughputPerJoule, MeanModel, Simulate };
enum class SweepVariable { ThetaDb, X, Lambda, K };
enum class SweepScale { Linear, Log };

struct Sweep {
    SweepVariable variable = SweepVariable::ThetaDb;
    double start = -20.0;
    double stop = 20.0;
    /// Increment for linear sweeps.
    double step = 1.0;
    SweepScale scale = SweepScale::Linear;
    /// Number of log-spaced points (inclusive of both ends) for log sweeps.
    int points = 25;

    void validate() const;
    std::vector<double> values() const;

    bool operator==(const Sweep&) const = default;
};

/// Everything needed to run one experiment. Thresholds are in dB here and
/// converted to linear scale before any library call.
struct ExperimentSpec {
    Metric metric = Metric::SuccessProb;
    std::optional<Sweep> sweep;
    NetworkParams net{};
    BandwidthConfig ba{};
    SimConfig sim{};
    /// Fixed threshold (dB) when theta is not the sweep variable.
    double theta_db = -5.0;
    /// Fixed reliability when x is not the sweep variable.
    double x = 0.6;
    MetaMethod meta_method = MetaMethod::GilPelaez;
    std::vector<double> alt_type_probs;

    void validate() const;
    /// Fills in the default sweep for the metric when none was given.
    ExperimentSpec resolved() const;
    const Sweep& active_sweep() const;

    bool operator==(const ExperimentSpec&) const = default;
};

Sweep default_sweep(Metric metric);
/// Default range for a sweep variable; k runs over 1..chunks.
Sweep default_sweep_for(SweepVariable variable, int chunks);

/// Parses the sectioned key = value format (see configs/ for examples).
/// Throws ConfigError.
ExperimentSpec parse_spec(std::string_view text);
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Writes the spec back in the same format; parse_spec(format_spec(s)) == s.
std::string format_spec(const ExperimentSpec& spec);

/// Recovers the spec echoed as '#' comment lines at the top of a CSV file.
ExperimentSpec parse_spec_from_csv(std::string_view csv);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string_view to_string(Metric m);
std::string_view to_string(SweepVariable v);
std::optional<Metric> metric_from_string(std::string_view s);
std::optional<AllocationMode> mode_from_string(std::string_view s);

}  // namespace adaptba

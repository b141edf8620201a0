// Command-line front end: analytic sweeps, Monte Carlo runs and figure presets.
//
//   adaptba success-prob --config net.ini --out ps.csv
//   adaptba figure fig6 --out fig6.csv
//
// Exit codes: 0 success, 1 invalid configuration or arguments, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "adaptba/config.hpp"
#include "adaptba/errors.hpp"
#include "adaptba/experiment.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<std::int64_t> realizations;
    std::optional<std::string> alt_probs;
};

adaptba::ExperimentSpec build_spec(const CommonFlags& flags, std::optional<adaptba::Metric> metric) {
    adaptba::ExperimentSpec spec = flags.config.empty() ? adaptba::ExperimentSpec{} : adaptba::load_spec(flags.config);
    if (metric) spec.metric = *metric;
    if (flags.seed) spec.sim.seed = *flags.seed;
    if (flags.realizations) spec.sim.realizations = *flags.realizations;
    if (flags.mode) {
        const auto mode = adaptba::mode_from_string(*flags.mode);
        if (!mode) throw adaptba::ConfigError("--mode: expected random|contiguous, got '" + *flags.mode + "'");
        spec.ba.mode = *mode;
    }
    if (flags.alt_probs) {
        std::string text = "[experiment]\nalt_type_probs = " + *flags.alt_probs + "\n";
        spec.alt_type_probs = adaptba::parse_spec(text).alt_type_probs;
    }
    if (spec.metric == adaptba::Metric::MeanModel && spec.alt_type_probs.empty() && spec.ba.chunks == 3)
        spec.alt_type_probs = {0.3, 0.0, 0.7};
    spec.sim.validate();
    return spec.resolved();
}

void emit(const adaptba::Table& table, const std::string& out) {
    if (out.empty() || out == "-")
        adaptba::write_csv(std::cout, table);
    else
        adaptba::write_csv_file(out, table);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive bandwidth allocation in Poisson bipolar networks: analytic metrics and Monte Carlo"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", flags.config, "Experiment config file")->check(CLI::ExistingFile);
        cmd->add_option("--out", flags.out, "Output CSV path (stdout when omitted)");
        cmd->add_option("--seed", flags.seed, "Simulation seed");
        cmd->add_option("--mode", flags.mode, "Chunk allocation mode: random|contiguous");
        cmd->add_option("--realizations", flags.realizations, "Monte Carlo realizations")->check(CLI::PositiveNumber);
    };

    struct Verb {
        const char* name;
        adaptba::Metric metric;
        const char* help;
    };
    const Verb verbs[] = {
        {"success-prob", adaptba::Metric::SuccessProb, "Per-type and overall success probability"},
        {"meta-dist", adaptba::Metric::MetaDist, "SIR meta distribution (Gil-Pelaez or beta)"},
        {"throughput", adaptba::Metric::Throughput, "Shannon throughput per type and overall"},
        {"mean-model", adaptba::Metric::MeanModel, "Compare two type mixes at matched mean signal/interference"},
        {"simulate", adaptba::Metric::Simulate, "Monte Carlo estimates"},
    };
    std::optional<adaptba::Metric> chosen;
    for (const Verb& v : verbs) {
        CLI::App* cmd = app.add_subcommand(v.name, v.help);
        add_common(cmd);
        if (v.metric == adaptba::Metric::MeanModel)
            cmd->add_option("--alt-probs", flags.alt_probs, "Alternative type mix, comma separated");
        if (v.metric == adaptba::Metric::Throughput)
            cmd->add_flag_callback("--per-joule", [&] { chosen = adaptba::Metric::ThroughputPerJoule; },
                                   "Report throughput per Joule");
        cmd->callback([&chosen, m = v.metric] {
            if (!chosen) chosen = m;
        });
    }

    std::string figure;
    CLI::App* fig = app.add_subcommand("figure", "Run a figure preset (fig1..fig9)");
    fig->add_option("name", figure, "Preset name")->required()->check(CLI::IsMember(adaptba::figure_names()));
    add_common(fig);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        adaptba::Table table;
        if (fig->parsed()) {
            table = adaptba::run_figure(figure, build_spec(flags, std::nullopt));
        } else {
            table = adaptba::run_experiment(build_spec(flags, chosen));
        }
        emit(table, flags.out);
    } catch (const adaptba::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}

#include "adaptba/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace adaptba {

namespace pt = boost::property_tree;

namespace {

template <class E>
struct Named {
    E value;
    std::string_view name;
};

constexpr Named<Metric> kMetrics[] = {{Metric::SuccessProb, "success_prob"},
                                      {Metric::MetaDist, "meta_dist"},
                                      {Metric::Throughput, "throughput"},
                                      {Metric::ThroughputPerJoule, "throughput_per_joule"},
                                      {Metric::MeanModel, "mean_model"},
                                      {Metric::Simulate, "simulate"}};
constexpr Named<SweepVariable> kVariables[] = {{SweepVariable::ThetaDb, "theta_dB"},
                                               {SweepVariable::X, "x"},
                                               {SweepVariable::Lambda, "lambda"},
                                               {SweepVariable::K, "k"}};
constexpr Named<SweepScale> kScales[] = {{SweepScale::Linear, "linear"}, {SweepScale::Log, "log"}};
constexpr Named<AllocationMode> kModes[] = {{AllocationMode::Random, "random"},
                                            {AllocationMode::Contiguous, "contiguous"}};
constexpr Named<PathLossKind> kPathLoss[] = {{PathLossKind::Bounded, "bounded"},
                                             {PathLossKind::PowerLaw, "power_law"}};
constexpr Named<ConditionalMode> kConditional[] = {{ConditionalMode::ClosedFormGivenPhi, "closed_form"},
                                                   {ConditionalMode::FullyEmpirical, "empirical"}};
constexpr Named<Execution> kExecution[] = {{Execution::Parallel, "parallel"}, {Execution::Serial, "serial"}};
constexpr Named<MetaMethod> kMetaMethods[] = {{MetaMethod::GilPelaez, "gil_pelaez"}, {MetaMethod::Beta, "beta"}};

template <class E, std::size_t N>
std::optional<E> lookup(const Named<E> (&table)[N], std::string_view s) {
    for (const auto& e : table)
        if (e.name == s) return e.value;
    return std::nullopt;
}

template <class E, std::size_t N>
std::string_view name_of(const Named<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Reads one section, checking every key is known and converting values.
class SectionReader {
public:
    SectionReader(const pt::ptree& root, std::string section, std::vector<std::string> known)
        : section_(std::move(section)) {
        if (const auto child = root.get_child_optional(section_)) {
            node_ = &*child;
            for (const auto& [key, value] : *node_) {
                if (!value.empty()) throw ConfigError(field(key) + ": nested sections are not allowed");
                if (std::find(known.begin(), known.end(), key) == known.end())
                    throw ConfigError(field(key) + ": unknown key");
            }
        }
    }

    std::optional<std::string> raw(const std::string& key) const {
        if (!node_) return std::nullopt;
        if (auto v = node_->get_optional<std::string>(key)) return trim(*v);
        return std::nullopt;
    }

    void read(const std::string& key, double& out) const {
        if (auto v = raw(key)) out = to_double(key, *v);
    }

    template <class I>
        requires std::is_integral_v<I>
    void read(const std::string& key, I& out) const {
        if (auto v = raw(key)) {
            I parsed{};
            const auto res = std::from_chars(v->data(), v->data() + v->size(), parsed);
            if (res.ec != std::errc{} || res.ptr != v->data() + v->size())
                throw ConfigError(field(key) + ": expected an integer, got '" + *v + "'");
            out = parsed;
        }
    }

    template <class E, std::size_t N>
    void read(const std::string& key, E& out, const Named<E> (&table)[N]) const {
        if (auto v = raw(key)) {
            if (auto e = lookup(table, *v)) {
                out = *e;
                return;
            }
            std::string allowed;
            for (const auto& n : table) allowed += (allowed.empty() ? "" : "|") + std::string(n.name);
            throw ConfigError(field(key) + ": expected one of " + allowed + ", got '" + *v + "'");
        }
    }

    void read_list(const std::string& key, std::vector<double>& out) const {
        if (auto v = raw(key)) {
            out.clear();
            std::stringstream ss(*v);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
        }
    }

    std::string field(const std::string& key) const { return section_ + "." + key; }

private:
    double to_double(const std::string& key, const std::string& v) const {
        double parsed = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), parsed);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(parsed))
            throw ConfigError(field(key) + ": expected a number, got '" + v + "'");
        return parsed;
    }

    std::string section_;
    const pt::ptree* node_ = nullptr;
};

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t j = 0; j < values.size(); ++j) out += (j ? ", " : "") + format_double(values[j]);
    return out;
}

}  // namespace

std::string_view to_string(Metric m) { return name_of(kMetrics, m); }
std::string_view to_string(SweepVariable v) { return name_of(kVariables, v); }
std::optional<Metric> metric_from_string(std::string_view s) { return lookup(kMetrics, s); }
std::optional<AllocationMode> mode_from_string(std::string_view s) { return lookup(kModes, s); }

void Sweep::validate() const {
    if (scale == SweepScale::Linear) {
        if (!(step > 0.0)) throw ConfigError("sweep.step: must be > 0");
        if (!(start <= stop)) throw ConfigError("sweep.start: empty sweep range (start > stop)");
    } else {
        if (points < 1) throw ConfigError("sweep.points: must be >= 1");
        if (!(start > 0.0) || !(stop >= start))
            throw ConfigError("sweep.start: log sweeps need 0 < start <= stop");
    }
    if (variable == SweepVariable::X && (start < 0.0 || stop > 1.0))
        throw ConfigError("sweep.start: reliability sweep must stay within [0, 1]");
    if (variable == SweepVariable::Lambda && !(start > 0.0)) throw ConfigError("sweep.start: lambda must be > 0");
    if (variable == SweepVariable::K && !(start >= 1.0)) throw ConfigError("sweep.start: k must be >= 1");
    if (values().empty()) throw ConfigError("sweep: empty sweep range");
}

std::vector<double> Sweep::values() const {
    std::vector<double> out;
    if (scale == SweepScale::Log) {
        if (points < 1 || !(start > 0.0)) return out;
        if (points == 1) return {start};
        const double a = std::log(start);
        const double b = std::log(stop);
        for (int j = 0; j < points; ++j) out.push_back(std::exp(a + (b - a) * j / (points - 1)));
        out.back() = stop;
        return out;
    }
    if (!(step > 0.0) || start > stop) return out;
    const double slack = 1e-9 * step;
    for (int j = 0;; ++j) {
        const double v = start + j * step;
        if (v > stop + slack) break;
        out.push_back(variable == SweepVariable::K ? std::round(v) : v);
    }
    return out;
}

Sweep default_sweep_for(SweepVariable variable, int chunks) {
    switch (variable) {
        case SweepVariable::X:
            return {SweepVariable::X, 0.0, 1.0, 0.05, SweepScale::Linear, 25};
        case SweepVariable::Lambda:
            return {SweepVariable::Lambda, 0.01, 1.0, 1.0, SweepScale::Log, 25};
        case SweepVariable::K:
            return {SweepVariable::K, 1.0, static_cast<double>(chunks), 1.0, SweepScale::Linear, 25};
        case SweepVariable::ThetaDb:
            break;
    }
    return {SweepVariable::ThetaDb, -20.0, 20.0, 1.0, SweepScale::Linear, 25};
}

Sweep default_sweep(Metric metric) {
    switch (metric) {
        case Metric::MetaDist:
            return {SweepVariable::X, 0.0, 1.0, 0.05, SweepScale::Linear, 25};
        case Metric::Throughput:
        case Metric::ThroughputPerJoule:
            return {SweepVariable::Lambda, 0.01, 1.0, 1.0, SweepScale::Log, 25};
        case Metric::Simulate:
            return {SweepVariable::ThetaDb, -10.0, 10.0, 5.0, SweepScale::Linear, 25};
        case Metric::SuccessProb:
        case Metric::MeanModel:
            break;
    }
    return {SweepVariable::ThetaDb, -20.0, 20.0, 1.0, SweepScale::Linear, 25};
}

const Sweep& ExperimentSpec::active_sweep() const {
    if (!sweep) throw ConfigError("sweep: not resolved");
    return *sweep;
}

ExperimentSpec ExperimentSpec::resolved() const {
    ExperimentSpec out = *this;
    if (!out.sweep) out.sweep = default_sweep(metric);
    return out;
}

void ExperimentSpec::validate() const {
    net.validate();
    ba.validate();
    sim.validate();
    const Sweep& s = active_sweep();
    s.validate();
    if (!std::isfinite(theta_db)) throw ConfigError("experiment.theta_dB: must be finite");
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("experiment.x: must be in [0, 1]");
    const bool ok = [&] {
        switch (metric) {
            case Metric::SuccessProb:
                return s.variable == SweepVariable::ThetaDb || s.variable == SweepVariable::Lambda;
            case Metric::MetaDist:
                return s.variable == SweepVariable::X || s.variable == SweepVariable::ThetaDb;
            case Metric::Throughput:
            case Metric::ThroughputPerJoule:
                return s.variable == SweepVariable::Lambda || s.variable == SweepVariable::K;
            case Metric::MeanModel:
                return s.variable != SweepVariable::K;
            case Metric::Simulate:
                return s.variable == SweepVariable::ThetaDb || s.variable == SweepVariable::X;
        }
        return false;
    }();
    if (!ok)
        throw ConfigError("sweep.variable: '" + std::string(to_string(s.variable)) + "' is not supported for metric '" +
                          std::string(to_string(metric)) + "'");
    if (s.variable == SweepVariable::K && s.values().back() > ba.chunks)
        throw ConfigError("sweep.stop: k sweep exceeds bandwidth.K");
    if (metric == Metric::MeanModel) {
        if (alt_type_probs.empty()) throw ConfigError("experiment.alt_type_probs: required for mean_model");
        if (alt_type_probs.size() != static_cast<std::size_t>(ba.chunks))
            throw ConfigError("experiment.alt_type_probs: K mismatch, expected " + std::to_string(ba.chunks) +
                              " entries");
        BandwidthConfig alt = ba;
        alt.type_probs = alt_type_probs;
        try {
            alt.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("experiment.alt_type_probs: ") + e.what());
        }
    }
}

ExperimentSpec parse_spec(std::string_view text) {
    pt::ptree root;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& [name, _] : root) {
        if (name != "experiment" && name != "network" && name != "bandwidth" && name != "sim" && name != "sweep")
            throw ConfigError(name + ": unknown section or key outside a section");
    }

    ExperimentSpec spec;
    const SectionReader exp(root, "experiment", {"metric", "theta_dB", "x", "meta_method", "alt_type_probs"});
    exp.read("metric", spec.metric, kMetrics);
    exp.read("theta_dB", spec.theta_db);
    exp.read("x", spec.x);
    exp.read("meta_method", spec.meta_method, kMetaMethods);
    exp.read_list("alt_type_probs", spec.alt_type_probs);

    const SectionReader net(root, "network", {"lambda", "R", "pathloss", "alpha", "c0"});
    net.read("lambda", spec.net.lambda);
    net.read("R", spec.net.link_distance);
    net.read("pathloss", spec.net.pathloss.kind, kPathLoss);
    net.read("alpha", spec.net.pathloss.alpha);
    net.read("c0", spec.net.pathloss.c0);
    if (spec.net.pathloss.kind == PathLossKind::PowerLaw && !net.raw("c0")) spec.net.pathloss.c0 = 0.0;

    const SectionReader band(root, "bandwidth", {"K", "type_probs", "mode", "power"});
    band.read("K", spec.ba.chunks);
    if (spec.ba.chunks < 1 || spec.ba.chunks > kMaxChunks) throw ConfigError("bandwidth.K: must be in [1, 64]");
    const auto probs = band.raw("type_probs");
    if (!probs || *probs == "uniform")
        spec.ba.type_probs.assign(static_cast<std::size_t>(spec.ba.chunks), 1.0 / spec.ba.chunks);
    else
        band.read_list("type_probs", spec.ba.type_probs);
    band.read("mode", spec.ba.mode, kModes);
    band.read("power", spec.ba.power_per_chunk);

    const SectionReader sim(root, "sim",
                            {"window_radius", "realizations", "fading_draws", "seed", "conditional", "execution"});
    sim.read("window_radius", spec.sim.window_radius);
    sim.read("realizations", spec.sim.realizations);
    sim.read("fading_draws", spec.sim.fading_draws);
    sim.read("seed", spec.sim.seed);
    sim.read("conditional", spec.sim.conditional, kConditional);
    sim.read("execution", spec.sim.execution, kExecution);

    if (root.get_child_optional("sweep")) {
        const SectionReader sw(root, "sweep", {"variable", "start", "stop", "step", "scale", "points"});
        Sweep s = default_sweep(spec.metric);
        SweepVariable variable = s.variable;
        sw.read("variable", variable, kVariables);
        // Unset keys default per variable, not per metric.
        if (variable != s.variable) s = default_sweep_for(variable, spec.ba.chunks);
        sw.read("start", s.start);
        sw.read("stop", s.stop);
        sw.read("step", s.step);
        sw.read("scale", s.scale, kScales);
        sw.read("points", s.points);
        spec.sweep = s;
    }
    // Wrap library validation errors so every message names a field.
    try {
        spec.net.validate();
        spec.ba.validate();
        spec.sim.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (spec.sweep) spec.sweep->validate();
    return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

std::string format_spec(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "[experiment]\n"
        << "metric = " << to_string(spec.metric) << "\n"
        << "theta_dB = " << format_double(spec.theta_db) << "\n"
        << "x = " << format_double(spec.x) << "\n"
        << "meta_method = " << name_of(kMetaMethods, spec.meta_method) << "\n";
    if (!spec.alt_type_probs.empty()) out << "alt_type_probs = " << join(spec.alt_type_probs) << "\n";
    out << "\n[network]\n"
        << "lambda = " << format_double(spec.net.lambda) << "\n"
        << "R = " << format_double(spec.net.link_distance) << "\n"
        << "pathloss = " << name_of(kPathLoss, spec.net.pathloss.kind) << "\n"
        << "alpha = " << format_double(spec.net.pathloss.alpha) << "\n"
        << "c0 = " << format_double(spec.net.pathloss.c0) << "\n";
    out << "\n[bandwidth]\n"
        << "K = " << spec.ba.chunks << "\n"
        << "type_probs = " << join(spec.ba.type_probs) << "\n"
        << "mode = " << name_of(kModes, spec.ba.mode) << "\n"
        << "power = " << format_double(spec.ba.power_per_chunk) << "\n";
    out << "\n[sim]\n"
        << "window_radius = " << format_double(spec.sim.window_radius) << "\n"
        << "realizations = " << spec.sim.realizations << "\n"
        << "fading_draws = " << spec.sim.fading_draws << "\n"
        << "seed = " << spec.sim.seed << "\n"
        << "conditional = " << name_of(kConditional, spec.sim.conditional) << "\n"
        << "execution = " << name_of(kExecution, spec.sim.execution) << "\n";
    if (spec.sweep) {
        const Sweep& s = *spec.sweep;
        out << "\n[sweep]\n"
            << "variable = " << to_string(s.variable) << "\n"
            << "start = " << format_double(s.start) << "\n"
            << "stop = " << format_double(s.stop) << "\n"
            << "step = " << format_double(s.step) << "\n"
            << "scale = " << name_of(kScales, s.scale) << "\n"
            << "points = " << s.points << "\n";
    }
    return out.str();
}

ExperimentSpec parse_spec_from_csv(std::string_view csv) {
    std::string text;
    std::istringstream in{std::string(csv)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '#') break;
        std::string body = line.substr(1);
        if (!body.empty() && body[0] == ' ') body.erase(0, 1);
        // Lines of the form "@key: value" are run metadata, not config.
        if (!body.empty() && body[0] == '@') continue;
        text += body + "\n";
    }
    return parse_spec(text);
}

}  // namespace adaptba

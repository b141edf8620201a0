#include "adaptba/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "adaptba/analytic.hpp"
#include "adaptba/errors.hpp"
#include "adaptba/mean_model.hpp"
#include "adaptba/meta_distribution.hpp"
#include "adaptba/parallel.hpp"
#include "adaptba/simulator.hpp"

namespace adaptba {

std::size_t Table::column(std::string_view name) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j] == name) return j;
    throw std::out_of_range("no column named '" + std::string(name) + "'");
}

std::vector<double> Table::column_values(std::string_view name) const {
    const std::size_t j = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
}

void write_csv(std::ostream& out, const Table& table) {
    for (const auto& c : table.comments) out << (c.empty() ? "#" : "# " + c) << '\n';
    for (std::size_t j = 0; j < table.columns.size(); ++j) out << (j ? "," : "") << table.columns[j];
    out << '\n';
    char buf[32];
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.10g", row[j]);
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const Table& table) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".partial";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        write_csv(out, table);
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::filesystem::rename(tmp, target);
}

namespace {

void echo_spec(Table& table, const ExperimentSpec& spec) {
    std::istringstream in(format_spec(spec));
    std::string line;
    while (std::getline(in, line)) table.comments.push_back(line);
}

std::string type_column(std::string_view prefix, int k) { return std::string(prefix) + "_k" + std::to_string(k); }

// Evaluates row(value) for every sweep value, in parallel, keeping sweep order.
void fill_rows(Table& table, const ExperimentSpec& spec, const std::function<std::vector<double>(double)>& row) {
    const std::vector<double> values = spec.active_sweep().values();
    auto rows = map_indices(spec.sim.execution, static_cast<std::int64_t>(values.size()),
                            [&](std::int64_t j) { return row(values[static_cast<std::size_t>(j)]); });
    for (std::size_t j = 0; j < values.size(); ++j) {
        rows[j].insert(rows[j].begin(), values[j]);
        table.rows.push_back(std::move(rows[j]));
    }
}

void per_type_columns(Table& table, std::string_view prefix, int chunks) {
    for (int k = 1; k <= chunks; ++k) table.columns.push_back(type_column(prefix, k));
    table.columns.push_back(std::string(prefix) + "_overall");
}

Table success_prob_table(const ExperimentSpec& spec) {
    Table t;
    t.columns = {std::string(to_string(spec.active_sweep().variable))};
    per_type_columns(t, "ps", spec.ba.chunks);
    const bool theta_sweep = spec.active_sweep().variable == SweepVariable::ThetaDb;
    fill_rows(t, spec, [&](double v) {
        NetworkParams net = spec.net;
        if (!theta_sweep) net.lambda = v;
        const double theta = db_to_linear(theta_sweep ? v : spec.theta_db);
        std::vector<double> row;
        for (int k = 1; k <= spec.ba.chunks; ++k) row.push_back(success_prob_k(net, spec.ba, k, theta));
        row.push_back(success_prob_overall(net, spec.ba, theta));
        return row;
    });
    return t;
}

// Gil-Pelaez with the beta approximation as fallback when the inversion fails.
double meta_point(const ExperimentSpec& spec, const NetworkParams& net, const BandwidthConfig& ba, int k,
                  double theta, double x, std::atomic<int>& fallbacks) {
    if (spec.meta_method == MetaMethod::Beta) return meta_ccdf_beta(net, ba, k, theta, x);
    try {
        return meta_ccdf_gilpelaez(net, ba, k, theta, x);
    } catch (const NumericalError&) {
        ++fallbacks;
        return meta_ccdf_beta(net, ba, k, theta, x);
    }
}

double meta_point_overall(const ExperimentSpec& spec, const NetworkParams& net, const BandwidthConfig& ba,
                          double theta, double x, std::atomic<int>& fallbacks) {
    double s = 0.0;
    for (int k = 1; k <= ba.chunks; ++k)
        if (ba.type_prob(k) > 0.0) s += ba.type_prob(k) * meta_point(spec, net, ba, k, theta, x, fallbacks);
    return s;
}

void note_fallbacks(Table& t, int fallbacks) {
    if (fallbacks > 0) t.comments.push_back("@beta_fallbacks: " + std::to_string(fallbacks));
}

Table meta_dist_table(const ExperimentSpec& spec) {
    Table t;
    t.columns = {std::string(to_string(spec.active_sweep().variable))};
    per_type_columns(t, "F", spec.ba.chunks);
    const bool x_sweep = spec.active_sweep().variable == SweepVariable::X;
    std::atomic<int> fallbacks = 0;
    fill_rows(t, spec, [&](double v) {
        const double x = x_sweep ? v : spec.x;
        const double theta = db_to_linear(x_sweep ? spec.theta_db : v);
        std::vector<double> row;
        double overall = 0.0;
        for (int k = 1; k <= spec.ba.chunks; ++k) {
            row.push_back(meta_point(spec, spec.net, spec.ba, k, theta, x, fallbacks));
            overall += spec.ba.type_prob(k) * row.back();
        }
        row.push_back(overall);
        return row;
    });
    note_fallbacks(t, fallbacks);
    return t;
}

Table throughput_table(const ExperimentSpec& spec) {
    Table t;
    const Sweep& s = spec.active_sweep();
    const bool per_joule = spec.metric == Metric::ThroughputPerJoule;
    if (s.variable == SweepVariable::K) {
        t.columns = {"k", "throughput", "throughput_per_hz", "throughput_per_joule"};
        fill_rows(t, spec, [&](double v) {
            const int k = static_cast<int>(v);
            const double r = shannon_throughput_k(spec.net, spec.ba, k).value;
            return std::vector<double>{r, r / k, r / (k * spec.ba.power_per_chunk)};
        });
        return t;
    }
    t.columns = {"lambda"};
    per_type_columns(t, per_joule ? "RJ" : "R", spec.ba.chunks);
    fill_rows(t, spec, [&](double lambda) {
        NetworkParams net = spec.net;
        net.lambda = lambda;
        std::vector<double> row;
        double overall = 0.0;
        for (int k = 1; k <= spec.ba.chunks; ++k) {
            const double r = per_joule ? shannon_throughput_per_joule_k(net, spec.ba, k).value
                                       : shannon_throughput_k(net, spec.ba, k).value;
            row.push_back(r);
            overall += spec.ba.type_prob(k) * r;
        }
        row.push_back(overall);
        return row;
    });
    return t;
}

Table simulate_table(const ExperimentSpec& spec) {
    Table t;
    const Sweep& s = spec.active_sweep();
    const std::vector<double> values = s.values();
    const int K = spec.ba.chunks;
    t.columns = {std::string(to_string(s.variable))};
    for (int k = 1; k <= K; ++k) {
        t.columns.push_back(type_column("est", k));
        t.columns.push_back(type_column("se", k));
    }
    t.columns.push_back("est_overall");
    t.columns.push_back("se_overall");
    t.rows.assign(values.size(), {});
    for (std::size_t j = 0; j < values.size(); ++j) t.rows[j].push_back(values[j]);

    if (s.variable == SweepVariable::ThetaDb) {
        std::vector<double> thetas;
        for (double db : values) thetas.push_back(db_to_linear(db));
        for (int k = 1; k <= K; ++k) {
            const auto est = estimate_success_prob(spec.net, spec.ba, spec.sim, k, thetas);
            for (std::size_t j = 0; j < values.size(); ++j) {
                t.rows[j].push_back(est[j].value);
                t.rows[j].push_back(est[j].std_error);
            }
        }
        const auto overall = estimate_success_prob(spec.net, spec.ba, spec.sim, 0, thetas);
        for (std::size_t j = 0; j < values.size(); ++j) {
            t.rows[j].push_back(overall[j].value);
            t.rows[j].push_back(overall[j].std_error);
        }
        return t;
    }
    // Reliability sweep: per-type empirical meta distributions, mixed by p_k.
    std::vector<double> mix(values.size(), 0.0);
    std::vector<double> mix_var(values.size(), 0.0);
    for (int k = 1; k <= K; ++k) {
        const auto est = estimate_meta_distribution(spec.net, spec.ba, spec.sim, k, db_to_linear(spec.theta_db), values);
        const double p = spec.ba.type_prob(k);
        for (std::size_t j = 0; j < values.size(); ++j) {
            t.rows[j].push_back(est[j].value);
            t.rows[j].push_back(est[j].std_error);
            mix[j] += p * est[j].value;
            mix_var[j] += p * p * est[j].std_error * est[j].std_error;
        }
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        t.rows[j].push_back(mix[j]);
        t.rows[j].push_back(std::sqrt(mix_var[j]));
    }
    return t;
}

void note_matching(Table& t, const MeanModelPair& pair) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "@P_alt: %.17g", pair.alt_ba.power_per_chunk);
    t.comments.push_back(buf);
    std::snprintf(buf, sizeof buf, "@lambda_alt: %.17g", pair.alt_net.lambda);
    t.comments.push_back(buf);
}

}  // namespace

Table compare_mean_model(const ExperimentSpec& in) {
    ExperimentSpec spec = in.resolved();
    spec.metric = Metric::MeanModel;
    spec.validate();
    const MeanModelPair base_pair = match_means(spec.net, spec.ba, spec.alt_type_probs);
    Table t;
    const Sweep& s = spec.active_sweep();
    t.columns = {std::string(to_string(s.variable))};
    std::atomic<int> fallbacks = 0;
    switch (s.variable) {
        case SweepVariable::ThetaDb:
            t.columns.insert(t.columns.end(), {"ps_base", "ps_alt", "P_alt", "lambda_alt"});
            fill_rows(t, spec, [&](double db) {
                const double theta = db_to_linear(db);
                return std::vector<double>{success_prob_overall(base_pair.base_net, base_pair.base_ba, theta),
                                           success_prob_overall(base_pair.alt_net, base_pair.alt_ba, theta),
                                           base_pair.alt_ba.power_per_chunk, base_pair.alt_net.lambda};
            });
            break;
        case SweepVariable::X:
            t.columns.insert(t.columns.end(), {"F_base", "F_alt", "P_alt", "lambda_alt"});
            fill_rows(t, spec, [&](double x) {
                const double theta = db_to_linear(spec.theta_db);
                return std::vector<double>{
                    meta_point_overall(spec, base_pair.base_net, base_pair.base_ba, theta, x, fallbacks),
                    meta_point_overall(spec, base_pair.alt_net, base_pair.alt_ba, theta, x, fallbacks),
                    base_pair.alt_ba.power_per_chunk, base_pair.alt_net.lambda};
            });
            break;
        case SweepVariable::Lambda:
            t.columns.insert(t.columns.end(), {"R_base", "R_alt", "RJ_base", "RJ_alt", "P_alt", "lambda_alt"});
            fill_rows(t, spec, [&](double lambda) {
                NetworkParams net = spec.net;
                net.lambda = lambda;
                const MeanModelPair pair = match_means(net, spec.ba, spec.alt_type_probs);
                return std::vector<double>{shannon_throughput_overall(pair.base_net, pair.base_ba).value,
                                           shannon_throughput_overall(pair.alt_net, pair.alt_ba).value,
                                           shannon_throughput_per_joule_overall(pair.base_net, pair.base_ba).value,
                                           shannon_throughput_per_joule_overall(pair.alt_net, pair.alt_ba).value,
                                           pair.alt_ba.power_per_chunk, pair.alt_net.lambda};
            });
            break;
        case SweepVariable::K:
            throw ConfigError("sweep.variable: k sweeps are not supported for mean_model");
    }
    Table out;
    out.comments.push_back("@adaptba: mean_model");
    note_matching(out, base_pair);
    note_fallbacks(out, fallbacks);
    echo_spec(out, spec);
    out.columns = std::move(t.columns);
    out.rows = std::move(t.rows);
    return out;
}

Table run_experiment(const ExperimentSpec& in) {
    const ExperimentSpec spec = in.resolved();
    spec.validate();
    if (spec.metric == Metric::MeanModel) return compare_mean_model(spec);
    Table t;
    switch (spec.metric) {
        case Metric::SuccessProb: t = success_prob_table(spec); break;
        case Metric::MetaDist: t = meta_dist_table(spec); break;
        case Metric::Throughput:
        case Metric::ThroughputPerJoule: t = throughput_table(spec); break;
        case Metric::Simulate: t = simulate_table(spec); break;
        case Metric::MeanModel: break;
    }
    t.comments.insert(t.comments.begin(), "@adaptba: " + std::string(to_string(spec.metric)));
    echo_spec(t, spec);
    return t;
}

namespace {

std::vector<double> point_mass(int chunks, int type) {
    std::vector<double> p(static_cast<std::size_t>(chunks), 0.0);
    p[static_cast<std::size_t>(type - 1)] = 1.0;
    return p;
}

ExperimentSpec preset_base(const ExperimentSpec& base, int chunks) {
    ExperimentSpec s = base;
    s.ba.chunks = chunks;
    s.ba.type_probs.assign(static_cast<std::size_t>(chunks), 1.0 / chunks);
    s.alt_type_probs.clear();
    return s;
}

// Joins one column of each sub-table under new names. Sub-tables share the sweep.
Table join_columns(const std::vector<std::pair<Table, std::vector<std::pair<std::string, std::string>>>>& parts) {
    Table out;
    for (const auto& [table, picks] : parts)
        for (const auto& c : table.comments)
            if (c.rfind("@beta_fallbacks", 0) == 0) out.comments.push_back(c);
    out.columns.push_back(parts.front().first.columns.front());
    for (const auto& row : parts.front().first.rows) out.rows.push_back({row.front()});
    for (const auto& [table, picks] : parts) {
        for (const auto& [from, to] : picks) {
            out.columns.push_back(to);
            const auto values = table.column_values(from);
            for (std::size_t j = 0; j < values.size(); ++j) out.rows[j].push_back(values[j]);
        }
    }
    return out;
}

const std::vector<double> kVariableMix = {0.3, 0.0, 0.7};

}  // namespace

std::vector<std::string> figure_names() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

Table run_figure(std::string_view name, const ExperimentSpec& base) {
    const Sweep theta_sweep{SweepVariable::ThetaDb, -20.0, 20.0, 1.0, SweepScale::Linear, 41};
    const Sweep lambda_sweep{SweepVariable::Lambda, 0.01, 1.0, 1.0, SweepScale::Log, 25};
    ExperimentSpec s = preset_base(base, 3);
    Table out;

    auto three_mixes = [&](Metric metric, const Sweep& sweep, std::string_view src,
                           std::string_view prefix) -> Table {
        const std::vector<std::pair<std::string, std::vector<double>>> mixes = {
            {"p1", point_mass(3, 1)}, {"uniform", s.ba.type_probs}, {"p3", point_mass(3, 3)}};
        std::vector<std::pair<Table, std::vector<std::pair<std::string, std::string>>>> parts;
        for (const auto& [label, probs] : mixes) {
            ExperimentSpec e = s;
            e.metric = metric;
            e.sweep = sweep;
            e.ba.type_probs = probs;
            parts.push_back({run_experiment(e), {{std::string(src), std::string(prefix) + "_" + label}}});
        }
        return join_columns(parts);
    };

    if (name == "fig1") {
        s.metric = Metric::SuccessProb;
        s.sweep = theta_sweep;
        out = run_experiment(s);
        out.comments.clear();
    } else if (name == "fig2") {
        out = three_mixes(Metric::SuccessProb, theta_sweep, "ps_overall", "ps");
    } else if (name == "fig3") {
        s.metric = Metric::MetaDist;
        s.sweep = Sweep{SweepVariable::X, 0.0, 1.0, 0.02, SweepScale::Linear, 51};
        std::vector<std::pair<Table, std::vector<std::pair<std::string, std::string>>>> parts;
        for (double db : {-5.0, 0.0, 5.0}) {
            ExperimentSpec e = s;
            e.theta_db = db;
            std::vector<std::pair<std::string, std::string>> picks;
            char label[32];
            for (int k = 1; k <= 3; ++k) {
                std::snprintf(label, sizeof label, "F_k%d_theta%+gdB", k, db);
                picks.push_back({type_column("F", k), label});
            }
            parts.push_back({run_experiment(e), picks});
        }
        out = join_columns(parts);
    } else if (name == "fig4") {
        ExperimentSpec r = s;
        r.metric = Metric::Throughput;
        r.sweep = lambda_sweep;
        ExperimentSpec j = r;
        j.metric = Metric::ThroughputPerJoule;
        std::vector<std::pair<std::string, std::string>> rp, jp;
        for (int k = 1; k <= 3; ++k) {
            rp.push_back({type_column("R", k), type_column("R", k)});
            jp.push_back({type_column("RJ", k), type_column("RJ", k)});
        }
        out = join_columns({{run_experiment(r), rp}, {run_experiment(j), jp}});
    } else if (name == "fig5") {
        Table r = three_mixes(Metric::Throughput, lambda_sweep, "R_overall", "R");
        Table j = three_mixes(Metric::ThroughputPerJoule, lambda_sweep, "RJ_overall", "RJ");
        out = join_columns({{r, {{"R_p1", "R_p1"}, {"R_uniform", "R_uniform"}, {"R_p3", "R_p3"}}},
                            {j, {{"RJ_p1", "RJ_p1"}, {"RJ_uniform", "RJ_uniform"}, {"RJ_p3", "RJ_p3"}}}});
    } else if (name == "fig6") {
        s = preset_base(base, 10);
        s.metric = Metric::Throughput;
        s.sweep = Sweep{SweepVariable::K, 1.0, 10.0, 1.0, SweepScale::Linear, 10};
        ExperimentSpec random = s, contiguous = s;
        random.ba.mode = AllocationMode::Random;
        contiguous.ba.mode = AllocationMode::Contiguous;
        out = join_columns({{run_experiment(random),
                             {{"throughput", "random_throughput"}, {"throughput_per_hz", "random_per_hz"}}},
                            {run_experiment(contiguous),
                             {{"throughput", "contiguous_throughput"}, {"throughput_per_hz", "contiguous_per_hz"}}}});
    } else if (name == "fig7" || name == "fig8" || name == "fig9") {
        s.metric = Metric::MeanModel;
        s.alt_type_probs = kVariableMix;
        s.sweep = name == "fig7" ? theta_sweep : lambda_sweep;
        const Table t = compare_mean_model(s);
        if (name == "fig7") {
            out = t;
        } else {
            const std::string a = name == "fig8" ? "R_base" : "RJ_base";
            const std::string b = name == "fig8" ? "R_alt" : "RJ_alt";
            out = join_columns({{t, {{a, a}, {b, b}, {"P_alt", "P_alt"}, {"lambda_alt", "lambda_alt"}}}});
        }
    } else {
        throw ConfigError("figure: unknown preset '" + std::string(name) + "' (expected fig1..fig9)");
    }
    // Keep run notes, replace the per-part headers with the figure's own.
    std::vector<std::string> notes = {"@figure: " + std::string(name)};
    for (const auto& c : out.comments)
        if (c.rfind('@', 0) == 0 && c.rfind("@adaptba", 0) != 0) notes.push_back(c);
    out.comments = std::move(notes);
    echo_spec(out, s.resolved());
    return out;
}

}  // namespace adaptba

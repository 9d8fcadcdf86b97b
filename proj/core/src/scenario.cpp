#include "cavrec/scenario.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cavrec/dissipation.hpp"
#include "cavrec/metrics.hpp"

namespace cavrec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& raw, const std::string& key) {
    try {
        std::size_t used = 0;
        const double value = std::stod(raw, &used);
        if (trim(raw.substr(used)).empty()) {
            return value;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("config: bad numeric value for '" + key + "': " + raw);
}

int parse_int(const std::string& raw, const std::string& key) {
    const double value = parse_double(raw, key);
    if (value != std::floor(value)) {
        throw ConfigError("config: expected integer for '" + key + "'");
    }
    return static_cast<int>(value);
}

// `(re, im)` or `mag<phase` / `mag∠phase`, or a plain real number
complexd parse_amplitude(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')') {
            throw ConfigError("config: unbalanced parentheses in '" + key + "'");
        }
        const std::string inner = s.substr(1, s.size() - 2);
        const auto comma = inner.find(',');
        if (comma == std::string::npos) {
            throw ConfigError("config: expected '(re, im)' for '" + key + "'");
        }
        return {parse_double(trim(inner.substr(0, comma)), key),
                parse_double(trim(inner.substr(comma + 1)), key)};
    }
    auto angle = s.find("\xE2\x88\xA0");  // "∠"
    std::size_t angle_len = 3;
    if (angle == std::string::npos) {
        angle = s.find('<');
        angle_len = 1;
    }
    if (angle != std::string::npos) {
        const double mag = parse_double(trim(s.substr(0, angle)), key);
        const double phase = parse_double(trim(s.substr(angle + angle_len)), key);
        return std::polar(mag, phase);
    }
    return {parse_double(s, key), 0.0};
}

std::vector<double> parse_double_list(const std::string& raw,
                                      const std::string& key) {
    std::vector<double> values;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        values.push_back(parse_double(trim(item), key));
    }
    if (values.empty()) {
        throw ConfigError("config: empty list for '" + key + "'");
    }
    return values;
}

std::ofstream open_output(const std::filesystem::path& dir,
                          const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open output file: " + (dir / name).string());
    }
    return out;
}

void write_fig3_trace(std::ostream& os, const RecoveryReport& report) {
    char buf[96];
    os << "k,d_k,p_seq_k\n";
    std::snprintf(buf, sizeof(buf), "0,%.9g,1\n", report.initial_distance);
    os << buf;
    double p_cum = 1.0;
    for (std::size_t k = 0; k < report.steps.size(); ++k) {
        p_cum *= report.steps[k].step_probability;
        std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g\n", k + 1,
                      report.steps[k].distance_after, p_cum);
        os << buf;
    }
}

}  // namespace

void RunConfig::validate() const {
    if (dim < 1) {
        throw ConfigError("config: dim must be >= 1");
    }
    if (amplitudes.empty()) {
        throw ConfigError("config: no initial-state amplitudes given");
    }
    double norm2 = 0.0;
    std::vector<bool> seen(static_cast<std::size_t>(dim), false);
    for (const auto& [index, amp] : amplitudes) {
        if (index < 0 || index >= dim) {
            throw ConfigError("config: amplitude index outside declared dim");
        }
        if (seen[static_cast<std::size_t>(index)]) {
            throw ConfigError("config: duplicate amplitude index");
        }
        seen[static_cast<std::size_t>(index)] = true;
        norm2 += std::norm(amp);
    }
    if (std::abs(norm2 - 1.0) > 1e-9) {
        throw ConfigError("config: amplitudes do not normalize to 1");
    }
    if (gamma_t < 0.0) {
        throw ConfigError("config: gamma_t must be >= 0");
    }
    if (k_max < 1) {
        throw ConfigError("config: k_max must be >= 1");
    }
    if (qgrid_extent <= 0.0 || qgrid_step <= 0.0) {
        throw ConfigError("config: qgrid extent and step must be positive");
    }
    try {
        optimizer.validate();
        CostConfig check(optimizer.cost.r);
    } catch (const InvalidState& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

DensityMatrix RunConfig::initial_state() const {
    Vector c = Vector::Zero(dim);
    for (const auto& [index, amp] : amplitudes) {
        c(index) = amp;
    }
    return pure_to_density(StateVector(std::move(c)));
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    cfg.amplitudes.clear();
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config: malformed section header: " + line);
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected 'key = value': " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (section == "initial_state") {
            if (key == "dim") {
                cfg.dim = parse_int(value, key);
            } else {
                cfg.amplitudes.emplace_back(parse_int(key, key),
                                            parse_amplitude(value, key));
            }
        } else if (section == "run") {
            if (key == "gamma_t") {
                cfg.gamma_t = parse_double(value, key);
            } else if (key == "r") {
                cfg.optimizer.cost.r = parse_double(value, key);
            } else if (key == "k_max") {
                cfg.k_max = parse_int(value, key);
            } else if (key == "output_dir") {
                cfg.output_dir = value;
            } else {
                throw ConfigError("config: unknown key in [run]: " + key);
            }
        } else if (section == "optimizer") {
            if (key == "lambda_tau_max") {
                cfg.optimizer.lambda_tau_max = parse_double(value, key);
            } else if (key == "restarts") {
                cfg.optimizer.restarts = parse_int(value, key);
            } else if (key == "max_iters") {
                cfg.optimizer.max_iters = parse_int(value, key);
            } else if (key == "ftol") {
                cfg.optimizer.ftol = parse_double(value, key);
            } else if (key == "seed") {
                cfg.optimizer.rng_seed =
                    static_cast<std::uint64_t>(parse_double(value, key));
            } else if (key == "probability_floor") {
                cfg.optimizer.probability_floor = parse_double(value, key);
            } else if (key == "grid") {
                const auto counts = parse_double_list(value, key);
                if (counts.size() != 5) {
                    throw ConfigError("config: grid needs 5 counts");
                }
                for (int i = 0; i < 5; ++i) {
                    cfg.optimizer.coarse_grid[i] = static_cast<int>(counts[i]);
                }
            } else {
                throw ConfigError("config: unknown key in [optimizer]: " + key);
            }
        } else if (section == "qgrid") {
            if (key == "extent") {
                cfg.qgrid_extent = parse_double(value, key);
            } else if (key == "step") {
                cfg.qgrid_step = parse_double(value, key);
            } else {
                throw ConfigError("config: unknown key in [qgrid]: " + key);
            }
        } else if (section == "table") {
            if (key == "gamma_ts") {
                cfg.table_gamma_ts = parse_double_list(value, key);
            } else {
                throw ConfigError("config: unknown key in [table]: " + key);
            }
        } else {
            throw ConfigError("config: unknown section: [" + section + "]");
        }
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file: " + path.string());
    }
    return parse_config(in);
}

RunConfig example_config(int which) {
    RunConfig cfg;
    cfg.amplitudes.clear();
    cfg.dim = 2;
    cfg.gamma_t = 0.3;
    const complexd phase = std::polar(1.0, M_PI / 3.0);
    if (which == 1) {
        cfg.amplitudes = {{0, complexd(1.0 / std::sqrt(2.0), 0.0)},
                          {1, phase / std::sqrt(2.0)}};
    } else if (which == 2) {
        cfg.amplitudes = {{0, complexd(0.1, 0.0)},
                          {1, phase * std::sqrt(1.0 - 0.01)}};
    } else {
        throw ConfigError("example must be 1 or 2");
    }
    return cfg;
}

std::string density_matrix_to_json(const DensityMatrix& rho) {
    ordered_json j;
    j["dim"] = rho.dim();
    ordered_json rows = ordered_json::array();
    for (int n = 0; n < rho.dim(); ++n) {
        ordered_json row = ordered_json::array();
        for (int m = 0; m < rho.dim(); ++m) {
            row.push_back({rho(n, m).real(), rho(n, m).imag()});
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string report_to_json(const RecoveryReport& report, double gamma_t) {
    ordered_json j;
    j["gamma_t"] = gamma_t;
    j["initial_distance"] = report.initial_distance;
    ordered_json steps = ordered_json::array();
    for (const RecoveryStep& step : report.steps) {
        ordered_json s;
        s["atom_i"] = {{"theta", step.params.atom_i.theta},
                       {"phi", step.params.atom_i.phi}};
        s["atom_f"] = {{"theta", step.params.atom_f.theta},
                       {"phi", step.params.atom_f.phi}};
        s["lambda_tau"] = step.params.t.lambda_tau;
        s["step_probability"] = step.step_probability;
        s["distance_after"] = step.distance_after;
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    j["p_seq"] = report.p_seq;
    j["reduction_factor"] = report.reduction_factor;
    j["fidelity_final"] = report.fidelity_final;
    return j.dump(2) + "\n";
}

void cmd_dissipate(const RunConfig& cfg) {
    cfg.validate();
    const DensityMatrix rho0 = cfg.initial_state();
    const DensityMatrix damped = dissipate(rho0, DampingSpec(cfg.gamma_t));

    std::filesystem::create_directories(cfg.output_dir);
    open_output(cfg.output_dir, "rho_initial.json") << density_matrix_to_json(rho0);
    open_output(cfg.output_dir, "rho_damped.json") << density_matrix_to_json(damped);

    auto q_initial = open_output(cfg.output_dir, "q_initial.csv");
    write_q_grid_csv(q_initial,
                     q_grid(rho0, cfg.qgrid_extent, cfg.qgrid_step));

    // Q of the error matrix directly; identical to the grid difference by
    // linearity, at half the evaluations
    const Matrix error = damped.entries() - rho0.entries();
    auto q_error = open_output(cfg.output_dir, "q_error.csv");
    write_q_grid_csv(q_error, q_grid(error, cfg.qgrid_extent, cfg.qgrid_step));
}

void cmd_recover(const RunConfig& cfg) {
    cfg.validate();
    const DensityMatrix rho0 = cfg.initial_state();
    std::filesystem::create_directories(cfg.output_dir);
    RecoveryReport report = [&] {
        try {
            return run_sequence(rho0, cfg.gamma_t, cfg.k_max, cfg.optimizer);
        } catch (const OptimizerFailure& e) {
            ordered_json j;
            j["error"] = e.what();
            j["best_rejected_probability"] = e.best_rejected.probability;
            j["best_rejected_distance"] = e.best_rejected.distance;
            open_output(cfg.output_dir, "report.json") << j.dump(2) << "\n";
            throw;
        }
    }();

    open_output(cfg.output_dir, "report.json")
        << report_to_json(report, cfg.gamma_t);
    auto trace = open_output(cfg.output_dir, "fig3_trace.csv");
    write_fig3_trace(trace, report);

    const int d = std::max(report.final_state.dim(), rho0.dim());
    const Matrix error = pad_to(report.final_state.entries(), d) -
                         pad_to(rho0.entries(), d);
    auto q_error = open_output(cfg.output_dir, "q_error_final.csv");
    write_q_grid_csv(q_error, q_grid(error, cfg.qgrid_extent, cfg.qgrid_step));
}

void cmd_table1(const RunConfig& cfg) {
    cfg.validate();
    const DensityMatrix rho0 = cfg.initial_state();
    const auto rows =
        table_compare(rho0, cfg.table_gamma_ts, cfg.k_max, cfg.optimizer);

    std::filesystem::create_directories(cfg.output_dir);
    auto out = open_output(cfg.output_dir, "table1.csv");
    out << "gamma_t,p_seq_" << cfg.k_max << ",filtering,recovered_fidelity\n";
    char buf[160];
    for (const TableRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g\n", row.gamma_t,
                      row.p_seq, row.filtering_probability,
                      row.recovered_fidelity);
        out << buf;
    }
}

}  // namespace cavrec

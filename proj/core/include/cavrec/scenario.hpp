#ifndef CAVREC_SCENARIO_HPP
#define CAVREC_SCENARIO_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "cavrec/recovery.hpp"

namespace cavrec {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything a command run needs: the initial field state, damping
/// strength, optimizer settings and output layout.
struct RunConfig {
    int dim = 2;
    std::vector<std::pair<int, complexd>> amplitudes;
    double gamma_t = 0.3;
    int k_max = 4;
    OptimizerConfig optimizer;
    double qgrid_extent = 3.0;
    double qgrid_step = 0.05;
    std::vector<double> table_gamma_ts = {0.3, 0.4, 0.5, 1.0};
    std::filesystem::path output_dir = "out";

    /// Throws ConfigError unless amplitudes normalize within 1e-9 and the
    /// indices are unique and within the declared dimension.
    void validate() const;

    DensityMatrix initial_state() const;
};

/// Key/value config with [section] headers. Complex amplitudes accept both
/// `(re, im)` and `magnitude<phase-in-radians` (also the literal angle sign).
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Canned scenarios: the equal (1) and strongly unequal (2) qubit
/// superpositions at gamma_t = 0.3.
RunConfig example_config(int which);

/// Commands behind the CLI subcommands. They validate, compute and write
/// result files under cfg.output_dir.
void cmd_dissipate(const RunConfig& cfg);
void cmd_recover(const RunConfig& cfg);  // may throw OptimizerFailure after
                                         // persisting a partial report
void cmd_table1(const RunConfig& cfg);

/// Stable serializations (fixed field order, deterministic formatting).
std::string density_matrix_to_json(const DensityMatrix& rho);
std::string report_to_json(const RecoveryReport& report, double gamma_t);

}  // namespace cavrec

#endif

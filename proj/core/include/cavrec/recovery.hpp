#ifndef CAVREC_RECOVERY_HPP
#define CAVREC_RECOVERY_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "cavrec/jc.hpp"
#include "cavrec/metrics.hpp"

namespace cavrec {

struct OptimizerConfig {
    CostConfig cost;
    double lambda_tau_max = 40.0;
    // points per dimension: theta_i, phi_i, theta_f, phi_f, lambda_tau
    std::array<int, 5> coarse_grid = {8, 8, 8, 8, 64};
    int restarts = 16;       // grid candidates refined by simplex search
    int max_iters = 32;      // simplex iterations per restart
    double ftol = 1e-10;
    std::uint64_t rng_seed = 0;
    double probability_floor = 1e-6;
    /// Minimum cumulative success probability a CM sequence is allowed to
    /// spend. Each step only considers candidates that keep the running
    /// product above this budget; the sequence stops once no improving
    /// candidate fits the remaining budget. Set to 0 to disable.
    double sequence_probability_floor = 0.55;

    void validate() const;
};

/// One evaluated candidate: parameters, objective value and its two factors.
struct CmEvaluation {
    CmParams params;
    double cost = 0.0;
    double probability = 0.0;
    double distance = 0.0;
};

struct OptimizeResult {
    CmEvaluation best;
    /// False when every candidate fell below the probability floor; `best`
    /// then holds the least-bad rejected candidate.
    bool feasible = true;
};

class OptimizerFailure : public std::runtime_error {
public:
    OptimizerFailure(std::string what, CmEvaluation best_rejected)
        : std::runtime_error(std::move(what)),
          best_rejected(std::move(best_rejected)) {}
    CmEvaluation best_rejected;
};

struct RecoveryStep {
    CmParams params;
    double step_probability = 0.0;
    double distance_after = 0.0;
};

struct RecoveryReport {
    std::vector<RecoveryStep> steps;
    double initial_distance = 0.0;
    double p_seq = 1.0;
    double reduction_factor = 1.0;
    double fidelity_final = 1.0;
    DensityMatrix final_state;
};

/// Evaluate one candidate through the full pipeline (used by the optimizer
/// and exposed for tests).
CmEvaluation evaluate_cm(const DensityMatrix& rho_current,
                         const DensityMatrix& target, const CmParams& params,
                         const OptimizerConfig& cfg);

/// Minimize G = d / P^r over the five CM parameters: dense coarse grid,
/// then Nelder-Mead refinement from the best grid points, plus the identity
/// CM and known good qubit-field parameters as seeded candidates.
/// Deterministic for a fixed rng_seed.
OptimizeResult optimize_cm(const DensityMatrix& rho_current,
                           const DensityMatrix& target,
                           const OptimizerConfig& cfg);

/// Damp the target by gamma_t, then apply up to k_max optimized CMs,
/// stopping when a step no longer strictly decreases the distance (the
/// non-improving trial is not applied and not counted).
RecoveryReport run_sequence(const DensityMatrix& rho0_target, double gamma_t,
                            int k_max, const OptimizerConfig& cfg);

struct TableRow {
    double gamma_t = 0.0;
    double p_seq = 0.0;
    double filtering_probability = 0.0;
    double recovered_fidelity = 0.0;
};

/// Sequence probability vs filtering probability across damping strengths.
std::vector<TableRow> table_compare(const DensityMatrix& rho0_target,
                                    const std::vector<double>& gamma_ts, int k,
                                    const OptimizerConfig& cfg);

}  // namespace cavrec

#endif

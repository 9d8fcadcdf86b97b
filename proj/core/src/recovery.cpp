#include "cavrec/recovery.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>

#include "cavrec/dissipation.hpp"

namespace cavrec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * M_PI;

std::array<double, 5> to_array(const CmParams& p) {
    return {p.atom_i.theta, p.atom_i.phi, p.atom_f.theta, p.atom_f.phi,
            p.t.lambda_tau};
}

bool params_less(const CmParams& a, const CmParams& b) {
    return to_array(a) < to_array(b);
}

// ties broken by lexicographic parameter order so the reduction over
// candidates is deterministic
bool better(const CmEvaluation& a, const CmEvaluation& b) {
    if (a.cost != b.cost) {
        return a.cost < b.cost;
    }
    return params_less(a.params, b.params);
}

double wrap_phase(double phi) {
    phi = std::fmod(phi, kTwoPi);
    return phi < 0.0 ? phi + kTwoPi : phi;
}

CmParams clamp_params(const std::array<double, 5>& x, double lambda_tau_max) {
    CmParams p;
    p.atom_i = AtomState(std::clamp(x[0], 0.0, M_PI_2), wrap_phase(x[1]));
    p.atom_f = AtomState(std::clamp(x[2], 0.0, M_PI_2), wrap_phase(x[3]));
    p.t = JcTime(std::clamp(x[4], 0.0, lambda_tau_max));
    return p;
}

// Tracks the best candidate above the probability floor and, separately,
// the least-bad rejected one (reported when nothing is feasible).
class BestTracker {
public:
    explicit BestTracker(double floor) : floor_(floor) {}

    void offer(const CmEvaluation& eval) {
        if (eval.probability >= floor_) {
            if (!has_feasible_ || better(eval, feasible_)) {
                feasible_ = eval;
                has_feasible_ = true;
            }
        } else if (!has_rejected_ || better(eval, rejected_)) {
            rejected_ = eval;
            has_rejected_ = true;
        }
    }

    bool has_feasible() const { return has_feasible_; }
    const CmEvaluation& feasible() const { return feasible_; }
    bool has_rejected() const { return has_rejected_; }
    const CmEvaluation& rejected() const { return rejected_; }

private:
    double floor_;
    CmEvaluation feasible_{}, rejected_{};
    bool has_feasible_ = false, has_rejected_ = false;
};

// Bounded best-k list of refinement starting points.
class TopList {
public:
    explicit TopList(std::size_t capacity) : capacity_(capacity) {}

    void offer(const CmEvaluation& eval) {
        if (!std::isfinite(eval.cost)) {
            return;
        }
        auto pos = std::lower_bound(items_.begin(), items_.end(), eval, better);
        items_.insert(pos, eval);
        if (items_.size() > capacity_) {
            items_.pop_back();
        }
    }

    const std::vector<CmEvaluation>& items() const { return items_; }

private:
    std::size_t capacity_;
    std::vector<CmEvaluation> items_;
};

// Nelder-Mead on the clamped 5-parameter space.
void simplex_refine(const std::array<double, 5>& start,
                    const std::function<double(const std::array<double, 5>&)>& f,
                    int max_iters, double ftol, std::mt19937_64& rng) {
    constexpr int n = 5;
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    const std::array<double, 5> base_step = {0.08, 0.15, 0.08, 0.15, 0.5};

    std::array<std::array<double, 5>, n + 1> xs;
    std::array<double, n + 1> fs;
    xs[0] = start;
    fs[0] = f(xs[0]);
    for (int i = 0; i < n; ++i) {
        xs[i + 1] = start;
        xs[i + 1][i] += base_step[i] * jitter(rng);
        fs[i + 1] = f(xs[i + 1]);
    }

    auto order = [&] {
        std::array<int, n + 1> idx;
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<std::array<double, 5>, n + 1> nxs;
        std::array<double, n + 1> nfs;
        for (int i = 0; i <= n; ++i) {
            nxs[i] = xs[idx[i]];
            nfs[i] = fs[idx[i]];
        }
        xs = nxs;
        fs = nfs;
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        order();
        if (std::isfinite(fs[n]) && fs[n] - fs[0] < ftol) {
            break;
        }
        std::array<double, 5> centroid{};
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < 5; ++k) centroid[k] += xs[i][k] / n;
        }
        auto blend = [&](double coef) {
            std::array<double, 5> x;
            for (int k = 0; k < 5; ++k) {
                x[k] = centroid[k] + coef * (xs[n][k] - centroid[k]);
            }
            return x;
        };

        const auto xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < fs[0]) {
            const auto xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                xs[n] = xe;
                fs[n] = fe;
            } else {
                xs[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            xs[n] = xr;
            fs[n] = fr;
        } else {
            const auto xc = blend(fr < fs[n] ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fs[n])) {
                xs[n] = xc;
                fs[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    for (int k = 0; k < 5; ++k) {
                        xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
                    }
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
}

// Strong starting basin for qubit-field inputs at high probability weight.
const CmParams kQubitSeed = {AtomState(3.0 * M_PI / 8.0, 5.0 * M_PI / 4.0),
                             AtomState(3.0 * M_PI / 8.0, M_PI / 4.0),
                             JcTime(37.95)};

}  // namespace

void OptimizerConfig::validate() const {
    if (lambda_tau_max <= 0.0) {
        throw InvalidState("OptimizerConfig: lambda_tau_max must be > 0");
    }
    for (int n : coarse_grid) {
        if (n < 1) {
            throw InvalidState("OptimizerConfig: grid counts must be >= 1");
        }
    }
    if (restarts < 1 || max_iters < 1) {
        throw InvalidState("OptimizerConfig: restarts and max_iters must be >= 1");
    }
}

CmEvaluation evaluate_cm(const DensityMatrix& rho_current,
                         const DensityMatrix& target, const CmParams& params,
                         const OptimizerConfig& cfg) {
    CmEvaluation eval;
    eval.params = params;
    const CmOutcome outcome = apply_cm(rho_current, params);
    eval.probability = outcome.probability;
    if (!outcome.field) {
        eval.distance = kInf;
        eval.cost = kInf;
        return eval;
    }
    const DensityMatrix trimmed = truncate_negligible(*outcome.field);
    eval.distance = distance(trimmed, target);
    eval.cost = outcome.probability < cfg.probability_floor
                    ? kInf
                    : cost(eval.distance, outcome.probability, cfg.cost);
    return eval;
}

OptimizeResult optimize_cm(const DensityMatrix& rho_current,
                           const DensityMatrix& target,
                           const OptimizerConfig& cfg) {
    cfg.validate();
    BestTracker tracker(cfg.probability_floor);
    TopList starts(static_cast<std::size_t>(cfg.restarts));

    auto offer_full = [&](const CmParams& params) {
        CmEvaluation eval = evaluate_cm(rho_current, target, params, cfg);
        if (eval.probability < cfg.probability_floor &&
            std::isfinite(eval.distance)) {
            // keep the raw objective so the least-bad rejected candidate is
            // meaningful in the failure report
            CmEvaluation rejected = eval;
            rejected.cost = cost(eval.distance, eval.probability, cfg.cost);
            tracker.offer(rejected);
            return kInf;
        }
        tracker.offer(eval);
        return eval.cost;
    };

    // seeded candidates
    std::vector<CmEvaluation> seeds;
    {
        CmParams identity{};  // lambda_tau = 0, atom_f = atom_i
        seeds.push_back(evaluate_cm(rho_current, target, identity, cfg));
        tracker.offer(seeds.back());
        if (rho_current.dim() == 2) {
            seeds.push_back(evaluate_cm(rho_current, target, kQubitSeed, cfg));
            tracker.offer(seeds.back());
        }
    }

    // coarse grid: the joint evolution depends only on (theta_i, phi_i,
    // lambda_tau), so it is shared across the final-atom scan
    const auto [ni_theta, ni_phi, nf_theta, nf_phi, n_lt] = cfg.coarse_grid;
    const DensityMatrix grown = embed(rho_current, rho_current.dim() + 1);
    for (int a = 0; a < ni_theta; ++a) {
        const double theta_i =
            ni_theta == 1 ? 0.0 : a * M_PI_2 / (ni_theta - 1);
        for (int b = 0; b < ni_phi; ++b) {
            const double phi_i = b * kTwoPi / ni_phi;
            const JointState joint =
                tensor_with_atom(grown, AtomState(theta_i, phi_i));
            for (int c = 0; c < n_lt; ++c) {
                const JcTime lt(n_lt == 1 ? 0.0
                                          : c * cfg.lambda_tau_max / (n_lt - 1));
                const JointState evolved = jc_evolve(joint, lt);
                for (int e = 0; e < nf_theta; ++e) {
                    const double theta_f =
                        nf_theta == 1 ? 0.0 : e * M_PI_2 / (nf_theta - 1);
                    for (int g = 0; g < nf_phi; ++g) {
                        const double phi_f = g * kTwoPi / nf_phi;
                        CmEvaluation eval;
                        eval.params = {AtomState(theta_i, phi_i),
                                       AtomState(theta_f, phi_f), lt};
                        const CmOutcome outcome = conditional_measure(
                            evolved, eval.params.atom_f);
                        eval.probability = outcome.probability;
                        if (!outcome.field) {
                            continue;
                        }
                        eval.distance =
                            distance(truncate_negligible(*outcome.field), target);
                        if (eval.probability < cfg.probability_floor) {
                            eval.cost =
                                cost(eval.distance, eval.probability, cfg.cost);
                            tracker.offer(eval);
                            continue;
                        }
                        eval.cost =
                            cost(eval.distance, eval.probability, cfg.cost);
                        tracker.offer(eval);
                        starts.offer(eval);
                    }
                }
            }
        }
    }

    // simplex refinement from the best grid points and the seeds
    std::vector<CmEvaluation> refine = starts.items();
    for (const CmEvaluation& s : seeds) {
        if (std::isfinite(s.cost)) {
            refine.push_back(s);
        }
    }
    auto objective = [&](const std::array<double, 5>& x) {
        return offer_full(clamp_params(x, cfg.lambda_tau_max));
    };
    std::uint64_t salt = 0;
    for (const CmEvaluation& s : refine) {
        std::mt19937_64 rng(cfg.rng_seed * 0x9e3779b97f4a7c15ull + salt++);
        simplex_refine(to_array(s.params), objective, cfg.max_iters, cfg.ftol,
                       rng);
    }

    if (tracker.has_feasible()) {
        return OptimizeResult{tracker.feasible(), true};
    }
    if (tracker.has_rejected()) {
        return OptimizeResult{tracker.rejected(), false};
    }
    throw OptimizerFailure("optimize_cm: no candidate could be evaluated", {});
}

RecoveryReport run_sequence(const DensityMatrix& rho0_target, double gamma_t,
                            int k_max, const OptimizerConfig& cfg) {
    if (k_max < 1) {
        throw InvalidState("run_sequence: k_max must be >= 1");
    }
    DensityMatrix rho = dissipate(rho0_target, DampingSpec(gamma_t));
    const double d0 = distance(rho, rho0_target);

    std::vector<RecoveryStep> steps;
    double d_current = d0;
    double p_seq = 1.0;
    for (int k = 0; k < k_max; ++k) {
        // candidates must leave the cumulative probability above the budget
        const double budget_floor = cfg.sequence_probability_floor / p_seq;
        if (budget_floor > 1.0) {
            break;
        }
        OptimizerConfig step_cfg = cfg;
        step_cfg.probability_floor =
            std::max(cfg.probability_floor, budget_floor);
        const OptimizeResult result = optimize_cm(rho, rho0_target, step_cfg);
        if (!result.feasible) {
            if (step_cfg.probability_floor > cfg.probability_floor) {
                break;  // budget exhausted, not an error
            }
            throw OptimizerFailure(
                "run_sequence: every candidate fell below the probability floor",
                result.best);
        }
        if (result.best.distance >= d_current - cfg.ftol) {
            break;  // non-improving trial is never physically performed
        }
        const CmOutcome outcome = apply_cm(rho, result.best.params);
        rho = truncate_negligible(*outcome.field);
        d_current = distance(rho, rho0_target);
        p_seq *= outcome.probability;
        steps.push_back({result.best.params, outcome.probability, d_current});
    }

    const double reduction =
        steps.empty() ? 1.0 : d0 / std::max(d_current, 1e-300);
    const double fid = fidelity(rho0_target, rho);
    return RecoveryReport{std::move(steps), d0, p_seq, reduction, fid,
                          std::move(rho)};
}

std::vector<TableRow> table_compare(const DensityMatrix& rho0_target,
                                    const std::vector<double>& gamma_ts, int k,
                                    const OptimizerConfig& cfg) {
    std::vector<TableRow> rows;
    rows.reserve(gamma_ts.size());
    for (double g : gamma_ts) {
        const RecoveryReport report = run_sequence(rho0_target, g, k, cfg);
        const double filtering =
            fidelity(rho0_target, dissipate(rho0_target, DampingSpec(g)));
        rows.push_back({g, report.p_seq, filtering, report.fidelity_final});
    }
    return rows;
}

}  // namespace cavrec

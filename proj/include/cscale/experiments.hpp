#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cscale/config.hpp"
#include "cscale/generators.hpp"

namespace cscale {

std::string version_string();

// Sweep parallelism: CONSENSUS_SCALE_THREADS when set and positive, else the
// hardware concurrency.
int worker_threads();

struct DisturbanceSpec {
    int node = 1;
    int deriv_order = 1;
    double magnitude = -1.0;
    double time = 1.0;
};

enum class ExperimentKind { sweep, formation, third_order };

struct ExperimentConfig {
    std::string name;
    FamilySpec family;
    std::vector<int> sizes;
    std::vector<double> gains;
    double a_max = 10.0;
    std::optional<int> leader;
    std::vector<std::uint64_t> seeds;
    DisturbanceSpec disturbance;
    double dt = 0.01;
    double horizon = 60.0;
    int record_every = 10;
    double settle_band = 0.02;
    double plot_window = 60.0;
    // third-order demo
    double ground_time = 30.0;
    double repeat_time = 31.0;
    double lowered_a0 = 0.01;
    double check_time = 25.0;
    int max_seed_attempts = 200;
    // formation demo
    double v_star = 20.0;
    double spacing = 10.0;
    std::string output_dir = "out";

    static ExperimentConfig defaults(ExperimentKind kind);
    // Starts from defaults(kind) and overrides with `cfg`; unknown keys throw.
    static ExperimentConfig from_config(ExperimentKind kind, const Config& cfg);
    Config to_config() const;
};

struct ScalingRow {
    int n;
    std::uint64_t seed;
    double lattice_lambda2;
    double random_lambda2;
    double random_grounded_lambda1;
    double lemma2_bound;
};

struct ScalingSweepResult {
    std::vector<ScalingRow> rows;
    double lattice_slope;     // log-log slope of lattice lambda_2 against N
    double random_min_lambda2;
    bool bound_holds;         // grounded lambda_1 <= bound in every row
};

ScalingSweepResult run_scaling_sweep(const ExperimentConfig& cfg, bool write_outputs = true);

struct FormationRun {
    int n;
    bool grounded;
    double lambda;  // lambda_2, or the grounded eigenvalue
    std::optional<double> settling_time;
};

struct FormationResult {
    std::vector<FormationRun> runs;  // per size: leaderless then grounded
    // grounded / leaderless settling time per size, nullopt if either did not settle
    std::vector<std::optional<double>> ratios;
};

FormationResult run_formation_demo(const ExperimentConfig& cfg, bool write_outputs = true);

struct ThirdOrderResult {
    std::uint64_t seed_used;
    std::vector<std::uint64_t> rejected_seeds;
    double lambda2;
    double grounded_lambda1;
    double threshold;
    bool leaderless_stable;
    double peak_before_grounding;  // deviation norm, first disturbance to grounding
    double deviation_at_check;
    double deviation_at_repeat;
    double deviation_at_end;
    double grounded_max_real;
    bool lowered_gain_grounded_stable;
};

ThirdOrderResult run_third_order_demo(const ExperimentConfig& cfg, bool write_outputs = true);

}  // namespace cscale

#include "cscale/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <iostream>
#include <mutex>
#include <thread>

#include "cscale/dynamics.hpp"
#include "cscale/errors.hpp"
#include "cscale/io.hpp"
#include "cscale/plot.hpp"
#include "cscale/simulate.hpp"
#include "cscale/spectral.hpp"

namespace cscale {

std::string version_string() { return std::string("consensus-scale ") + CSCALE_VERSION; }

int worker_threads() {
    if (const char* env = std::getenv("CONSENSUS_SCALE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs fn(0..count-1) on up to worker_threads() threads. Results must be
// written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_threads()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_number(xs[i]);
    return out;
}

template <typename T>
std::string join_ints(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + std::to_string(xs[i]);
    return out;
}

const std::vector<std::string> kKnownKeys{
    "name",           "output",           "family.kind",           "family.k",
    "family.rows",    "family.cols",      "family.clique_size",    "family.bridge_nodes",
    "family.weight",  "family.max_attempts", "run.sizes",          "run.seeds",
    "run.leader",     "run.dt",           "run.horizon",           "run.record_every",
    "run.band",       "run.plot_window",  "run.max_seed_attempts", "gains.a",
    "gains.a_max",    "disturbance.node", "disturbance.order",     "disturbance.magnitude",
    "disturbance.time", "grounding.time", "grounding.repeat_time", "grounding.lowered_a0",
    "grounding.check_time", "formation.v_star", "formation.spacing",
};

void write_resolved(const ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& meta) {
    Config c = cfg.to_config();
    c.set("meta.version", version_string());
    for (const auto& [k, v] : meta) c.set("meta." + k, v);
    write_text_file(cfg.output_dir + "/config.resolved.txt", c.dump());
}

void require_sizes(const ExperimentConfig& cfg) {
    if (cfg.sizes.empty()) throw ValidationError("experiment needs at least one size");
    if (cfg.seeds.empty()) throw ValidationError("experiment needs at least one seed");
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
    ExperimentConfig c;
    c.family.kind = FamilyKind::random_regular;
    c.family.k = 4;
    c.leader = 0;
    switch (kind) {
        case ExperimentKind::sweep:
            c.name = "scaling";
            c.sizes = {64, 121, 256, 529, 1024};
            c.seeds = {1, 2, 3, 4, 5};
            c.gains = {1.0};
            c.output_dir = "out/scaling";
            break;
        case ExperimentKind::formation:
            c.name = "formation";
            c.sizes = {20, 100};
            c.seeds = {1};
            c.gains = {1.0, 2.0};
            c.disturbance = {1, 1, -1.0, 1.0};
            c.horizon = 600.0;
            c.output_dir = "out/formation";
            break;
        case ExperimentKind::third_order:
            c.name = "third-order";
            c.sizes = {60};
            c.seeds = {1};
            c.gains = {0.1, 1.0, 1.0};
            c.disturbance = {9, 2, 0.1, 1.0};
            c.horizon = 60.0;
            c.output_dir = "out/third-order";
            break;
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_config(ExperimentKind kind, const Config& cfg) {
    cfg.require_known(kKnownKeys);
    ExperimentConfig c = defaults(kind);
    c.name = cfg.get_string("name", c.name);
    c.output_dir = cfg.get_string("output", c.output_dir);

    c.family.kind = parse_family_kind(cfg.get_string("family.kind", std::string(to_string(c.family.kind))));
    c.family.k = cfg.get_int("family.k", c.family.k);
    c.family.rows = cfg.get_int("family.rows", c.family.rows);
    c.family.cols = cfg.get_int("family.cols", c.family.cols);
    c.family.clique_size = cfg.get_int("family.clique_size", c.family.clique_size);
    c.family.bridge_nodes = cfg.get_int("family.bridge_nodes", c.family.bridge_nodes);
    c.family.weight = cfg.get_double("family.weight", c.family.weight);
    c.family.max_attempts = cfg.get_int("family.max_attempts", c.family.max_attempts);

    c.sizes = cfg.get_ints("run.sizes", c.sizes);
    c.seeds = cfg.get_u64s("run.seeds", c.seeds);
    if (cfg.has("run.leader")) c.leader = cfg.get_optional_int("run.leader");
    c.dt = cfg.get_double("run.dt", c.dt);
    c.horizon = cfg.get_double("run.horizon", c.horizon);
    c.record_every = cfg.get_int("run.record_every", c.record_every);
    c.settle_band = cfg.get_double("run.band", c.settle_band);
    c.plot_window = cfg.get_double("run.plot_window", c.plot_window);
    c.max_seed_attempts = cfg.get_int("run.max_seed_attempts", c.max_seed_attempts);

    c.gains = cfg.get_doubles("gains.a", c.gains);
    c.a_max = cfg.get_double("gains.a_max", c.a_max);

    c.disturbance.node = cfg.get_int("disturbance.node", c.disturbance.node);
    c.disturbance.deriv_order = cfg.get_int("disturbance.order", c.disturbance.deriv_order);
    c.disturbance.magnitude = cfg.get_double("disturbance.magnitude", c.disturbance.magnitude);
    c.disturbance.time = cfg.get_double("disturbance.time", c.disturbance.time);

    c.ground_time = cfg.get_double("grounding.time", c.ground_time);
    c.repeat_time = cfg.get_double("grounding.repeat_time", c.repeat_time);
    c.lowered_a0 = cfg.get_double("grounding.lowered_a0", c.lowered_a0);
    c.check_time = cfg.get_double("grounding.check_time", c.check_time);

    c.v_star = cfg.get_double("formation.v_star", c.v_star);
    c.spacing = cfg.get_double("formation.spacing", c.spacing);

    ConsensusGains(c.gains, c.a_max);
    if (!(c.dt > 0.0) || !(c.horizon > 0.0) || c.record_every < 1) throw ValidationError("bad time grid");
    if (!(c.settle_band > 0.0 && c.settle_band < 1.0)) throw ValidationError("run.band must be in (0, 1)");
    return c;
}

Config ExperimentConfig::to_config() const {
    Config c;
    c.set("name", name);
    c.set("output", output_dir);
    c.set("family.kind", std::string(to_string(family.kind)));
    c.set("family.k", std::to_string(family.k));
    c.set("family.rows", std::to_string(family.rows));
    c.set("family.cols", std::to_string(family.cols));
    c.set("family.clique_size", std::to_string(family.clique_size));
    c.set("family.bridge_nodes", std::to_string(family.bridge_nodes));
    c.set("family.weight", format_number(family.weight));
    c.set("family.max_attempts", std::to_string(family.max_attempts));
    c.set("run.sizes", join_ints(sizes));
    c.set("run.seeds", join_ints(seeds));
    c.set("run.leader", leader ? std::to_string(*leader) : "none");
    c.set("run.dt", format_number(dt));
    c.set("run.horizon", format_number(horizon));
    c.set("run.record_every", std::to_string(record_every));
    c.set("run.band", format_number(settle_band));
    c.set("run.plot_window", format_number(plot_window));
    c.set("run.max_seed_attempts", std::to_string(max_seed_attempts));
    c.set("gains.a", join(gains));
    c.set("gains.a_max", format_number(a_max));
    c.set("disturbance.node", std::to_string(disturbance.node));
    c.set("disturbance.order", std::to_string(disturbance.deriv_order));
    c.set("disturbance.magnitude", format_number(disturbance.magnitude));
    c.set("disturbance.time", format_number(disturbance.time));
    c.set("grounding.time", format_number(ground_time));
    c.set("grounding.repeat_time", format_number(repeat_time));
    c.set("grounding.lowered_a0", format_number(lowered_a0));
    c.set("grounding.check_time", format_number(check_time));
    c.set("formation.v_star", format_number(v_star));
    c.set("formation.spacing", format_number(spacing));
    return c;
}

ScalingSweepResult run_scaling_sweep(const ExperimentConfig& cfg, bool write_outputs) {
    require_sizes(cfg);
    const int leader = cfg.leader.value_or(0);
    FamilySpec lattice{};
    lattice.kind = FamilyKind::lattice2d_torus;
    lattice.weight = cfg.family.weight;

    const std::size_t n_sizes = cfg.sizes.size(), n_seeds = cfg.seeds.size();
    std::vector<double> lattice_l2(n_sizes);
    std::vector<ScalingRow> rows(n_sizes * n_seeds);
    parallel_for(n_sizes + rows.size(), [&](std::size_t task) {
        if (task < n_sizes) {
            lattice_l2[task] = algebraic_connectivity(generate(lattice, cfg.sizes[task]));
            return;
        }
        const std::size_t i = (task - n_sizes) / n_seeds, s = (task - n_sizes) % n_seeds;
        FamilySpec fam = cfg.family;
        fam.seed = cfg.seeds[s];
        const Graph g = generate(fam, cfg.sizes[i]);
        rows[task - n_sizes] = {cfg.sizes[i], cfg.seeds[s], 0.0, algebraic_connectivity(g),
                                grounded_eigenvalue(g, leader), lemma2_bound(g, DegreeBounds::of(g)).loose};
    });

    ScalingSweepResult result{rows, 0.0, std::numeric_limits<double>::infinity(), true};
    for (auto& r : result.rows) {
        const auto i = static_cast<std::size_t>(std::find(cfg.sizes.begin(), cfg.sizes.end(), r.n) - cfg.sizes.begin());
        r.lattice_lambda2 = lattice_l2[i];
        result.random_min_lambda2 = std::min(result.random_min_lambda2, r.random_lambda2);
        if (r.random_grounded_lambda1 > r.lemma2_bound + 1e-9) result.bound_holds = false;
    }
    std::vector<double> xs(cfg.sizes.begin(), cfg.sizes.end());
    result.lattice_slope = n_sizes >= 2 ? loglog_slope(xs, lattice_l2) : 0.0;

    if (write_outputs) {
        std::string csv = "N,seed,lattice_lambda2,random_lambda2,random_grounded_lambda1,lemma2_bound\n";
        for (const auto& r : result.rows) {
            csv += std::to_string(r.n) + "," + std::to_string(r.seed) + "," + format_number(r.lattice_lambda2) + "," +
                   format_number(r.random_lambda2) + "," + format_number(r.random_grounded_lambda1) + "," +
                   format_number(r.lemma2_bound) + "\n";
        }
        write_text_file(cfg.output_dir + "/scaling.csv", csv);

        Series lat{"lattice lambda2", xs, lattice_l2}, rnd{"random lambda2 (seed mean)", xs, {}},
            grd{"random grounded lambda1 (seed mean)", xs, {}}, bnd{"bound q*w_max/(N-1)", xs, {}};
        for (std::size_t i = 0; i < n_sizes; ++i) {
            double a = 0, b = 0;
            for (std::size_t s = 0; s < n_seeds; ++s) {
                a += rows[i * n_seeds + s].random_lambda2;
                b += rows[i * n_seeds + s].random_grounded_lambda1;
            }
            rnd.y.push_back(a / n_seeds);
            grd.y.push_back(b / n_seeds);
            bnd.y.push_back(rows[i * n_seeds].lemma2_bound);
        }
        write_plot({Panel{{"Connectivity scaling: lattice vs random " + std::to_string(cfg.family.k) + "-regular", "N",
                           "eigenvalue", true, true},
                          {lat, rnd, grd, bnd}}},
                   1, cfg.output_dir + "/scaling_plot");
        write_resolved(cfg, {});
    }
    return result;
}

FormationResult run_formation_demo(const ExperimentConfig& cfg, bool write_outputs) {
    require_sizes(cfg);
    if (cfg.gains.size() != 2) throw ValidationError("formation demo needs second-order gains (a0, a1)");
    const ConsensusGains gains(cfg.gains, cfg.a_max);
    const int leader = cfg.leader.value_or(0);
    if (cfg.disturbance.node == leader) throw ValidationError("the disturbed vehicle must not be the leader");

    FormationResult result;
    std::vector<Panel> leaderless_panels, grounded_panels;
    for (int n : cfg.sizes) {
        FamilySpec fam = cfg.family;
        fam.seed = cfg.seeds.front();
        const Graph g = generate(fam, n);
        const std::vector<SimEvent> events{SimEvent::impulse(cfg.disturbance.time, cfg.disturbance.node,
                                                             cfg.disturbance.deriv_order, cfg.disturbance.magnitude)};
        std::optional<double> settle[2];
        for (int grounded = 0; grounded < 2; ++grounded) {
            const ConsensusSystem sys(g, gains, grounded ? std::optional<int>(leader) : std::nullopt);
            // Deviation coordinates x_i - x*_i; the desired trajectory itself is the zero state.
            const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sys.state_dim());
            const Trajectory traj = simulate(sys, x0, events, cfg.horizon, cfg.dt, {cfg.record_every});
            const auto ref = grounded ? SettlingReference::fixed(Eigen::VectorXd::Zero(sys.agents()))
                                      : SettlingReference::average();
            settle[grounded] = settling_time(traj, ref, cfg.settle_band);
            const double lam = grounded ? grounded_eigenvalue(g, leader) : algebraic_connectivity(g);
            result.runs.push_back({n, grounded == 1, lam, settle[grounded]});

            Panel panel{{std::string(grounded ? "with leader" : "leaderless") + " N=" + std::to_string(n), "t [s]",
                         "x_i - x*_i [m]", false, false},
                        {}};
            for (int slot = 0; slot < sys.agents(); ++slot) {
                Series s{"node " + std::to_string(sys.node_at(slot)), {}, {}};
                for (std::size_t k = 0; k < traj.size() && traj.times[k] <= cfg.plot_window + 1e-9; ++k) {
                    s.x.push_back(traj.times[k]);
                    s.y.push_back(traj.states[k](slot));
                }
                panel.series.push_back(std::move(s));
            }
            (grounded ? grounded_panels : leaderless_panels).push_back(std::move(panel));
        }
        result.ratios.push_back(settle[0] && settle[1] && *settle[0] > 0 ? std::optional(*settle[1] / *settle[0])
                                                                           : std::nullopt);
    }

    if (write_outputs) {
        std::string csv = "N,mode,lambda,settling_time,ratio\n";
        for (std::size_t i = 0; i < result.runs.size(); ++i) {
            const auto& r = result.runs[i];
            const auto& ratio = result.ratios[i / 2];
            csv += std::to_string(r.n) + "," + (r.grounded ? "grounded" : "leaderless") + "," + format_number(r.lambda) +
                   "," + (r.settling_time ? format_number(*r.settling_time) : "not_settled") + "," +
                   (r.grounded && ratio ? format_number(*ratio) : "") + "\n";
        }
        write_text_file(cfg.output_dir + "/settling.csv", csv);

        std::vector<Panel> panels = leaderless_panels;
        panels.insert(panels.end(), grounded_panels.begin(), grounded_panels.end());
        write_plot(panels, static_cast<int>(cfg.sizes.size()), cfg.output_dir + "/formation");

        // Absolute positions x*_i(t) + deviation, with x*_i = v* t - i * spacing.
        std::string abs_csv = "panel,node,t,desired,position\n";
        for (const auto& p : panels) {
            for (const auto& s : p.series) {
                const int node = std::stoi(s.label.substr(5));
                for (std::size_t k = 0; k < s.x.size(); ++k) {
                    const double desired = cfg.v_star * s.x[k] - node * cfg.spacing;
                    abs_csv += p.axes.title + "," + std::to_string(node) + "," + format_number(s.x[k]) + "," +
                               format_number(desired) + "," + format_number(desired + s.y[k]) + "\n";
                }
            }
        }
        write_text_file(cfg.output_dir + "/formation_positions.csv", abs_csv);
        write_resolved(cfg, {});
    }
    return result;
}

ThirdOrderResult run_third_order_demo(const ExperimentConfig& cfg, bool write_outputs) {
    require_sizes(cfg);
    if (cfg.gains.size() != 3) throw ValidationError("third-order demo needs gains (a0, a1, a2)");
    const ConsensusGains gains(cfg.gains, cfg.a_max);
    const int leader = cfg.leader.value_or(0);
    const int n = cfg.sizes.front();

    ThirdOrderResult r{};
    r.threshold = high_order_threshold(gains);
    std::optional<Graph> graph;
    std::uint64_t seed = cfg.seeds.front();
    for (int attempt = 0; attempt < cfg.max_seed_attempts; ++attempt, ++seed) {
        FamilySpec fam = cfg.family;
        fam.seed = seed;
        Graph g = generate(fam, n);
        const double lam1 = grounded_eigenvalue(g, leader);
        if (lam1 < r.threshold) {
            r.seed_used = seed;
            r.grounded_lambda1 = lam1;
            graph = std::move(g);
            break;
        }
        std::clog << "third-order demo: seed " << seed << " has grounded eigenvalue " << lam1
                  << " >= threshold " << r.threshold << ", resampling\n";
        r.rejected_seeds.push_back(seed);
    }
    if (!graph) throw RetryExhausted("no sampled graph reached the unstable grounded regime");
    r.lambda2 = algebraic_connectivity(*graph);

    const ConsensusSystem sys(*graph, gains);
    r.leaderless_stable = stability_report(sys).is_stable;
    r.grounded_max_real = stability_report(sys.grounded_at(leader)).max_real_part;
    std::vector<double> lowered = cfg.gains;
    lowered[0] = cfg.lowered_a0;
    r.lowered_gain_grounded_stable =
        stability_report(ConsensusSystem(*graph, ConsensusGains(lowered, cfg.a_max), leader)).is_stable;

    const auto& d = cfg.disturbance;
    const std::vector<SimEvent> events{SimEvent::impulse(d.time, d.node, d.deriv_order, d.magnitude),
                                       SimEvent::grounding(cfg.ground_time, leader),
                                       SimEvent::impulse(cfg.repeat_time, d.node, d.deriv_order, d.magnitude)};
    const Trajectory traj =
        simulate(sys, Eigen::VectorXd::Zero(sys.state_dim()), events, cfg.horizon, cfg.dt, {cfg.record_every});

    for (std::size_t k = traj.index_at(d.time); k < traj.size() && traj.times[k] < cfg.ground_time; ++k) {
        r.peak_before_grounding = std::max(r.peak_before_grounding, traj.deviation_norm(k));
    }
    r.deviation_at_check = traj.deviation_norm(traj.index_at(cfg.check_time));
    r.deviation_at_repeat = traj.deviation_norm(traj.index_at(cfg.repeat_time));
    r.deviation_at_end = traj.deviation_norm(traj.size() - 1);

    if (write_outputs) {
        Panel panel{{"Third-order consensus, grounded at t=" + format_number(cfg.ground_time) + " s", "t [s]",
                     "x_i - x_avg", false, false},
                    {}};
        for (int node = 0; node < n; ++node) panel.series.push_back({"node " + std::to_string(node), {}, {}});
        for (std::size_t k = 0; k < traj.size(); ++k) {
            const Eigen::VectorXd p = traj.all_positions(k);
            const double avg = p.mean();
            for (int node = 0; node < n; ++node) {
                panel.series[node].x.push_back(traj.times[k]);
                panel.series[node].y.push_back(p(node) - avg);
            }
        }
        write_plot({panel}, 1, cfg.output_dir + "/third_order");
        write_text_file(cfg.output_dir + "/third_order_events.csv", events_csv(traj));

        std::string summary = "metric,value\n";
        auto add = [&](const std::string& k, const std::string& v) { summary += k + "," + v + "\n"; };
        add("seed_used", std::to_string(r.seed_used));
        add("lambda2", format_number(r.lambda2));
        add("grounded_lambda1", format_number(r.grounded_lambda1));
        add("threshold", format_number(r.threshold));
        add("leaderless_stable", r.leaderless_stable ? "1" : "0");
        add("peak_before_grounding", format_number(r.peak_before_grounding));
        add("deviation_at_check", format_number(r.deviation_at_check));
        add("deviation_at_repeat", format_number(r.deviation_at_repeat));
        add("deviation_at_end", format_number(r.deviation_at_end));
        add("grounded_max_real", format_number(r.grounded_max_real));
        add("lowered_gain_grounded_stable", r.lowered_gain_grounded_stable ? "1" : "0");
        write_text_file(cfg.output_dir + "/third_order_summary.csv", summary);
        write_resolved(cfg, {{"seed_used", std::to_string(r.seed_used)},
                             {"rejected_seeds", join_ints(r.rejected_seeds)}});
    }
    return r;
}

}  // namespace cscale

// Command-line front end: graph generation, spectral reports, simulation and
// the scaling / formation / third-order experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cscale/config.hpp"
#include "cscale/dynamics.hpp"
#include "cscale/errors.hpp"
#include "cscale/experiments.hpp"
#include "cscale/generators.hpp"
#include "cscale/io.hpp"
#include "cscale/rng.hpp"
#include "cscale/simulate.hpp"
#include "cscale/spectral.hpp"

namespace {

using namespace cscale;

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<int> n;
    std::string family;
    std::optional<int> leader;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out = true) {
    cmd->add_option("--config", o.config, "Experiment config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Seed for random graph families");
    if (with_out) cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--N", o.n, "Number of nodes");
    cmd->add_option("--family", o.family, "Graph family");
    cmd->add_option("--leader", o.leader, "Grounded (leader) node, 0-based");
}

ExperimentConfig resolve(ExperimentKind kind, const CommonOptions& o) {
    ExperimentConfig cfg =
        o.config.empty() ? ExperimentConfig::defaults(kind) : ExperimentConfig::from_config(kind, Config::load(o.config));
    if (o.seed) cfg.seeds = {*o.seed};
    if (o.n) cfg.sizes = {*o.n};
    if (!o.family.empty()) cfg.family.kind = parse_family_kind(o.family);
    if (o.leader) cfg.leader = *o.leader;
    if (!o.out.empty()) cfg.output_dir = o.out;
    return cfg;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("cannot parse number '" + item + "'");
        }
    }
    return out;
}

std::vector<double> parse_fields(const std::string& text, std::size_t expected, const char* what) {
    std::string joined = text;
    for (char& c : joined)
        if (c == ':') c = ',';
    auto v = parse_list(joined);
    if (v.size() != expected) throw ValidationError(std::string("malformed ") + what + " '" + text + "'");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral scalability and grounding-fragility toolkit for nth-order consensus"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    // generate
    CommonOptions gen_opts;
    FamilySpec gen_spec;
    std::string gen_file;
    auto* gen = app.add_subcommand("generate", "Write a graph of the given family as an edge list");
    add_common(gen, gen_opts, false);
    gen->add_option("--out", gen_file, "Edge-list file (stdout when omitted)");
    gen->add_option("--k", gen_spec.k, "Degree for random_regular");
    gen->add_option("--rows", gen_spec.rows, "Torus rows");
    gen->add_option("--cols", gen_spec.cols, "Torus columns");
    gen->add_option("--clique-size", gen_spec.clique_size, "Barbell clique size");
    gen->add_option("--bridge-nodes", gen_spec.bridge_nodes, "Barbell bridge nodes");
    gen->add_option("--weight", gen_spec.weight, "Uniform edge weight");
    gen->add_option("--max-attempts", gen_spec.max_attempts, "Rejection cap for random_regular");

    // spectral
    std::string spec_graph, spec_label = "custom";
    std::optional<int> spec_leader, spec_q;
    std::optional<double> spec_wmin, spec_wmax;
    std::optional<std::uint64_t> spec_seed;
    int spec_cap = kCheegerBruteForceCap;
    auto* spec = app.add_subcommand("spectral", "Print the spectral report of an edge-list graph as CSV");
    spec->add_option("graph", spec_graph, "Edge-list file")->required()->check(CLI::ExistingFile);
    spec->add_option("--leader", spec_leader, "Leader node for the grounded eigenvalue");
    spec->add_option("--q", spec_q, "Degree bound (default: max degree)");
    spec->add_option("--w-min", spec_wmin, "Lower weight bound");
    spec->add_option("--w-max", spec_wmax, "Upper weight bound");
    spec->add_option("--family", spec_label, "Family label for the CSV row");
    spec->add_option("--seed", spec_seed, "Seed label for the CSV row");
    spec->add_option("--cheeger-cap", spec_cap, "Largest N for the exact Cheeger constant");

    // simulate
    CommonOptions sim_opts;
    std::string sim_graph, sim_gains = "1", sim_x0 = "random";
    double sim_T = 10.0, sim_dt = 0.01;
    int sim_k = 4, sim_every = 1;
    std::vector<std::string> sim_impulses, sim_steps;
    std::string sim_ground;
    auto* sim = app.add_subcommand("simulate", "Integrate a consensus system and write trajectory CSVs");
    add_common(sim, sim_opts);
    sim->add_option("--graph", sim_graph, "Edge-list file (else generated from --family/--N/--seed)");
    sim->add_option("--k", sim_k, "Degree for random_regular");
    sim->add_option("--gains", sim_gains, "Comma-separated a0,...,a_{n-1}");
    sim->add_option("--T", sim_T, "Horizon [s]");
    sim->add_option("--dt", sim_dt, "RK4 step [s]");
    sim->add_option("--record-every", sim_every, "Record every k-th step");
    sim->add_option("--x0", sim_x0, "Initial state: random or zero")->check(CLI::IsMember({"random", "zero"}));
    sim->add_option("--impulse", sim_impulses, "t:node:order:magnitude");
    sim->add_option("--step", sim_steps, "t:duration:node:order:magnitude");
    sim->add_option("--ground", sim_ground, "t:node grounds the node mid-run");

    // sweep
    CommonOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Scaling sweep: lattice vs random lambda_2 and grounded lambda_1");
    add_common(sweep, sweep_opts);

    // demo
    CommonOptions demo_opts;
    auto* demo = app.add_subcommand("demo", "Formation and third-order demonstrations");
    demo->require_subcommand(1);
    auto* formation = demo->add_subcommand("formation", "Second-order formation with and without a leader");
    auto* third = demo->add_subcommand("third-order", "Third-order consensus destabilized by grounding");
    add_common(formation, demo_opts);
    add_common(third, demo_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*gen) {
            if (gen_opts.config.empty() && gen_opts.family.empty()) throw ValidationError("generate needs --family");
            ExperimentConfig cfg = resolve(ExperimentKind::sweep, gen_opts);
            FamilySpec fam = gen_opts.config.empty() ? gen_spec : cfg.family;
            fam.kind = cfg.family.kind;
            fam.seed = cfg.seeds.front();
            if (!gen_opts.n && gen_opts.config.empty()) throw ValidationError("generate needs --N");
            const Graph g = generate(fam, cfg.sizes.front());
            if (gen_file.empty()) {
                std::cout << format_edge_list(g);
            } else {
                write_edge_list(g, gen_file);
            }
        } else if (*spec) {
            const Graph g = read_edge_list(spec_graph);
            const DegreeBounds tight = DegreeBounds::of(g);
            SpectralOptions opts;
            opts.leader = spec_leader;
            opts.bounds = DegreeBounds(spec_q.value_or(tight.q), spec_wmin.value_or(tight.w_min),
                                       spec_wmax.value_or(tight.w_max));
            opts.cheeger_cap = spec_cap;
            opts.family = spec_label;
            opts.seed = spec_seed;
            const auto report = spectral_report(g, opts);
            std::cout << spectral_csv_header() << "\n" << to_csv_row(report) << "\n";
        } else if (*sim) {
            ExperimentConfig cfg = resolve(ExperimentKind::formation, sim_opts);
            std::optional<Graph> g;
            if (!sim_graph.empty()) {
                g = read_edge_list(sim_graph);
            } else {
                FamilySpec fam = cfg.family;
                if (sim_opts.config.empty()) fam.k = sim_k;
                fam.seed = cfg.seeds.front();
                g = generate(fam, cfg.sizes.front());
            }
            const ConsensusGains gains(sim_opts.config.empty() ? parse_list(sim_gains) : cfg.gains, cfg.a_max);
            const ConsensusSystem sys(*g, gains, sim_opts.leader);
            Eigen::VectorXd x0 = Eigen::VectorXd::Zero(sys.state_dim());
            if (sim_x0 == "random") {
                Rng rng(cfg.seeds.front());
                for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = rng.normal();
            }
            std::vector<SimEvent> events;
            for (const auto& s : sim_impulses) {
                const auto f = parse_fields(s, 4, "impulse");
                events.push_back(SimEvent::impulse(f[0], static_cast<int>(f[1]), static_cast<int>(f[2]), f[3]));
            }
            for (const auto& s : sim_steps) {
                const auto f = parse_fields(s, 5, "step");
                events.push_back(SimEvent::step(f[0], f[1], static_cast<int>(f[2]), static_cast<int>(f[3]), f[4]));
            }
            if (!sim_ground.empty()) {
                const auto f = parse_fields(sim_ground, 2, "ground");
                events.push_back(SimEvent::grounding(f[0], static_cast<int>(f[1])));
            }
            const Trajectory traj = simulate(sys, x0, events, sim_T, sim_dt, {sim_every});
            for (const auto& w : traj.warnings) std::clog << "warning: " << w << "\n";
            const std::string dir = sim_opts.out.empty() ? "out/simulate" : sim_opts.out;
            write_text_file(dir + "/trajectory.csv", trajectory_csv(traj));
            write_text_file(dir + "/events.csv", events_csv(traj));
            std::cout << "wrote " << traj.size() << " samples to " << dir << "\n";
        } else if (*sweep) {
            const auto cfg = resolve(ExperimentKind::sweep, sweep_opts);
            const auto r = run_scaling_sweep(cfg);
            std::cout << "lattice log-log slope " << r.lattice_slope << ", random min lambda2 " << r.random_min_lambda2
                      << ", grounded bound " << (r.bound_holds ? "holds" : "VIOLATED") << "\n"
                      << "wrote " << cfg.output_dir << "\n";
        } else if (*formation) {
            const auto cfg = resolve(ExperimentKind::formation, demo_opts);
            const auto r = run_formation_demo(cfg);
            for (const auto& run : r.runs) {
                std::cout << "N=" << run.n << (run.grounded ? " grounded   " : " leaderless ") << "lambda=" << run.lambda
                          << " settling=";
                if (run.settling_time) {
                    std::cout << *run.settling_time << " s\n";
                } else {
                    std::cout << "not settled\n";
                }
            }
            std::cout << "wrote " << cfg.output_dir << "\n";
        } else if (*third) {
            const auto cfg = resolve(ExperimentKind::third_order, demo_opts);
            const auto r = run_third_order_demo(cfg);
            std::cout << "seed " << r.seed_used << ": lambda2=" << r.lambda2 << " grounded lambda1=" << r.grounded_lambda1
                      << " threshold=" << r.threshold << "\n"
                      << "deviation at check " << r.deviation_at_check << " (peak " << r.peak_before_grounding << ")\n"
                      << "deviation grows " << r.deviation_at_end / r.deviation_at_repeat << "x after grounding\n"
                      << "max Re eig(grounded) = " << r.grounded_max_real << "\n"
                      << "wrote " << cfg.output_dir << "\n";
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}

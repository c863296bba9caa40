#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cscale/dynamics.hpp"

namespace cscale {

enum class EventKind {
    impulse,    // adds `magnitude` to derivative block `deriv_order` of `node`
    step,       // adds `magnitude` to the rate of that block over [time, time + duration)
    grounding,  // switches `node` to leader: its control turns off
};

struct SimEvent {
    double time = 0.0;
    EventKind kind = EventKind::impulse;
    int node = 0;
    int deriv_order = 0;
    double magnitude = 0.0;
    double duration = 0.0;

    static SimEvent impulse(double t, int node, int deriv_order, double magnitude);
    static SimEvent step(double t, double duration, int node, int deriv_order, double magnitude);
    static SimEvent grounding(double t, int node);
};

struct EventRecord {
    double time;
    std::string kind;  // "disturbance" or "grounding"
    int node;
    std::string payload;
};

// Uniformly sampled state history. Each state stacks the derivative blocks
// (positions first). Samples from `grounded_from` on are grounded: they hold
// followers only, measured relative to the leader, whose control is off and
// whose own trajectory is the polynomial fixed by its state at grounding.
struct Trajectory {
    int order = 1;
    int node_count = 0;
    double sample_dt = 0.0;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<EventRecord> events;
    std::optional<int> leader;
    std::size_t grounded_from = 0;  // == times.size() when never grounded
    std::vector<std::string> warnings;

    std::size_t size() const { return times.size(); }
    bool grounded_at(std::size_t sample) const { return leader.has_value() && sample >= grounded_from; }
    int agents_at(std::size_t sample) const { return node_count - (grounded_at(sample) ? 1 : 0); }
    int node_at(std::size_t sample, int slot) const;

    // Derivative block `order_k` of the agents carried at `sample`.
    Eigen::VectorXd block(std::size_t sample, int order_k = 0) const;
    // Positions of all N nodes; when grounded the leader sits at 0 in its own frame.
    Eigen::VectorXd all_positions(std::size_t sample) const;
    // ||x - x_avg|| over all N positions. Frame-independent.
    double deviation_norm(std::size_t sample) const;
    // First sample at or after time t.
    std::size_t index_at(double t) const;
};

struct SimulationOptions {
    int record_every = 1;
};

// Step-size guard on dt * max|eig(A)|: warning at 1, error above this.
inline constexpr double kRk4StabilityLimit = 2.7;

// Classical fixed-step RK4 over [0, T]. Events fire at the grid step nearest
// their time, before that step is taken; recorded states are post-event.
// Throws NumericalError when the step violates the RK4 stability guard.
Trajectory simulate(const ConsensusSystem& sys, const Eigen::VectorXd& x0, std::vector<SimEvent> events, double T,
                    double dt, const SimulationOptions& options = {});

struct EnvelopeCheck {
    bool holds;
    double max_violation;  // worst ||x(t)-avg|| / (||x(0)-avg|| e^{-a0 lambda2 t})
};

inline constexpr double kEnvelopeSlack = 1e-6;

// Checks ||x(t) - x_avg|| <= ||x(0) - x_avg|| exp(-a0 lambda2 t) at every
// sample. Needs a first-order, event-free trajectory.
EnvelopeCheck convergence_envelope_check(const Trajectory& traj, double lambda2, double a0);

struct SettlingReference {
    enum class Mode { average, fixed } mode = Mode::average;
    Eigen::VectorXd target;  // per agent, fixed mode only

    static SettlingReference average() { return {}; }
    static SettlingReference fixed(Eigen::VectorXd target) { return {Mode::fixed, std::move(target)}; }
};

// Per-sample max_i |x_i - ref_i|.
double position_error(const Trajectory& traj, std::size_t sample, const SettlingReference& ref);

// First time after the last event from which every node stays within
// band * (peak error) of the reference until the horizon ends. The crossing is
// interpolated linearly between samples. nullopt when not settled.
std::optional<double> settling_time(const Trajectory& traj, const SettlingReference& ref, double band);

// CSV `t,node,deriv_order,value` and event sidecar `t,kind,node,payload`.
std::string trajectory_csv(const Trajectory& traj, std::size_t stride = 1);
std::string events_csv(const Trajectory& traj);

}  // namespace cscale

#include "cscale/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "cscale/errors.hpp"
#include "cscale/io.hpp"

namespace cscale {

SimEvent SimEvent::impulse(double t, int node, int deriv_order, double magnitude) {
    return {t, EventKind::impulse, node, deriv_order, magnitude, 0.0};
}

SimEvent SimEvent::step(double t, double duration, int node, int deriv_order, double magnitude) {
    return {t, EventKind::step, node, deriv_order, magnitude, duration};
}

SimEvent SimEvent::grounding(double t, int node) { return {t, EventKind::grounding, node, 0, 0.0, 0.0}; }

int Trajectory::node_at(std::size_t sample, int slot) const {
    if (grounded_at(sample) && slot >= *leader) return slot + 1;
    return slot;
}

Eigen::VectorXd Trajectory::block(std::size_t sample, int order_k) const {
    const int m = agents_at(sample);
    return states.at(sample).segment(static_cast<Eigen::Index>(order_k) * m, m);
}

Eigen::VectorXd Trajectory::all_positions(std::size_t sample) const {
    const Eigen::VectorXd p = block(sample, 0);
    if (!grounded_at(sample)) return p;
    Eigen::VectorXd full(node_count);
    const int l = *leader;
    full.head(l) = p.head(l);
    full(l) = 0.0;
    full.tail(node_count - l - 1) = p.tail(node_count - l - 1);
    return full;
}

double Trajectory::deviation_norm(std::size_t sample) const {
    const Eigen::VectorXd p = all_positions(sample);
    return (p.array() - p.mean()).matrix().norm();
}

std::size_t Trajectory::index_at(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9 * sample_dt);
    return std::min(static_cast<std::size_t>(it - times.begin()), times.empty() ? 0 : times.size() - 1);
}

namespace {

double spectral_radius(const ConsensusSystem& sys) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(build_closed_loop(sys), false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on the closed loop");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void check_step(const ConsensusSystem& sys, double dt, std::vector<std::string>& warnings) {
    const double z = dt * spectral_radius(sys);
    if (z > kRk4StabilityLimit) {
        throw NumericalError("dt * max|eig(A)| = " + std::to_string(z) + " exceeds the RK4 stability guard " +
                             std::to_string(kRk4StabilityLimit));
    }
    if (z >= 1.0) warnings.push_back("dt * max|eig(A)| = " + std::to_string(z) + " >= 1; accuracy may suffer");
}

// xi' = A xi + input, using the block structure: each block is the next
// one's integral, the last block is driven by -K sum_k a_k xi_k.
struct ClosedLoopRhs {
    const Eigen::MatrixXd* K;
    std::vector<double> a;
    Eigen::Index m;
    mutable Eigen::VectorXd combo;

    void operator()(const Eigen::VectorXd& xi, const Eigen::VectorXd& input, Eigen::VectorXd& out) const {
        const int n = static_cast<int>(a.size());
        for (int k = 0; k + 1 < n; ++k) out.segment(k * m, m) = xi.segment((k + 1) * m, m);
        combo = a[0] * xi.head(m);
        for (int k = 1; k < n; ++k) combo += a[k] * xi.segment(k * m, m);
        out.tail(m).noalias() = -(*K) * combo;
        out += input;
    }
};

std::string describe(const SimEvent& e) {
    if (e.kind == EventKind::impulse) {
        return "impulse order=" + std::to_string(e.deriv_order) + " magnitude=" + format_number(e.magnitude);
    }
    return "step order=" + std::to_string(e.deriv_order) + " magnitude=" + format_number(e.magnitude) +
           " duration=" + format_number(e.duration);
}

}  // namespace

Trajectory simulate(const ConsensusSystem& sys_in, const Eigen::VectorXd& x0, std::vector<SimEvent> events, double T,
                    double dt, const SimulationOptions& options) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw ValidationError("simulation needs dt > 0 and T >= 0");
    if (options.record_every < 1) throw ValidationError("record_every must be >= 1");
    if (x0.size() != sys_in.state_dim()) {
        throw ValidationError("initial state has dimension " + std::to_string(x0.size()) + ", expected " +
                              std::to_string(sys_in.state_dim()));
    }
    const int n = sys_in.order();
    const long steps = std::lround(T / dt);
    auto step_index = [dt](double t) { return std::lround(t / dt); };

    int groundings = 0;
    for (const auto& e : events) {
        if (!(e.time >= 0.0) || e.time > T + 0.5 * dt) throw ValidationError("event time outside [0, T]");
        require_node(sys_in.graph(), e.node, "event node");
        if (e.kind == EventKind::grounding) {
            if (sys_in.grounded() || ++groundings > 1) throw ValidationError("a system can be grounded only once");
        } else {
            if (e.deriv_order < 0 || e.deriv_order >= n) throw ValidationError("disturbance derivative order out of range");
            if (e.kind == EventKind::step && !(e.duration > 0.0)) throw ValidationError("step disturbance needs a positive duration");
        }
    }
    // Groundings first so disturbances at the same instant address the new frame.
    std::stable_sort(events.begin(), events.end(), [&](const SimEvent& a, const SimEvent& b) {
        const long ia = step_index(a.time), ib = step_index(b.time);
        if (ia != ib) return ia < ib;
        return (a.kind == EventKind::grounding) > (b.kind == EventKind::grounding);
    });

    ConsensusSystem sys = sys_in;
    Trajectory traj;
    traj.order = n;
    traj.node_count = sys.graph().node_count();
    traj.sample_dt = dt * options.record_every;
    traj.leader = sys.leader();
    check_step(sys, dt, traj.warnings);

    Eigen::VectorXd xi = x0;
    ClosedLoopRhs rhs{&sys.coupling(), sys.gains().coefficients(), sys.agents(), Eigen::VectorXd()};
    Eigen::VectorXd k1, k2, k3, k4, work, input;
    auto resize = [&] {
        const auto dim = xi.size();
        for (auto* v : {&k1, &k2, &k3, &k4, &work}) v->resize(dim);
        input = Eigen::VectorXd::Zero(dim);
        rhs.K = &sys.coupling();
        rhs.m = sys.agents();
    };
    resize();
    traj.grounded_from = sys.grounded() ? 0 : std::numeric_limits<std::size_t>::max();

    std::size_t next_event = 0;
    for (long k = 0; k <= steps; ++k) {
        const double t = k * dt;
        for (; next_event < events.size() && step_index(events[next_event].time) <= k; ++next_event) {
            const auto& e = events[next_event];
            if (e.kind == EventKind::grounding) {
                const int m = sys.agents();
                Eigen::VectorXd leader_state(n);
                for (int o = 0; o < n; ++o) leader_state(o) = xi(o * m + e.node);
                sys = sys.grounded_at(e.node);
                const int mg = sys.agents();
                Eigen::VectorXd reduced(n * mg);
                for (int o = 0; o < n; ++o) {
                    for (int s = 0; s < mg; ++s) reduced(o * mg + s) = xi(o * m + sys.node_at(s)) - leader_state(o);
                }
                xi = std::move(reduced);
                resize();
                check_step(sys, dt, traj.warnings);
                traj.leader = e.node;
                std::string payload = "leader_state=";
                for (int o = 0; o < n; ++o) payload += (o ? ";" : "") + format_number(leader_state(o));
                traj.events.push_back({t, "grounding", e.node, payload});
            } else if (e.kind == EventKind::impulse) {
                xi(e.deriv_order * sys.agents() + sys.slot_of(e.node)) += e.magnitude;
                traj.events.push_back({t, "disturbance", e.node, describe(e)});
            } else {
                traj.events.push_back({t, "disturbance", e.node, describe(e)});
            }
        }

        input.setZero();
        for (const auto& e : events) {
            if (e.kind != EventKind::step) continue;
            if (k >= step_index(e.time) && k < step_index(e.time + e.duration)) {
                if (sys.leader() && e.node == *sys.leader()) continue;
                input(e.deriv_order * sys.agents() + sys.slot_of(e.node)) += e.magnitude;
            }
        }

        if (k % options.record_every == 0) {
            if (sys.grounded() && traj.grounded_from == std::numeric_limits<std::size_t>::max()) {
                traj.grounded_from = traj.times.size();
            }
            traj.times.push_back(t);
            traj.states.push_back(xi);
        }
        if (k == steps) break;

        rhs(xi, input, k1);
        work = xi + 0.5 * dt * k1;
        rhs(work, input, k2);
        work = xi + 0.5 * dt * k2;
        rhs(work, input, k3);
        work = xi + dt * k3;
        rhs(work, input, k4);
        xi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!xi.allFinite()) throw NumericalError("state became non-finite at t = " + std::to_string(t + dt));
    }
    if (traj.grounded_from == std::numeric_limits<std::size_t>::max()) traj.grounded_from = traj.times.size();
    return traj;
}

EnvelopeCheck convergence_envelope_check(const Trajectory& traj, double lambda2, double a0) {
    if (traj.order != 1) throw ValidationError("convergence envelope applies to first-order runs only");
    if (!traj.events.empty() || traj.leader) throw ValidationError("convergence envelope needs an event-free leaderless run");
    if (traj.size() == 0) throw ValidationError("empty trajectory");

    const double initial = traj.deviation_norm(0);
    const double floor = 1e-12 * (1.0 + traj.all_positions(0).norm());
    EnvelopeCheck check{true, 0.0};
    for (std::size_t s = 0; s < traj.size(); ++s) {
        const double lhs = traj.deviation_norm(s);
        const double rhs = initial * std::exp(-a0 * lambda2 * (traj.times[s] - traj.times[0]));
        if (lhs > rhs * (1.0 + kEnvelopeSlack) + floor) check.holds = false;
        if (rhs > floor) check.max_violation = std::max(check.max_violation, lhs / rhs);
    }
    return check;
}

double position_error(const Trajectory& traj, std::size_t sample, const SettlingReference& ref) {
    if (ref.mode == SettlingReference::Mode::average) {
        const Eigen::VectorXd p = traj.all_positions(sample);
        return (p.array() - p.mean()).abs().maxCoeff();
    }
    const Eigen::VectorXd p = traj.block(sample, 0);
    if (ref.target.size() != p.size()) throw ValidationError("settling reference has the wrong dimension");
    return (p - ref.target).cwiseAbs().maxCoeff();
}

std::optional<double> settling_time(const Trajectory& traj, const SettlingReference& ref, double band) {
    if (!(band > 0.0) || band >= 1.0) throw ValidationError("settling band must be in (0, 1)");
    if (traj.size() == 0) return std::nullopt;
    const double start_time = traj.events.empty() ? traj.times.front() : traj.events.back().time;
    const std::size_t start = traj.index_at(start_time);

    std::vector<double> err(traj.size() - start);
    for (std::size_t s = start; s < traj.size(); ++s) err[s - start] = position_error(traj, s, ref);
    const double peak = *std::max_element(err.begin(), err.end());
    if (peak == 0.0) return traj.times[start];
    const double threshold = band * peak;

    std::size_t last_out = err.size();
    for (std::size_t i = err.size(); i-- > 0;) {
        if (err[i] > threshold) {
            last_out = i;
            break;
        }
    }
    if (last_out == err.size()) return traj.times[start];
    if (last_out + 1 == err.size()) return std::nullopt;
    const double t0 = traj.times[start + last_out], t1 = traj.times[start + last_out + 1];
    const double e0 = err[last_out], e1 = err[last_out + 1];
    return t0 + (e0 - threshold) / (e0 - e1) * (t1 - t0);
}

std::string trajectory_csv(const Trajectory& traj, std::size_t stride) {
    if (stride == 0) throw ValidationError("stride must be positive");
    std::string out = "t,node,deriv_order,value\n";
    for (std::size_t s = 0; s < traj.size(); s += stride) {
        const int m = traj.agents_at(s);
        const std::string t = format_number(traj.times[s]);
        for (int o = 0; o < traj.order; ++o) {
            for (int slot = 0; slot < m; ++slot) {
                out += t + "," + std::to_string(traj.node_at(s, slot)) + "," + std::to_string(o) + "," +
                       format_number(traj.states[s](o * m + slot)) + "\n";
            }
        }
    }
    return out;
}

std::string events_csv(const Trajectory& traj) {
    std::string out = "t,kind,node,payload\n";
    for (const auto& e : traj.events) {
        out += format_number(e.time) + "," + e.kind + "," + std::to_string(e.node) + "," + e.payload + "\n";
    }
    return out;
}

}  // namespace cscale

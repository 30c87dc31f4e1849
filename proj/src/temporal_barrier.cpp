#include "complexmech/temporal_barrier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace complexmech::temporal {

namespace {

double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

void append_event(std::string& tag, EventKind kind) {
    if (!tag.empty()) tag += '+';
    tag += to_string(kind);
}

}  // namespace

std::string_view to_string(ProfileKind kind) { return kind == ProfileKind::Square ? "square" : "smooth_bump"; }

ProfileKind profile_kind_from_string(std::string_view name) {
    if (name == "square") return ProfileKind::Square;
    if (name == "smooth_bump") return ProfileKind::SmoothBump;
    throw std::invalid_argument("unknown profile kind '" + std::string(name) + "'");
}

std::string_view to_string(EnergyModel model) { return model == EnergyModel::NonRel ? "nonrel" : "rel"; }

EnergyModel energy_model_from_string(std::string_view name) {
    if (name == "nonrel") return EnergyModel::NonRel;
    if (name == "rel") return EnergyModel::Rel;
    throw std::invalid_argument("unknown energy model '" + std::string(name) + "'");
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::EnergyZero: return "EnergyZero";
        case EventKind::Destroyed: return "Destroyed";
        case EventKind::BarrierEntered: return "BarrierEntered";
        case EventKind::BarrierExited: return "BarrierExited";
    }
    return "?";
}

TemporalProfile TemporalProfile::square(double t_a, double t_b, double w0) {
    TemporalProfile p{ProfileKind::Square, t_a, t_a, t_b, t_b, w0};
    p.validate();
    return p;
}

TemporalProfile TemporalProfile::smooth_bump(double t1, double t_a, double t_b, double t2, double w0) {
    TemporalProfile p{ProfileKind::SmoothBump, t1, t_a, t_b, t2, w0};
    p.validate();
    return p;
}

void TemporalProfile::validate() const {
    if (!(std::isfinite(w0) && w0 >= 0.0)) throw std::invalid_argument("W0 must be finite and >= 0");
    if (!(t_a < t_b)) throw std::invalid_argument("temporal profile requires t_a < t_b");
    if (kind == ProfileKind::SmoothBump && !(t1 < t_a && t_b < t2)) {
        throw std::invalid_argument("smooth bump requires t1 < t_a < t_b < t2");
    }
}

std::vector<double> TemporalProfile::breakpoints() const {
    if (kind == ProfileKind::Square) return {t_a, t_b};
    return {t1, t_a, t_b, t2};
}

double profile_value(const TemporalProfile& profile, double t) {
    if (profile.kind == ProfileKind::Square) return (t >= profile.t_a && t < profile.t_b) ? profile.w0 : 0.0;
    if (t <= profile.t1 || t >= profile.t2) return 0.0;
    if (t < profile.t_a) return profile.w0 * smoothstep((t - profile.t1) / (profile.t_a - profile.t1));
    if (t <= profile.t_b) return profile.w0;
    return profile.w0 * smoothstep((profile.t2 - t) / (profile.t2 - profile.t_b));
}

double profile_value_before(const TemporalProfile& profile, double t) {
    if (profile.kind == ProfileKind::Square) return (t > profile.t_a && t <= profile.t_b) ? profile.w0 : 0.0;
    return profile_value(profile, t);
}

Complex total_energy(const ClassicalState& state, const TemporalProfile& profile, EnergyModel model,
                     const Units& units) {
    units.validate();
    const double m = state.m;
    if (!(m > 0.0)) throw std::invalid_argument("mass must be > 0");
    if (model == EnergyModel::NonRel) {
        const Complex p_im{0.0, state.pi_im};
        const Complex kinetic = (state.p_re * state.p_re + p_im * p_im) / (2.0 * m);
        return kinetic + profile_value(profile, state.t);
    }
    const double c = units.c;
    const double v_re = state.p_re / m;
    const double v_x = state.pi_im / m;
    if (!(std::abs(v_re) < c)) throw std::domain_error("relativistic energy needs |v_re| < c");
    if (!(std::abs(v_x) < c)) throw std::domain_error("relativistic energy needs |v_im| < |c_im|");
    const Complex c_im = units.c_im();
    const Complex v_im{0.0, v_x};
    const Complex real_world = c * c / std::sqrt(Complex{1.0 - v_re * v_re / (c * c), 0.0});
    const Complex imaginary_world = c_im * c_im / std::sqrt(1.0 - v_im * v_im / (c_im * c_im));
    return static_cast<double>(state.mass_sign) * m * (real_world + imaginary_world);
}

Trajectory integrate_classical(const ClassicalState& state0, const TemporalProfile& profile, EnergyModel model,
                               double dt, double t_end, const Units& units) {
    units.validate();
    profile.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (!(t_end > state0.t)) throw std::invalid_argument("t_end must exceed the start time");
    if (!(state0.m > 0.0)) throw std::invalid_argument("mass must be > 0");

    const double m = state0.m;
    const double direction = state0.p_re < 0.0 ? -1.0 : 1.0;
    const double w_start = profile_value(profile, state0.t);
    const double e_sys0 = (state0.p_re * state0.p_re - state0.pi_im * state0.pi_im) / (2.0 * m);

    Trajectory traj;
    traj.total_energy = e_sys0 + w_start;

    auto set_momenta = [&](ClassicalState& s, double e_sys) {
        if (e_sys >= 0.0) {
            s.p_re = direction * std::sqrt(2.0 * m * e_sys);
            s.pi_im = 0.0;
        } else {
            s.p_re = 0.0;
            s.pi_im = std::sqrt(-2.0 * m * e_sys);
        }
    };

    std::vector<double> stops;
    for (double b : profile.breakpoints()) {
        if (b > state0.t && b < t_end) stops.push_back(b);
    }
    stops.push_back(t_end);

    ClassicalState state = state0;
    traj.samples.push_back({state, w_start, e_sys0, {}});

    double e_prev = e_sys0;
    bool crossed = false;
    std::size_t next_stop = 0;
    const double min_step = dt * 1e-12;

    auto mark_crossing = [&](double t_cross, ClassicalState& s, std::string& tag) -> bool {
        traj.events.push_back({EventKind::EnergyZero, t_cross, s});
        append_event(tag, EventKind::EnergyZero);
        crossed = true;
        if (model == EnergyModel::NonRel) {
            traj.destroyed = true;
            traj.events.push_back({EventKind::Destroyed, t_cross, s});
            append_event(tag, EventKind::Destroyed);
            return true;
        }
        s.mass_sign = -1;
        traj.time_direction = -1;
        return false;
    };

    while (state.t < t_end) {
        const double t = state.t;
        const double stop = stops[next_stop];
        double h = std::min(dt, stop - t);
        const double w_here = profile_value(profile, t);
        while (std::abs(profile_value_before(profile, t + h) - w_here) > 0.01 * profile.w0) {
            h *= 0.5;
            ++traj.rejected_steps;
            if (h < min_step) throw std::runtime_error("step refinement failed to bound |dW|");
        }
        const bool lands_on_stop = (h == stop - t);
        const double t_new = lands_on_stop ? stop : t + h;
        const double e_left = traj.total_energy - profile_value_before(profile, t_new);

        ClassicalState next = state;
        std::string tag;

        if (!crossed && e_prev > 0.0 && e_left <= 0.0) {
            const double t_cross = t + (t_new - t) * e_prev / (e_prev - e_left);
            // Energy is zero at the crossing: the momenta fall linearly to zero.
            next.q_re += 0.5 * (t_cross - t) * state.p_re / m;
            next.x_im += 0.5 * (t_cross - t) * state.pi_im / m;
            next.t = t_cross;
            next.p_re = 0.0;
            next.pi_im = 0.0;
            if (mark_crossing(t_cross, next, tag)) {
                traj.samples.push_back({next, traj.total_energy, 0.0, tag});
                return traj;
            }
            traj.samples.push_back({next, traj.total_energy, 0.0, tag});
            tag.clear();
            state = next;
        }
        set_momenta(next, e_left);

        const double h_eff = t_new - state.t;
        next.q_re = state.q_re + 0.5 * h_eff * (state.p_re + next.p_re) / m;
        next.x_im = state.x_im + 0.5 * h_eff * (state.pi_im + next.pi_im) / m;
        next.t = t_new;

        if (lands_on_stop) {
            if (t_new == profile.support_begin()) {
                traj.events.push_back({EventKind::BarrierEntered, t_new, next});
                append_event(tag, EventKind::BarrierEntered);
            }
            if (t_new == profile.support_end()) {
                traj.events.push_back({EventKind::BarrierExited, t_new, next});
                append_event(tag, EventKind::BarrierExited);
            }
            ++next_stop;
        }

        // Square profiles jump at their breakpoints; apply the jump here.
        const double w_new = profile_value(profile, t_new);
        const double e_new = traj.total_energy - w_new;
        if (!crossed && e_left > 0.0 && e_new <= 0.0) {
            next.p_re = 0.0;
            next.pi_im = 0.0;
            if (mark_crossing(t_new, next, tag)) {
                traj.samples.push_back({next, traj.total_energy, 0.0, tag});
                return traj;
            }
        }
        set_momenta(next, e_new);

        traj.samples.push_back({next, w_new, e_new, tag});
        state = next;
        e_prev = e_new;
    }
    return traj;
}

QuantumContrast quantum_contrast(const TemporalProfile& profile, double p0_re, double m, const Units& units) {
    profile.validate();
    if (profile.kind != ProfileKind::Square) throw std::invalid_argument("quantum contrast needs a square profile");
    QuantumContrast out{states::temporal_tunnel_state(profile.t_a, profile.t_b, profile.w0, p0_re, m, units),
                        p0_re * p0_re / (2.0 * m), 0.0, 0.0, false, false, std::nullopt, false};
    const auto& regions = out.state.regions;
    out.e_t = regions[1].label.energy.real();
    out.conservation_defect = (out.e_t + profile.w0) - out.e0;
    out.quantum_survives = regions[2].label == regions[0].label;
    out.marginal = profile.w0 == out.e0;

    const double width = profile.t_b - profile.t_a;
    const ClassicalState start{profile.t_a - width, 0.0, p0_re, 0.0, 0.0, m, 1};
    const Trajectory traj =
        integrate_classical(start, profile, EnergyModel::NonRel, width / 1000.0, profile.t_b + width, units);
    out.classical_destroyed = traj.destroyed;
    for (const auto& ev : traj.events) {
        if (ev.kind == EventKind::Destroyed) out.classical_event_time = ev.t;
    }
    return out;
}

}  // namespace complexmech::temporal

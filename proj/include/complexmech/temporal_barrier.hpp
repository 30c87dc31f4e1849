#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "complexmech/core.hpp"
#include "complexmech/states.hpp"

// Classical system draining energy into an external system W(t).
//
// No force law acts in space: the system's energy is E_total - W(t) and the
// momenta follow from it. While that energy is positive it is real kinetic
// energy p_re^2 / 2m; once it goes negative it can only be carried as the
// negative kinetic energy -pi_im^2 / 2m of imaginary motion.
namespace complexmech::temporal {

enum class ProfileKind { Square, SmoothBump };

std::string_view to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

/// Square: W0 on [t_a, t_b), zero elsewhere (t1, t2 ignored).
/// SmoothBump: cubic smoothstep rise on [t1, t_a], plateau W0 on [t_a, t_b],
/// smoothstep fall on [t_b, t2]; C1 everywhere.
struct TemporalProfile {
    ProfileKind kind;
    double t1;
    double t_a;
    double t_b;
    double t2;
    double w0;

    static TemporalProfile square(double t_a, double t_b, double w0);
    static TemporalProfile smooth_bump(double t1, double t_a, double t_b, double t2, double w0);

    void validate() const;
    /// Times where the profile changes formula, ascending.
    std::vector<double> breakpoints() const;
    /// First and last time where W can be non-zero.
    double support_begin() const { return kind == ProfileKind::Square ? t_a : t1; }
    double support_end() const { return kind == ProfileKind::Square ? t_b : t2; }
};

double profile_value(const TemporalProfile& profile, double t);

/// Value just before t (differs from profile_value only at Square jumps).
double profile_value_before(const TemporalProfile& profile, double t);

struct ClassicalState {
    double t;
    double q_re;
    double p_re;
    double x_im;   // q_im = i * x_im
    double pi_im;  // p_im = i * pi_im
    double m;
    int mass_sign = 1;
};

enum class EnergyModel { NonRel, Rel };

std::string_view to_string(EnergyModel model);
EnergyModel energy_model_from_string(std::string_view name);

/// NonRel: p_re^2/2m + (i pi_im)^2/2m + W(t).
/// Rel: mass_sign * m * (c^2 / sqrt(1 - v_re^2/c^2) + c_im^2 / sqrt(1 - v_im^2/c_im^2))
/// with c_im = i c, v_re = p_re / m and v_im = i pi_im / m, evaluated in
/// complex arithmetic. At rest in both worlds it is m c^2 - m c^2 = 0. The sign
/// multiplies both terms. W is not part of the relativistic expression.
/// Throws std::domain_error when |v_re| >= c or |v_im| >= c.
Complex total_energy(const ClassicalState& state, const TemporalProfile& profile, EnergyModel model,
                     const Units& units);

enum class EventKind { EnergyZero, Destroyed, BarrierEntered, BarrierExited };

std::string_view to_string(EventKind kind);

struct TrajectoryEvent {
    EventKind kind;
    double t;
    ClassicalState state;
};

struct TrajectorySample {
    ClassicalState state;
    double w;
    double system_energy;
    std::string event;  // events at this sample joined by '+', empty if none
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<TrajectoryEvent> events;
    double total_energy;
    bool destroyed = false;
    /// -1 after a Rel run passes through zero energy: the system is then
    /// described as propagating towards the past. Metadata only; the
    /// integration itself always advances t.
    int time_direction = 1;
    std::size_t rejected_steps = 0;
};

/// Advances from state0 to t_end with nominal step dt. Steps are split at
/// profile breakpoints and halved whenever |dW| over a step exceeds 0.01 W0.
/// The first downward crossing of zero system energy emits EnergyZero; NonRel
/// runs then stop with Destroyed, Rel runs flip mass_sign and continue.
Trajectory integrate_classical(const ClassicalState& state0, const TemporalProfile& profile, EnergyModel model,
                               double dt, double t_end, const Units& units);

struct QuantumContrast {
    states::PiecewiseState state;
    double e0;
    double e_t;
    /// E_T + W0 - E0, evaluated in floating point.
    double conservation_defect;
    /// After-barrier label equals the before-barrier label.
    bool quantum_survives;
    bool classical_destroyed;
    std::optional<double> classical_event_time;
    /// W0 == E0: the tunneling momentum is zero.
    bool marginal;
};

/// Square profiles only.
QuantumContrast quantum_contrast(const TemporalProfile& profile, double p0_re, double m, const Units& units);

}  // namespace complexmech::temporal

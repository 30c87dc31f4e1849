#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "complexmech/algebra.hpp"
#include "complexmech/core.hpp"

// Finite-well black hole. A particle falling from rest at infinity reaches
// the speed of light at r_E = 2 gamma M / c^2 (Newtonian energetics; the value
// coincides with the Schwarzschild radius). The potential is -gamma m M / r
// outside r_E and frozen at its r_E value inside, so the force vanishes within
// the horizon and nothing is singular at r = 0.
namespace complexmech::black_hole {

/// Radius where 1/2 c^2 = gamma M / r.
double horizon_radius(double mass, double grav, double c);

struct BlackHoleModel {
    double hole_mass;
    double particle_mass;
    double grav;
    double c;
    double r_horizon;

    static BlackHoleModel make(double hole_mass, double particle_mass, const Units& units);

    /// gamma m M, the depth of the well times r_E.
    double coupling() const { return grav * particle_mass * hole_mass; }
    void validate() const;
};

/// -gamma m M / max(r, r_E).
double potential(const BlackHoleModel& model, double r);

/// Radial force -dV/dr: zero for r < r_E, -gamma m M / r^2 beyond. At r_E the
/// outside value is returned.
double force(const BlackHoleModel& model, double r);

struct EscapeMomentum {
    Complex value;
    algebra::ValueClass value_class;
};

/// Principal root of 2 m (V(r_E) + p0^2 / 2m - V(r)).
EscapeMomentum escape_momentum(const BlackHoleModel& model, double r, double p0_re);

/// The forbidden shell reaches r = infinity and the action integral diverges.
class NonIntegrableShell : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// exp(-(2/hbar) integral |Im p(r)| dr) over the classically forbidden part of
/// [r_E, outer_radius]. E0 is the kinetic energy inside the well. Returns 1
/// when nothing in range is forbidden. With no outer radius the range is
/// unbounded; a forbidden shell then extends to infinity (V -> 0 while the
/// total energy is negative) and NonIntegrableShell is thrown.
double wkb_escape_probability(const BlackHoleModel& model, double e0, const Units& units,
                              std::optional<double> outer_radius = std::nullopt);

/// Start of the forbidden shell, gamma m M / -(E0 + V(r_E)); nullopt when the
/// total energy is non-negative and nothing is forbidden.
std::optional<double> forbidden_shell_start(const BlackHoleModel& model, double e0);

struct ClassicalEscape {
    bool escapes;
    double turning_radius;  // +infinity when the particle escapes
    bool leaves_interior;
};

/// Particle starting inside r_E moving outward with momentum p0_re.
ClassicalEscape classical_escape(const BlackHoleModel& model, double p0_re);

struct RadialSample {
    double r;
    double potential;
    Complex momentum;
    bool classically_allowed;
};

/// n evenly spaced radii on [r_min, r_max] (r_min >= 0).
std::vector<RadialSample> radial_profile(const BlackHoleModel& model, double p0_re, double r_min,
                                         double r_max, std::size_t n);

}  // namespace complexmech::black_hole

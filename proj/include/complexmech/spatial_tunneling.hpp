#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "complexmech/core.hpp"

namespace complexmech::scattering {

/// Piecewise-constant potential: k ascending breakpoints split the line into
/// k + 1 intervals, interval j spanning [breakpoints[j-1], breakpoints[j]).
class PiecewisePotential {
public:
    PiecewisePotential(std::vector<double> breakpoints, std::vector<double> values);

    /// V = 0 everywhere.
    static PiecewisePotential free();
    /// V0 on [q_a, q_b), 0 elsewhere.
    static PiecewisePotential barrier(double q_a, double q_b, double v0);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t interval_count() const { return values_.size(); }

    /// Index of the interval containing q; a breakpoint belongs to the interval
    /// on its right.
    std::size_t interval_of(double q) const;
    double value_at(double q) const { return values_[interval_of(q)]; }

    /// Width of an interior interval; infinite for the two outer ones.
    double width(std::size_t interval) const;

    /// Joins two potentials side by side. The right potential must start after
    /// this one ends and the shared asymptotic value must agree.
    PiecewisePotential concatenate(const PiecewisePotential& right) const;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// Principal root sqrt(2 m (E0 - V)); imaginary with positive imaginary part
/// inside a classically forbidden interval.
Complex tunneling_momentum(double e0, double v, double m);

/// Amplitude pair in one interval. For k != 0 the wave is
/// forward * exp(i k q) + backward * exp(-i k q) in absolute coordinates.
/// For k == 0 (E0 equal to the interval value) the basis degenerates and the
/// pair means forward + backward * q.
struct RegionAmplitudes {
    Complex forward;
    Complex backward;
};

struct TransferMatrix {
    /// Maps right-asymptote amplitudes onto left-asymptote amplitudes:
    /// (A_left, B_left) = matrix * (A_right, B_right).
    Eigen::Matrix2cd matrix;
    /// Some interval had E0 exactly equal to its value and was propagated by
    /// the k -> 0 limit.
    bool marginal = false;
};

/// Wavenumber sqrt(2 m (E0 - V)) / hbar of every interval.
std::vector<Complex> wavenumbers(const PiecewisePotential& pot, double e0, double m, const Units& units);

TransferMatrix transfer_matrix(const PiecewisePotential& pot, double e0, double m, const Units& units);

struct ScatterResult {
    double transmission;
    double reflection;
    /// One pair per interval, for unit incidence from the left and no wave
    /// arriving from the right.
    std::vector<RegionAmplitudes> amplitudes;
    std::vector<Complex> wavenumbers;
    bool marginal = false;
};

ScatterResult transmission_reflection(const PiecewisePotential& pot, double e0, double m, const Units& units);

/// Closed-form transmission through one rectangular barrier of height v0 > 0
/// and width l. Independent of the transfer-matrix path.
double square_barrier_transmission(double e0, double v0, double l, double m, const Units& units);

enum class EncounterOutcome { Reflected, Transmitted };

std::string_view to_string(EncounterOutcome outcome);

/// One constant-speed stretch of a classical itinerary.
struct Leg {
    double from;
    double to;
    double potential;
    double speed;
};

struct EncounterRecord {
    EncounterOutcome outcome;
    std::optional<double> reflected_at;
    double exit_momentum;
    std::vector<Leg> itinerary;
};

/// Classical particle launched from q0 (in a V = 0 interval) with momentum p0.
/// It is reflected at the first step higher than its energy p0^2 / 2m.
EncounterRecord classical_encounter(double q0, double p0, const PiecewisePotential& pot, double m);

}  // namespace complexmech::scattering

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "complexmech/black_hole.hpp"
#include "complexmech/core.hpp"

// Factored plane-wave states of the complexified theory and the piecewise
// states built from them for spatial, temporal and black-hole barriers.
//
// A product plane wave is
//
//   exp(-p_re q_re / (i hbar)) * exp(-p_im q_im / (i hbar)) * exp(E t / (i hbar))
//
// with q_im = i x. The imaginary factor has a real exponent product p_im q_im
// divided by i hbar, so it is a unit-modulus oscillation in x, not a real
// exponential.
//
// Tunneling momenta use sqrt(2 m (E0 - barrier)) throughout. The
// unit-bearing form keeps E_T = p_T^2 / 2m consistent with E_T + W0 = E0 and
// reproduces the usual decay constant hbar kappa = sqrt(2 m (V0 - E0)).
//
// Delta-normalized states are never L2-normalized; every comparison is
// pointwise or through a residual.
namespace complexmech::states {

struct PlaneWaveLabel {
    Complex p_re;
    Complex p_im;
    Complex energy;

    /// p_re purely real, p_im purely imaginary, all finite.
    void validate() const;
    bool operator==(const PlaneWaveLabel&) const = default;
};

/// Places a principal-root momentum into the real slot when it is real and
/// into the imaginary slot when it is imaginary (zero lands in neither).
PlaneWaveLabel label_from_momentum(Complex momentum, Complex energy);

/// Momentum the region's wave carries along its own axis, p_re + p_im. Every
/// label built here has at most one of the two slots non-zero.
Complex axis_momentum(const PlaneWaveLabel& label);

/// Sign in front of the spatial exponents. Standard keeps exp(-p q / (i hbar));
/// Flipped uses exp(+p q / (i hbar)). The time factor is never flipped.
enum class SignConvention { Standard, Flipped };

enum class Mode { Literal, Matched };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

struct ProductGrid {
    std::optional<GridSpec> q_re;
    std::optional<GridSpec> x_im;
    std::optional<GridSpec> t;
};

/// Per-axis factors of a sampled product plane wave. Axes without a grid are
/// absent and contribute 1.
struct PlaneWaveSamples {
    std::vector<Complex> q_re;
    std::vector<Complex> x_im;
    std::vector<Complex> t;

    Complex at(std::size_t iq, std::size_t ix, std::size_t it) const;
};

PlaneWaveSamples plane_wave(const PlaneWaveLabel& label, const ProductGrid& grids, const Units& units,
                            SignConvention convention = SignConvention::Standard);

/// exp(-p q / (i hbar)) sampled along q_re for an arbitrary complex p. With
/// p = sqrt(2 m (E0 - V0)) and E0 < V0 this is the decaying wave under a
/// barrier.
std::vector<Complex> real_axis_wave(Complex momentum, const GridSpec& grid, const Units& units,
                                    SignConvention convention = SignConvention::Standard);

/// Outside-region data of the black-hole escape state: the label momentum is
/// evaluated at each radius instead of being constant.
struct LocalEscapeMomentum {
    black_hole::BlackHoleModel model;
    double p0_re;
};

struct Region {
    Axis axis;
    double lo;
    double hi;
    PlaneWaveLabel label;
    Complex amp_fwd{1.0, 0.0};
    Complex amp_bwd{0.0, 0.0};
    /// Potential energy entering the region's Hamiltonian (V0 under a spatial
    /// barrier; 0 on the time axis, where the drain is external).
    double potential = 0.0;
    /// Energy held by the external system during this region (W0 inside a
    /// temporal barrier).
    double external = 0.0;
    std::optional<LocalEscapeMomentum> local;

    /// Label momentum at position q; differs from the stored label only for
    /// local regions.
    PlaneWaveLabel label_at(double q) const;
};

struct PiecewiseState {
    Axis axis;
    Mode mode;
    double mass;
    std::vector<Region> regions;

    /// Regions tile the axis without gaps or overlaps, labels and amplitudes
    /// are valid, Literal amplitudes are (1, 0).
    void validate() const;
};

PiecewiseState spatial_tunnel_state(double q_a, double q_b, double v0, double e0, double m,
                                    const Units& units, Mode mode);

PiecewiseState temporal_tunnel_state(double t_a, double t_b, double w0, double p0_re, double m,
                                     const Units& units, Mode mode = Mode::Literal);

/// r_a defaults to the horizon radius.
PiecewiseState bh_escape_state(const black_hole::BlackHoleModel& model, std::optional<double> r_a,
                               double p0_re, const Units& units);

/// Returns x with fl(x + w0) == e0 whenever such a double exists, starting
/// from e0 - w0. Keeps the energy bookkeeping exact in floating point.
double conserving_remainder(double e0, double w0);

/// Refills amplitudes from the transfer matrix of the state's own region
/// potentials (unit incidence from the left). Matching an already matched
/// state returns the same amplitudes.
PiecewiseState match(const PiecewiseState& state, const Units& units);

/// |E - (p_re^2 + p_im^2) / 2m - potential|.
double schrodinger_residual(const PlaneWaveLabel& label, double potential, double m);
double schrodinger_residual(const Region& region, double m);

struct WaveValue {
    Complex psi;
    Complex dpsi;
};

/// Wave and derivative of one region at q on a spatial axis. Constant labels
/// use the amplitude pair over exp(+-i p q / hbar) (or 1 and q when p = 0);
/// local regions use the WKB phase exp(+-(i/hbar) integral_lo^q p).
WaveValue evaluate(const Region& region, double q, const Units& units);

struct BoundaryMismatch {
    double at;
    double psi;        // |psi_left - psi_right|
    double dpsi;       // |psi'_left - psi'_right|
    double psi_rel;    // psi / max(|psi_left|, |psi_right|)
    double dpsi_rel;   // dpsi / max(|psi'_left|, |psi'_right|)
};

/// Continuity defects at every internal boundary. Time-axis states are
/// rejected: no matching condition is defined in time.
std::vector<BoundaryMismatch> boundary_mismatch(const PiecewiseState& state, const Units& units);

/// Samples the piecewise wave on a spatial grid.
std::vector<Complex> sample(const PiecewiseState& state, const GridSpec& grid, const Units& units);

/// Momentum read off the decaying wave under a barrier: real_axis_wave of the
/// tunneling momentum sampled on n points of [q_a, q_b], probed with the
/// discretized p_re through the row-window Rayleigh quotient (edge rows
/// dropped). On exp(-kappa q) the value is i hbar sinh(kappa d) / d, so the
/// relative gap to i sqrt(2 m (V0 - E0)) is about (kappa d)^2 / 6; the
/// tolerance reported is twice that.
struct BarrierMomentumProbe {
    Complex value;
    Complex expected;
    double rel_error;
    double tolerance;
    algebra::ValueClass value_class;
};

BarrierMomentumProbe probe_barrier_momentum(double q_a, double q_b, double v0, double e0, double m,
                                            const Units& units, std::size_t n = 201);

nlohmann::json to_json(const PiecewiseState& state);
PiecewiseState state_from_json(const nlohmann::json& j);

}  // namespace complexmech::states

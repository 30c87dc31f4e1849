#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Toy expanding universe with Hamilton function
//
//   H = pT^2 / 2m + (i pR)^2 / 2m - k (i xR)^2 / qT
//     = pT^2 / 2m - pR^2 / 2m + k xR^2 / qT
//
// in the real tangential pair (qT, pT) and the imaginary radial pair
// q^R_im = i xR, p^R_im = i pR, stored as real magnitudes.
//
// The first acceleration is often labelled a^R_re; it is -(1/m) dH/dqT and is
// exposed here as the tangential one, a_T.
namespace complexmech::cosmology {

struct CosmoState {
    double t = 0.0;
    double qT = 1.0;  // qT_re
    double pT = 0.0;  // pT_re
    double xR = 0.0;  // xR_im
    double pR = 0.0;  // pR_im_mag
    double k = 1.0;
    double m = 1.0;

    /// qT > 0, k > 0, m > 0, everything finite.
    void validate() const;
};

double hamiltonian(const CosmoState& s);

struct Accelerations {
    double aT;  // (k/m) xR^2 / qT^2
    double aR;  // imaginary magnitude, 2 (k/m) xR / qT
};

Accelerations accelerations(const CosmoState& s);

struct CosmoTrajectory {
    std::vector<CosmoState> samples;
    std::size_t steps = 0;
    double dt = 0.0;
};

/// qT came within the halt threshold of the singularity. Carries everything
/// integrated so far, ending in the last valid state.
class HaltedNearSingularity : public std::runtime_error {
public:
    HaltedNearSingularity(const std::string& what, CosmoTrajectory partial)
        : std::runtime_error(what), trajectory(std::move(partial)) {}
    CosmoTrajectory trajectory;
};

/// Kick-drift-kick leapfrog. Every sample_every-th step is kept, plus the
/// first and last. Halts when qT drops below qT(0) * 1e-6.
CosmoTrajectory integrate(const CosmoState& state0, double dt, double t_end, std::size_t sample_every = 1);

struct ExpansionReport {
    std::vector<double> vT;   // finite-difference velocities, per sample
    std::vector<double> vR;
    std::vector<double> aT_fd;  // second differences, interior samples (NaN at ends)
    std::vector<double> aR_fd;
    /// accelerations() > 0 at every sample with xR > 0 and qT > 0.
    bool positivity = true;
    std::size_t positivity_checked = 0;
    /// xR == 0 throughout: both accelerations vanish.
    bool degenerate = false;
    /// Max relative gap between second differences and accelerations().
    double fd_rel_error = 0.0;
    /// Longest run of consecutive samples with non-decreasing vT / |vR|.
    std::size_t vT_monotone_span = 0;
    std::size_t vR_monotone_span = 0;
    /// max |H - H0| / |H0| over the samples.
    double energy_drift = 0.0;
};

ExpansionReport expansion_report(const CosmoTrajectory& traj);

}  // namespace complexmech::cosmology

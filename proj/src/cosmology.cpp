#include "complexmech/cosmology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace complexmech::cosmology {

void CosmoState::validate() const {
    for (double v : {t, qT, pT, xR, pR, k, m}) {
        if (!std::isfinite(v)) throw std::invalid_argument("cosmology state must be finite");
    }
    if (!(qT > 0.0)) throw std::invalid_argument("qT_re must be > 0 (the potential is singular at 0)");
    if (!(k > 0.0)) throw std::invalid_argument("k must be > 0");
    if (!(m > 0.0)) throw std::invalid_argument("m must be > 0");
}

double hamiltonian(const CosmoState& s) {
    if (!(s.qT > 0.0)) throw std::invalid_argument("hamiltonian needs qT_re > 0");
    return (s.pT * s.pT - s.pR * s.pR) / (2.0 * s.m) + s.k * s.xR * s.xR / s.qT;
}

Accelerations accelerations(const CosmoState& s) {
    if (!(s.qT > 0.0)) throw std::invalid_argument("accelerations need qT_re > 0");
    const double r = s.xR / s.qT;
    return {s.k / s.m * r * r, 2.0 * s.k / s.m * r};
}

CosmoTrajectory integrate(const CosmoState& state0, double dt, double t_end, std::size_t sample_every) {
    state0.validate();
    if (!(dt > 0.0 && std::isfinite(dt))) throw std::invalid_argument("dt must be finite and > 0");
    if (!(t_end > state0.t)) throw std::invalid_argument("t_end must exceed the start time");
    if (sample_every == 0) throw std::invalid_argument("sample_every must be >= 1");

    CosmoTrajectory traj;
    traj.dt = dt;
    traj.samples.push_back(state0);
    const double floor = state0.qT * 1e-6;
    const auto n_steps = static_cast<std::size_t>(std::ceil((t_end - state0.t) / dt - 1e-9));

    CosmoState s = state0;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const double h = (i == n_steps) ? t_end - s.t : dt;
        // pR is the magnitude of i pR, so its kick carries the opposite sign
        // of the ordinary -dH/dx.
        CosmoState n = s;
        const double r = s.xR / s.qT;
        n.pT += 0.5 * h * s.k * r * r;
        n.pR += 0.5 * h * 2.0 * s.k * r;
        n.qT += h * n.pT / s.m;
        n.xR += h * n.pR / s.m;
        if (!(n.qT > floor) || !std::isfinite(n.qT)) {
            traj.samples.push_back(s);
            throw HaltedNearSingularity("qT_re approached 0 at t = " + std::to_string(s.t + h), std::move(traj));
        }
        const double r2 = n.xR / n.qT;
        n.pT += 0.5 * h * s.k * r2 * r2;
        n.pR += 0.5 * h * 2.0 * s.k * r2;
        n.t = (i == n_steps) ? t_end : state0.t + static_cast<double>(i) * dt;
        s = n;
        traj.steps = i;
        if (i % sample_every == 0 || i == n_steps) traj.samples.push_back(s);
    }
    return traj;
}

namespace {

// Three-point derivatives on a possibly non-uniform stencil.
double first_diff(double t0, double f0, double t1, double f1, double t2, double f2) {
    const double h0 = t1 - t0, h1 = t2 - t1;
    return (-h1 / (h0 * (h0 + h1))) * f0 + ((h1 - h0) / (h0 * h1)) * f1 + (h0 / (h1 * (h0 + h1))) * f2;
}

double second_diff(double t0, double f0, double t1, double f1, double t2, double f2) {
    const double h0 = t1 - t0, h1 = t2 - t1;
    return 2.0 * (f0 / (h0 * (h0 + h1)) - f1 / (h0 * h1) + f2 / (h1 * (h0 + h1)));
}

std::size_t longest_nondecreasing(const std::vector<double>& v) {
    std::size_t best = v.empty() ? 0 : 1, run = best;
    for (std::size_t i = 1; i < v.size(); ++i) {
        run = (v[i] >= v[i - 1]) ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

}  // namespace

ExpansionReport expansion_report(const CosmoTrajectory& traj) {
    const auto& s = traj.samples;
    if (s.size() < 3) throw std::invalid_argument("expansion report needs >= 3 samples");
    const std::size_t n = s.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ExpansionReport rep;
    rep.vT.assign(n, nan);
    rep.vR.assign(n, nan);
    rep.aT_fd.assign(n, nan);
    rep.aR_fd.assign(n, nan);

    for (std::size_t i = 0; i < n; ++i) {
        // Interior points use the centred stencil, the ends the one-sided one.
        const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
        const auto& a = s[c - 1];
        const auto& b = s[c];
        const auto& d = s[c + 1];
        if (i == c) {
            rep.vT[i] = first_diff(a.t, a.qT, b.t, b.qT, d.t, d.qT);
            rep.vR[i] = first_diff(a.t, a.xR, b.t, b.xR, d.t, d.xR);
            rep.aT_fd[i] = second_diff(a.t, a.qT, b.t, b.qT, d.t, d.qT);
            rep.aR_fd[i] = second_diff(a.t, a.xR, b.t, b.xR, d.t, d.xR);
            const Accelerations exact = accelerations(b);
            const double eT = std::abs(rep.aT_fd[i] - exact.aT) / std::max(std::abs(exact.aT), 1e-300);
            const double eR = std::abs(rep.aR_fd[i] - exact.aR) / std::max(std::abs(exact.aR), 1e-300);
            if (exact.aT != 0.0) rep.fd_rel_error = std::max(rep.fd_rel_error, eT);
            if (exact.aR != 0.0) rep.fd_rel_error = std::max(rep.fd_rel_error, eR);
        } else {
            rep.vT[i] = s[i].pT / s[i].m;
            rep.vR[i] = s[i].pR / s[i].m;
        }
    }

    rep.degenerate = true;
    const double h0 = hamiltonian(s.front());
    double max_gap = 0.0;
    for (const auto& st : s) {
        if (st.xR != 0.0) rep.degenerate = false;
        if (st.xR > 0.0 && st.qT > 0.0 && st.k > 0.0) {
            const Accelerations acc = accelerations(st);
            ++rep.positivity_checked;
            if (!(acc.aT > 0.0 && acc.aR > 0.0)) rep.positivity = false;
        }
        max_gap = std::max(max_gap, std::abs(hamiltonian(st) - h0));
    }
    rep.energy_drift = h0 != 0.0 ? max_gap / std::abs(h0) : max_gap;

    std::vector<double> vr_mag(n);
    for (std::size_t i = 0; i < n; ++i) vr_mag[i] = std::abs(rep.vR[i]);
    rep.vT_monotone_span = longest_nondecreasing(rep.vT);
    rep.vR_monotone_span = longest_nondecreasing(vr_mag);
    return rep;
}

}  // namespace complexmech::cosmology

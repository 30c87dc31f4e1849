// One PASS/FAIL line per acceptance criterion, with the measured numbers.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "complexmech/algebra.hpp"
#include "complexmech/black_hole.hpp"
#include "complexmech/cosmology.hpp"
#include "complexmech/io.hpp"
#include "complexmech/spatial_tunneling.hpp"
#include "complexmech/states.hpp"
#include "complexmech/temporal_barrier.hpp"

using namespace complexmech;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "[x] ") + what;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Textbook square-barrier transmission, written out here so it shares no code
// with the library.
double oracle_transmission(double e, double v0, double l, double m, double hbar) {
    const double k2 = 2.0 * m * std::abs(v0 - e) / (hbar * hbar);
    const double s = e < v0 ? std::sinh(std::sqrt(k2) * l) : std::sin(std::sqrt(k2) * l);
    return 1.0 / (1.0 + v0 * v0 * s * s / (4.0 * e * std::abs(v0 - e)));
}

Verdict operator_symmetry() {
    using namespace algebra;
    Verdict v;
    const Units u{};
    double worst_defect = 0.0, worst_class = 0.0;
    for (OperatorKind kind : {OperatorKind::PositionRe, OperatorKind::MomentumRe, OperatorKind::PositionIm,
                              OperatorKind::MomentumIm, OperatorKind::Time, OperatorKind::Energy}) {
        for (std::size_t n : {64u, 256u}) {
            const auto op = build_operator(kind, GridSpec::periodic(axis_of(kind), -10.0, 10.0, n), u);
            const auto d = adjoint_defect(op);
            const bool self = op.symmetry() == Symmetry::SelfAdjoint;
            worst_defect = std::max(worst_defect, self ? d.self_adjoint : d.anti_self_adjoint);
            const auto s = spectrum(op);
            if (s.spectral_radius > 0.0)
                worst_class = std::max(worst_class, (self ? s.max_abs_imag : s.max_abs_real) / s.spectral_radius);
        }
    }
    v.require(worst_defect == 0.0, "adjoint defect " + num(worst_defect));
    v.require(worst_class <= 1e-10, "off-class eigenvalue part " + num(worst_class) + " of spectral radius");
    return v;
}

Verdict heisenberg() {
    using namespace algebra;
    Verdict v;
    const Units u{};
    auto op = [&](OperatorKind k) { return build_operator(k, GridSpec::periodic(axis_of(k), -10.0, 10.0, 256), u); };
    struct Pair {
        const char* name;
        OperatorKind a, b;
        Complex expected;
    };
    for (const Pair& p : {Pair{"q_re,p_re", OperatorKind::PositionRe, OperatorKind::MomentumRe, kI},
                          Pair{"q_im,p_im", OperatorKind::PositionIm, OperatorKind::MomentumIm, kI},
                          Pair{"t,s", OperatorKind::Time, OperatorKind::Energy, -kI}}) {
        const auto a = op(p.a), b = op(p.b);
        const auto probe = gaussian_probe(a.grid(), kStandardProbeWidth);
        const auto r = commutator_residual(a, b, p.expected, probe);
        const double bound = commutator_bound(a.grid(), u);
        v.require(r.residual < bound && !r.boundary_warning,
                  std::string(p.name) + " " + num(r.residual) + " < " + num(bound));
    }
    // The (t, s) pair carries -i hbar: the opposite sign must miss by O(1).
    const auto t = op(OperatorKind::Time), s = op(OperatorKind::Energy);
    const auto wrong = commutator_residual(t, s, kI, gaussian_probe(t.grid(), kStandardProbeWidth));
    v.require(wrong.residual > 1.0, "+i hbar for (t,s) misses by " + num(wrong.residual));
    return v;
}

Verdict scattering_oracle() {
    using namespace scattering;
    Verdict v;
    const Units u{};
    const auto pot = PiecewisePotential::barrier(0.0, 1.0, 2.0);
    double worst_closed = 0.0, worst_unit = 0.0, worst_oracle = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double e = 0.05 + (4.0 - 0.05) * i / 99.0;
        if (e == 2.0) continue;
        const auto s = transmission_reflection(pot, e, 1.0, u);
        const double closed = square_barrier_transmission(e, 2.0, 1.0, 1.0, u);
        worst_closed = std::max(worst_closed, std::abs(s.transmission - closed) / closed);
        worst_unit = std::max(worst_unit, std::abs(s.transmission + s.reflection - 1.0));
        const double o = oracle_transmission(e, 2.0, 1.0, 1.0, 1.0);
        worst_oracle = std::max(worst_oracle, std::abs(s.transmission - o) / o);
    }
    v.require(worst_closed <= 1e-10, "transfer vs closed form " + num(worst_closed));
    v.require(worst_oracle <= 1e-10, "transfer vs test oracle " + num(worst_oracle));
    v.require(worst_unit <= 1e-10, "|T+R-1| " + num(worst_unit));
    const double t = transmission_reflection(pot, 1.0, 1.0, u).transmission;
    const double oracle = oracle_transmission(1.0, 2.0, 1.0, 1.0, 1.0);
    v.require(std::abs(t - oracle) < 1e-4 && std::abs(t - 0.2108) < 1e-4, "T(E0=1) = " + std::to_string(t));
    return v;
}

Verdict tunneling_contrast() {
    using namespace scattering;
    Verdict v;
    const Units u{};
    const auto pot = PiecewisePotential::barrier(0.0, 1.0, 2.0);
    bool reflect = true, imaginary = true;
    double worst = 0.0;
    int forbidden = 0;
    for (int i = 0; i < 100; ++i) {
        const double e = 0.05 + (4.0 - 0.05) * i / 99.0;
        if (e >= 2.0) continue;
        ++forbidden;
        const auto enc = classical_encounter(-1.0, std::sqrt(2.0 * e), pot, 1.0);
        reflect = reflect && enc.outcome == EncounterOutcome::Reflected &&
                  transmission_reflection(pot, e, 1.0, u).transmission > 0.0;
        const auto p = states::probe_barrier_momentum(0.0, 1.0, 2.0, e, 1.0, u);
        imaginary = imaginary && p.value_class == algebra::ValueClass::Imaginary;
        worst = std::max(worst, p.rel_error / p.tolerance);
    }
    v.require(reflect, "classical Reflected with T > 0 at all " + std::to_string(forbidden) + " E0 < V0");
    v.require(imaginary, "mid-barrier Rayleigh value imaginary");
    v.require(worst <= 1.0, "magnitude error / grid tolerance " + num(worst));
    return v;
}

double bisect(double (*f)(double, const temporal::TemporalProfile&), const temporal::TemporalProfile& p, double lo,
              double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid, p) > 0.0) == (f(lo, p) > 0.0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Verdict temporal_barrier() {
    using namespace temporal;
    Verdict v;
    const Units u{};

    // Decimal inputs as a user would type them.
    int exact = 0, total = 0, unsolvable = 0;
    bool survives = true;
    for (int i = 1; i <= 30; ++i) {
        for (int j = 0; j <= 50; ++j) {
            const double p0 = i / 10.0, w0 = j / 10.0;
            const auto s = states::temporal_tunnel_state(0.0, 1.0, w0, p0, 1.0, u);
            const double e0 = s.regions[0].label.energy.real();
            ++total;
            const double x = s.regions[1].label.energy.real();
            if (x + w0 == e0) {
                ++exact;
            } else {
                // fl(x + W0) is monotone in x: if both neighbours of x land on
                // the far side of E0, no double solves the identity.
                const double below = std::nextafter(x, -INFINITY) + w0, above = std::nextafter(x, INFINITY) + w0;
                unsolvable += x + w0 < e0 ? above > e0 : below < e0;
            }
            survives = survives && s.regions[2].label == s.regions[0].label;
        }
    }
    v.require(exact == total, "E_T + W0 == E0 exactly for " + std::to_string(exact) + "/" + std::to_string(total) +
                                  " decimal pairs; " + std::to_string(unsolvable) +
                                  " of the rest have no binary64 solution");

    auto gap = [](double t, const TemporalProfile& p) { return 0.5 - profile_value(p, t); };
    const auto bump = TemporalProfile::smooth_bump(0.5, 1.0, 2.0, 2.5, 0.8);
    const double root = bisect(gap, bump, 0.5, 1.0);
    bool located = true;
    double worst = 0.0;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        const auto tr = integrate_classical({0.0, 0.0, 1.0, 0.0, 0.0, 1.0}, bump, EnergyModel::NonRel, dt, 3.0, u);
        double t_event = NAN;
        for (const auto& e : tr.events)
            if (e.kind == EventKind::Destroyed) t_event = e.t;
        located = located && tr.destroyed && std::abs(t_event - root) <= dt;
        worst = std::max(worst, std::abs(t_event - root) / dt);
    }
    v.require(located, "Destroyed within dt of the bisection root (worst " + num(worst) + " dt)");

    bool rest = true;
    for (double m : {1e-3, 1.0, 1e3})
        rest = rest && total_energy({0.0, 0.0, 0.0, 0.0, 0.0, m}, bump, EnergyModel::Rel, u) == Complex(0.0, 0.0);
    v.require(rest, "rest-energy identity 0 for m in {1e-3,1,1e3}");
    v.require(survives, "after-barrier label == before-barrier label");
    return v;
}

double horizon_oracle(double mass, double grav, double c) {
    // Bisection on 1/2 c^2 - gamma M / r.
    double lo = 1e-12, hi = 1e12;
    for (int i = 0; i < 400; ++i) {
        const double mid = std::sqrt(lo * hi);
        (0.5 * c * c - grav * mass / mid < 0.0 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

Verdict black_hole_model() {
    using namespace black_hole;
    Verdict v;
    double worst_r = 0.0;
    for (double mass : {0.5, 1.0, 3.0})
        for (double c : {0.5, 1.0, 2.0})
            worst_r = std::max(worst_r, std::abs(horizon_radius(mass, 1.3, c) / horizon_oracle(mass, 1.3, c) - 1.0));
    v.require(worst_r < 1e-12, "r_E vs bisection " + num(worst_r));

    const Units u{};
    const auto model = BlackHoleModel::make(1.0, 1.0, u);
    const double re = model.r_horizon;
    const double jump = std::abs(potential(model, std::nextafter(re, 0.0)) - potential(model, std::nextafter(re, 1e9)));
    bool flat = true;
    for (int i = 0; i < 1000; ++i) flat = flat && force(model, re * i / 1000.0) == 0.0;
    v.require(jump <= 1e-15 && flat, "V jump at r_E " + num(jump) + ", force 0 inside");

    bool partition = true;
    for (double p0 : {0.3, 0.8, 1.2}) {
        const double e0 = 0.5 * p0 * p0;
        for (const auto& s : radial_profile(model, p0, 0.0, 50.0, 1000)) {
            const bool allowed = potential(model, s.r) <= potential(model, re) + e0;
            partition = partition && s.classically_allowed == allowed &&
                        (allowed ? s.momentum.imag() == 0.0 : s.momentum.real() == 0.0);
        }
    }
    v.require(partition, "real/imaginary partition matches energy inequality on 1000-point sweeps");

    // The operation as specified: no outer cut-off.
    int ok = 0, non_integrable = 0, agree = 0, n = 0;
    double prev = 0.0;
    bool monotone = true;
    for (int i = 1; i <= 60; ++i) {
        const double e0 = 0.6 * i / 60.0;
        ++n;
        const bool escapes = classical_escape(model, std::sqrt(2.0 * e0)).escapes;
        try {
            const double p = wkb_escape_probability(model, e0, u);
            ok += p > 0.0 && p <= 1.0;
            monotone = monotone && p >= prev;
            prev = p;
            agree += (p == 1.0) == escapes;
        } catch (const NonIntegrableShell&) {
            ++non_integrable;
            agree += !escapes;
        }
    }
    v.require(ok == n && monotone,
              "wkb in (0,1] for " + std::to_string(ok) + "/" + std::to_string(n) + " E0 (" +
                  std::to_string(non_integrable) + " non-integrable: forbidden shell reaches r = inf)");
    v.require(agree == n, "wkb = 1 exactly when classical escape holds");
    return v;
}

Verdict cosmology_model() {
    using namespace cosmology;
    Verdict v;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> pos(0.1, 10.0), mom(-3.0, 3.0), par(0.1, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const CosmoState s{0.0, pos(rng), mom(rng), pos(rng), mom(rng), par(rng), par(rng)};
        const double hq = 1e-5 * s.qT, hx = 1e-5 * s.xR;
        CosmoState qp = s, qm = s, xp = s, xm = s;
        qp.qT += hq;
        qm.qT -= hq;
        xp.xR += hx;
        xm.xR -= hx;
        const auto a = accelerations(s);
        const double aT = -(hamiltonian(qp) - hamiltonian(qm)) / (2.0 * hq) / s.m;
        // q^R_im = i xR: dH/dq_im = -i dH/dxR, so a_R = (1/m) dH/dxR in magnitude.
        const double aR = (hamiltonian(xp) - hamiltonian(xm)) / (2.0 * hx) / s.m;
        worst = std::max({worst, std::abs(a.aT - aT) / a.aT, std::abs(a.aR - aR) / a.aR});
    }
    v.require(worst <= 1e-6, "Hamilton consistency " + num(worst));

    bool positive = true;
    std::uniform_real_distribution<double> lg(-15.0, 15.0);
    for (int i = 0; i < 100000; ++i) {
        const auto a = accelerations({0.0, std::exp(lg(rng)), 0.0, std::exp(lg(rng)), 0.0, std::exp(lg(rng)), 1.0});
        positive = positive && a.aT > 0.0 && a.aR > 0.0;
    }
    v.require(positive, "both accelerations > 0 at 1e5 random admissible states");

    const auto tr = integrate({0.0, 10.0, 1.0, 0.1, 0.0, 1.0, 1.0}, 1e-4, 10.0, 100);
    const auto rep = expansion_report(tr);
    v.require(tr.steps == 100000 && rep.energy_drift < 1e-6, "drift " + num(rep.energy_drift) + " over " +
                                                                 std::to_string(tr.steps) + " steps");
    return v;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict cli_determinism(const std::string& cli, const fs::path& configs, const fs::path& golden,
                        const fs::path& doctored, const fs::path& work) {
    Verdict v;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(configs))
        if (e.path().extension() == ".toml") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    int identical = 0, matches_golden = 0;
    for (const auto& cfg : files) {
        const std::string name = cfg.stem().string();
        const fs::path a = work / name / "a", b = work / name / "b";
        fs::remove_all(work / name);
        const int ra = run_cli(cli, "run \"" + cfg.string() + "\" --out \"" + a.string() + "\"");
        const int rb = run_cli(cli, "run \"" + cfg.string() + "\" --out \"" + b.string() + "\"");
        bool same = ra == 0 && rb == 0, gold = same;
        std::size_t count = 0;
        if (same) {
            for (const auto& f : fs::directory_iterator(a)) {
                ++count;
                const auto fn = f.path().filename();
                const std::string bytes = io::read_file(f.path());
                same = same && fs::exists(b / fn) && bytes == io::read_file(b / fn);
                gold = gold && fs::exists(golden / name / fn) && bytes == io::read_file(golden / name / fn);
            }
            std::size_t gcount = 0;
            if (fs::exists(golden / name))
                for ([[maybe_unused]] const auto& f : fs::directory_iterator(golden / name)) ++gcount;
            gold = gold && count > 0 && gcount == count;
        }
        identical += same;
        matches_golden += gold;
    }
    const auto n = static_cast<int>(files.size());
    v.require(n > 0 && identical == n, std::to_string(identical) + "/" + std::to_string(n) + " configs byte-identical");
    v.require(n > 0 && matches_golden == n, std::to_string(matches_golden) + "/" + std::to_string(n) + " match golden");
    const int code = run_cli(cli, "run \"" + doctored.string() + "\" --out \"" + (work / "doctored").string() + "\"");
    v.require(code == 3, "doctored config exit " + std::to_string(code));
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"complexmech acceptance criteria"};
    std::string cli, configs, golden, doctored, work = (fs::temp_directory_path() / "complexmech_acceptance").string();
    app.add_option("--cli", cli, "complexmech executable")->required();
    app.add_option("--configs", configs, "bundled config directory")->required();
    app.add_option("--golden", golden, "golden output directory")->required();
    app.add_option("--doctored", doctored, "config forced to fail an invariant")->required();
    app.add_option("--work", work, "scratch directory");
    CLI11_PARSE(app, argc, argv);

    const std::pair<const char*, Verdict> results[] = {
        {"operator symmetry", operator_symmetry()},
        {"heisenberg probes", heisenberg()},
        {"scattering oracle", scattering_oracle()},
        {"classical/quantum contrast", tunneling_contrast()},
        {"temporal barrier", temporal_barrier()},
        {"black hole", black_hole_model()},
        {"cosmology", cosmology_model()},
        {"cli determinism", cli_determinism(cli, configs, golden, doctored, work)},
    };
    int failed = 0;
    for (std::size_t i = 0; i < std::size(results); ++i) {
        const auto& [name, v] = results[i];
        std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, name, v.detail.c_str());
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}

#include "complexmech/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace complexmech::algebra {

std::string_view to_string(Symmetry symmetry) {
    switch (symmetry) {
        case Symmetry::SelfAdjoint: return "self_adjoint";
        case Symmetry::AntiSelfAdjoint: return "anti_self_adjoint";
        case Symmetry::General: return "general";
    }
    return "?";
}

std::string_view to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::PositionRe: return "position_re";
        case OperatorKind::MomentumRe: return "momentum_re";
        case OperatorKind::PositionIm: return "position_im";
        case OperatorKind::MomentumIm: return "momentum_im";
        case OperatorKind::Time: return "time";
        case OperatorKind::Energy: return "energy";
    }
    return "?";
}

std::string_view to_string(ValueClass value_class) {
    switch (value_class) {
        case ValueClass::Real: return "real";
        case ValueClass::Imaginary: return "imaginary";
        case ValueClass::Mixed: return "mixed";
    }
    return "?";
}

Axis axis_of(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::PositionRe:
        case OperatorKind::MomentumRe: return Axis::QRe;
        case OperatorKind::PositionIm:
        case OperatorKind::MomentumIm: return Axis::XIm;
        case OperatorKind::Time:
        case OperatorKind::Energy: return Axis::T;
    }
    throw std::invalid_argument("unknown operator kind");
}

GridOperator::GridOperator(Matrix matrix, Symmetry symmetry, GridSpec grid)
    : matrix_(std::move(matrix)), symmetry_(symmetry), grid_(grid) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw std::invalid_argument("operator matrix does not match grid size");
    }
}

StateVector GridOperator::apply(const StateVector& state) const {
    if (state.size() != matrix_.cols()) {
        throw std::invalid_argument("state length does not match operator grid");
    }
    return matrix_ * state;
}

Eigen::MatrixXd central_difference(const GridSpec& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double half_inv = 1.0 / (2.0 * grid.spacing());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index next = (j + 1) % n;
        d(j, next) = half_inv;
        d(next, j) = -half_inv;
    }
    return d;
}

GridOperator build_operator(OperatorKind kind, const GridSpec& grid, const Units& units) {
    units.validate();
    if (grid.axis() != axis_of(kind)) {
        throw std::invalid_argument(std::string("operator ") + std::string(to_string(kind)) +
                                    " needs a " + std::string(to_string(axis_of(kind))) +
                                    " grid, got " + std::string(to_string(grid.axis())));
    }
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double hbar = units.hbar;

    auto diagonal = [&](Complex scale) {
        Matrix m = Matrix::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) m(k, k) = scale * grid.point(static_cast<std::size_t>(k));
        return m;
    };
    auto derivative = [&](Complex scale) -> Matrix { return scale * central_difference(grid).cast<Complex>(); };

    switch (kind) {
        case OperatorKind::PositionRe:
        case OperatorKind::Time:
            return {diagonal(1.0), Symmetry::SelfAdjoint, grid};
        case OperatorKind::PositionIm:
            return {diagonal(kI), Symmetry::AntiSelfAdjoint, grid};
        case OperatorKind::MomentumRe:
            return {derivative(-kI * hbar), Symmetry::SelfAdjoint, grid};
        case OperatorKind::MomentumIm:
            return {derivative(-hbar), Symmetry::AntiSelfAdjoint, grid};
        case OperatorKind::Energy:
            return {derivative(kI * hbar), Symmetry::SelfAdjoint, grid};
    }
    throw std::invalid_argument("unknown operator kind");
}

AdjointDefect adjoint_defect(const GridOperator& op) {
    const Matrix& m = op.matrix();
    const Matrix adj = m.adjoint();
    return {(m - adj).cwiseAbs().maxCoeff(), (m + adj).cwiseAbs().maxCoeff()};
}

GridOperator commutator(const GridOperator& a, const GridOperator& b) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument("commutator operands live on different grids");
    }
    Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    return {std::move(c), Symmetry::General, a.grid()};
}

bool touches_boundary_margin(const StateVector& probe) {
    const auto n = probe.size();
    const auto margin = std::max<Eigen::Index>(1, n / 10);
    const double peak = probe.cwiseAbs().maxCoeff();
    double edge = 0.0;
    for (Eigen::Index k = 0; k < margin; ++k) {
        edge = std::max({edge, std::abs(probe[k]), std::abs(probe[n - 1 - k])});
    }
    return edge > 1e-3 * peak;
}

CommutatorResidual commutator_residual(const GridOperator& a, const GridOperator& b,
                                       Complex expected, const StateVector& probe) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument("commutator operands live on different grids");
    }
    const double norm = probe.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("commutator probe has zero norm");
    // Two matrix-vector products per term instead of forming AB - BA.
    const StateVector ab = a.apply(b.apply(probe));
    const StateVector ba = b.apply(a.apply(probe));
    const StateVector defect = ab - ba - expected * probe;
    return {defect.norm() / norm, touches_boundary_margin(probe)};
}

StateVector gaussian_probe(const GridSpec& grid, double width, std::optional<double> center) {
    if (!(width > 0.0)) throw std::invalid_argument("probe width must be > 0");
    const double mid = center.value_or(0.5 * (grid.min() + grid.max()));
    StateVector v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double u = (grid.point(k) - mid) / width;
        v[static_cast<Eigen::Index>(k)] = std::exp(-0.5 * u * u);
    }
    return v;
}

Complex rayleigh_eigenvalue(const GridOperator& op, const StateVector& state) {
    return rayleigh_eigenvalue(op, state, {0, static_cast<std::size_t>(state.size())});
}

Complex rayleigh_eigenvalue(const GridOperator& op, const StateVector& state, RowWindow rows) {
    if (rows.first >= rows.last || rows.last > static_cast<std::size_t>(state.size())) {
        throw std::invalid_argument("row window is empty or out of range");
    }
    const StateVector image = op.apply(state);
    Complex numerator{0.0, 0.0};
    double denominator = 0.0;
    for (auto j = static_cast<Eigen::Index>(rows.first); j < static_cast<Eigen::Index>(rows.last); ++j) {
        numerator += std::conj(state[j]) * image[j];
        denominator += std::norm(state[j]);
    }
    if (!(denominator > 0.0)) throw std::invalid_argument("Rayleigh quotient of a zero state");
    return numerator / denominator;
}

ValueClass classify(Complex value, double rel) {
    const double magnitude = std::abs(value);
    if (magnitude == 0.0) return ValueClass::Real;
    if (std::abs(value.imag()) < rel * magnitude) return ValueClass::Real;
    if (std::abs(value.real()) < rel * magnitude) return ValueClass::Imaginary;
    return ValueClass::Mixed;
}

SpectrumCheck spectrum(const GridOperator& op) {
    Eigen::ComplexEigenSolver<Matrix> solver(op.matrix(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver did not converge");
    SpectrumCheck check{0.0, 0.0, 0.0};
    for (const Complex& lambda : solver.eigenvalues()) {
        check.spectral_radius = std::max(check.spectral_radius, std::abs(lambda));
        check.max_abs_real = std::max(check.max_abs_real, std::abs(lambda.real()));
        check.max_abs_imag = std::max(check.max_abs_imag, std::abs(lambda.imag()));
    }
    return check;
}

}  // namespace complexmech::algebra

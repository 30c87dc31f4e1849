#include "complexmech/core.hpp"

#include <cmath>

namespace complexmech {

void Units::validate() const {
    auto check = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw std::invalid_argument(std::string("units.") + name + " must be finite and > 0");
        }
    };
    check(hbar, "hbar");
    check(c, "c");
    check(grav, "grav");
}

std::string_view to_string(Axis axis) {
    switch (axis) {
        case Axis::QRe: return "q_re";
        case Axis::XIm: return "x_im";
        case Axis::RRe: return "r_re";
        case Axis::T: return "t";
    }
    return "?";
}

Axis axis_from_string(std::string_view name) {
    if (name == "q_re") return Axis::QRe;
    if (name == "x_im") return Axis::XIm;
    if (name == "r_re") return Axis::RRe;
    if (name == "t") return Axis::T;
    throw std::invalid_argument("unknown axis '" + std::string(name) + "'");
}

GridSpec::GridSpec(Axis axis, double min, double max, std::size_t n)
    : axis_(axis), min_(min), max_(max), n_(n) {
    if (!(std::isfinite(min) && std::isfinite(max))) {
        throw std::invalid_argument("grid bounds must be finite");
    }
    if (!(min < max)) {
        throw std::invalid_argument("grid requires min < max");
    }
    if (n < kMinPoints) {
        throw std::invalid_argument("grid requires n >= " + std::to_string(kMinPoints) + " points");
    }
}

GridSpec GridSpec::periodic(Axis axis, double min, double max, std::size_t n) {
    if (n < kMinPoints) {
        throw std::invalid_argument("grid requires n >= " + std::to_string(kMinPoints) + " points");
    }
    const double step = (max - min) / static_cast<double>(n);
    return GridSpec(axis, min, max - step, n);
}

std::vector<double> GridSpec::points() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = point(k);
    return out;
}

}  // namespace complexmech

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace complexmech {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Physical scales shared by every module. The imaginary speed of light is
/// never stored; it is always i * c.
struct Units {
    double hbar = 1.0;
    double c = 1.0;
    double grav = 1.0;

    /// Throws std::invalid_argument unless all scales are finite and > 0.
    void validate() const;

    Complex c_im() const { return Complex{0.0, c}; }
};

/// Grid axes. The imaginary coordinate is stored as a real magnitude x with
/// q_im = i * x.
enum class Axis { QRe, XIm, RRe, T };

std::string_view to_string(Axis axis);
Axis axis_from_string(std::string_view name);

/// Uniform grid of n points spanning [min, max] inclusive.
class GridSpec {
public:
    static constexpr std::size_t kMinPoints = 8;

    GridSpec(Axis axis, double min, double max, std::size_t n);

    /// Grid whose periodic wrap closes [min, max) exactly: the last point sits
    /// one spacing before max.
    static GridSpec periodic(Axis axis, double min, double max, std::size_t n);

    Axis axis() const { return axis_; }
    double min() const { return min_; }
    double max() const { return max_; }
    std::size_t size() const { return n_; }
    double spacing() const { return (max_ - min_) / static_cast<double>(n_ - 1); }
    double point(std::size_t k) const { return min_ + spacing() * static_cast<double>(k); }
    std::vector<double> points() const;

    bool operator==(const GridSpec&) const = default;

private:
    Axis axis_;
    double min_;
    double max_;
    std::size_t n_;
};

/// Principal complex square root of a real argument. Negative arguments give a
/// purely imaginary result with positive imaginary part and an exact zero real
/// part.
inline Complex principal_sqrt(double x) { return std::sqrt(Complex{x, 0.0}); }

/// Relative-or-absolute closeness used throughout the tests and checks.
inline bool close(double a, double b, double rel, double abs_floor = 0.0) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(rel * scale, abs_floor);
}

}  // namespace complexmech

#pragma once

// Shared vocabulary types: points, complex scalars, error classes.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace screenbem {

using Complex = std::complex<double>;
using Point = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr Complex kI{0.0, 1.0};

// Index of the coordinate normal to the screen plane. Screens live in
// x_n = 0, so for n = 2 that is component 1 and for n = 3 component 2.
// 2D points keep their third component at zero.
constexpr int normal_axis(int dimension) { return dimension - 1; }

inline Point make_point(double x, double y, double z = 0.0) { return Point(x, y, z); }

// Precondition violations, malformed configurations, bad geometry.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Quadrature producing non-finite values, singular systems.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message);

}  // namespace screenbem

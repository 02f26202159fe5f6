#include "screenbem/specialfn.hpp"

#include <array>
#include <cmath>
#include <string>

namespace screenbem {

void require(bool condition, const std::string& message)
{
    if (!condition) throw InvalidInput(message);
}

Wavenumber::Wavenumber(double k) : k_(k)
{
    require(std::isfinite(k) && k > 0.0, "wavenumber must be positive, got " + std::to_string(k));
}

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kSeriesLimit = 12.0;

// J0, J1, Y0, Y1 from their ascending series.
struct BesselPair {
    double j;
    double y;
};

BesselPair series_order0(double x)
{
    const double q = 0.25 * x * x;
    double term = 1.0;  // (-1)^m q^m / (m!)^2
    double j0 = 1.0;
    double harmonic = 0.0;
    double tail = 0.0;  // sum_{m>=1} (-1)^{m+1} H_m q^m / (m!)^2
    for (int m = 1; m < 200; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        harmonic += 1.0 / m;
        j0 += term;
        tail -= harmonic * term;
        if (std::abs(term) * (1.0 + harmonic) < 1e-18 * std::abs(j0) && m > 2) break;
    }
    const double y0 = (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * j0 + tail);
    return {j0, y0};
}

BesselPair series_order1(double x)
{
    const double half = 0.5 * x;
    const double q = half * half;
    double term = half;  // (-1)^m (x/2)^{2m+1} / (m! (m+1)!)
    double j1 = term;
    double h_m = 0.0;   // H_m
    double h_m1 = 1.0;  // H_{m+1}
    double digamma_sum = h_m + h_m1 - 2.0 * kEulerGamma;
    double tail = digamma_sum * term;
    for (int m = 1; m < 200; ++m) {
        term *= -q / (static_cast<double>(m) * (m + 1));
        h_m = h_m1;
        h_m1 += 1.0 / (m + 1);
        digamma_sum = h_m + h_m1 - 2.0 * kEulerGamma;
        j1 += term;
        tail += digamma_sum * term;
        if (std::abs(term) * (1.0 + std::abs(digamma_sum)) < 1e-18 * std::abs(j1) && m > 2) break;
    }
    const double y1 = (2.0 / kPi) * std::log(half) * j1 - 2.0 / (kPi * x) - tail / kPi;
    return {j1, y1};
}

Complex asymptotic(int order, double x)
{
    const double mu = 4.0 * order * order;
    const double omega = x - 0.5 * order * kPi - 0.25 * kPi;
    Complex sum = 1.0;
    Complex i_power = 1.0;
    double a = 1.0;
    double previous = 1.0;
    for (int k = 1; k < 80; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (8.0 * k * x);
        i_power *= kI;
        const double magnitude = std::abs(a);
        if (magnitude > previous || magnitude < 1e-18) break;
        sum += i_power * a;
        previous = magnitude;
    }
    return std::sqrt(2.0 / (kPi * x)) * std::exp(kI * omega) * sum;
}

}  // namespace

Complex hankel1(int order, double x)
{
    require(order == 0 || order == 1, "hankel1 supports orders 0 and 1 only");
    require(x > 0.0 && std::isfinite(x), "hankel1 requires x > 0, got " + std::to_string(x));
    if (x > kSeriesLimit) return asymptotic(order, x);
    const BesselPair p = order == 0 ? series_order0(x) : series_order1(x);
    return {p.j, p.y};
}

Complex phi_radial(double r, double k, int dimension)
{
    if (dimension == 3) return std::exp(kI * (k * r)) / (4.0 * kPi * r);
    return 0.25 * kI * hankel1(0, k * r);
}

Complex phi_radial_derivative(double r, double k, int dimension)
{
    if (dimension == 3) {
        return std::exp(kI * (k * r)) / (4.0 * kPi * r) * (kI * k - 1.0 / r);
    }
    // d/dr H0(kr) = -k H1(kr)
    return -0.25 * kI * k * hankel1(1, k * r);
}

Complex phi(const Point& x, const Point& y, Wavenumber k, int dimension)
{
    require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
    const double r = (x - y).norm();
    require(r > 0.0, "phi: coincident points");
    return phi_radial(r, k.value(), dimension);
}

Eigen::Vector3cd grad_phi_y(const Point& x, const Point& y, Wavenumber k, int dimension)
{
    require(dimension == 2 || dimension == 3, "dimension must be 2 or 3");
    const Point diff = x - y;
    const double r = diff.norm();
    require(r > 0.0, "grad_phi_y: coincident points");
    // grad_y r = -(x - y) / r
    const Complex dphi = phi_radial_derivative(r, k.value(), dimension);
    return (-dphi / r) * diff.cast<Complex>();
}

}  // namespace screenbem

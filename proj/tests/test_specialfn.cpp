#include "doctest.h"

#include "screenbem/specialfn.hpp"

#include <cmath>
#include <random>

using namespace screenbem;

TEST_CASE("hankel1 matches the standard library Bessel functions")
{
    for (double x : {1e-6, 0.01, 0.5, 1.0, 2.0, 5.0, 11.9, 12.1, 20.0, 50.0, 300.0}) {
        for (int nu : {0, 1}) {
            const Complex h = hankel1(nu, x);
            const Complex ref(std::cyl_bessel_j(static_cast<double>(nu), x), std::cyl_neumann(static_cast<double>(nu), x));
            CHECK(std::abs(h - ref) <= 1e-11 * std::abs(ref));
        }
    }
}

TEST_CASE("Hankel Wronskian J1 Y0 - J0 Y1 = 2 / (pi x)")
{
    for (double x : {0.5, 2.0, 10.0, 50.0}) {
        const Complex h0 = hankel1(0, x), h1 = hankel1(1, x);
        const double w = h1.real() * h0.imag() - h0.real() * h1.imag();
        CHECK(std::abs(w - 2.0 / (kPi * x)) <= 1e-10 * 2.0 / (kPi * x));
    }
}

TEST_CASE("hankel1 rejects bad arguments")
{
    CHECK_THROWS_AS(hankel1(0, 0.0), InvalidInput);
    CHECK_THROWS_AS(hankel1(2, 1.0), InvalidInput);
    CHECK_THROWS_AS(Wavenumber(0.0), InvalidInput);
}

TEST_CASE("phi closed forms")
{
    const Point x(0.3, 0.2, 0.0), y(-0.1, 0.5, 0.0);
    const double r = (x - y).norm();
    const double k = 3.0;
    CHECK(std::abs(phi(x, y, Wavenumber(k), 3) - std::exp(kI * k * r) / (4.0 * kPi * r)) < 1e-15);
    const Complex h0(std::cyl_bessel_j(0.0, k * r), std::cyl_neumann(0.0, k * r));
    CHECK(std::abs(phi(x, y, Wavenumber(k), 2) - 0.25 * kI * h0) < 1e-12);
    CHECK(phi(x, y, Wavenumber(k), 2) == phi(y, x, Wavenumber(k), 2));
}

TEST_CASE("grad_phi_y agrees with central differences")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int dim : {2, 3}) {
        for (int trial = 0; trial < 100; ++trial) {
            Point x(u(rng), u(rng), dim == 3 ? u(rng) : 0.0);
            Point y(u(rng), u(rng), dim == 3 ? u(rng) : 0.0);
            if ((x - y).norm() < 0.1) continue;
            const Wavenumber k(0.5 + 4.5 * (u(rng) + 1.0) / 2.0);
            const auto g = grad_phi_y(x, y, k, dim);
            const double step = 1e-5;
            double err = 0.0;
            for (int c = 0; c < dim; ++c) {
                Point yp = y, ym = y;
                yp[c] += step;
                ym[c] -= step;
                const Complex fd = (phi(x, yp, k, dim) - phi(x, ym, k, dim)) / (2.0 * step);
                err = std::max(err, std::abs(fd - g[c]));
            }
            CHECK(err <= 1e-6 * g.norm());
        }
    }
}

TEST_CASE("phi solves the Helmholtz equation away from the source")
{
    const double k = 4.0;
    const Point y = Point::Zero();
    for (int dim : {2, 3}) {
        const Point x(0.7, -0.4, dim == 3 ? 0.3 : 0.0);
        const double step = 1e-3;
        Complex lap = 0.0;
        for (int c = 0; c < dim; ++c) {
            Point a = x, b = x;
            a[c] += step;
            b[c] -= step;
            lap += (phi(a, y, Wavenumber(k), dim) - 2.0 * phi(x, y, Wavenumber(k), dim) + phi(b, y, Wavenumber(k), dim)) /
                   (step * step);
        }
        const Complex v = phi(x, y, Wavenumber(k), dim);
        CHECK(std::abs(lap + k * k * v) <= 1e-4 * k * k * std::abs(v));
    }
}

TEST_CASE("phi_radial_derivative agrees with differences")
{
    for (int dim : {2, 3})
        for (double r : {0.01, 0.3, 2.0, 15.0}) {
            const double h = 1e-6 * r;
            const Complex fd = (phi_radial(r + h, 2.0, dim) - phi_radial(r - h, 2.0, dim)) / (2.0 * h);
            CHECK(std::abs(fd - phi_radial_derivative(r, 2.0, dim)) <= 1e-6 * std::abs(fd));
        }
}

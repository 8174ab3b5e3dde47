#pragma once

#include <cstdint>

#include "cyclebound/log_value.hpp"

namespace cyclebound {

// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double euler_gamma = 0.57721566490153286061;

// rho(u) is defined for u > 500 too, but the table stops where the library
// promises accuracy.
inline constexpr double kMaxRhoU = 500.0;

// Nonzero root of e^xi = 1 + u*xi (xi(1) = 0), with its derivative
// xi'(u) = (1/u) * xi/(xi - 1 + 1/u).
struct XiValue {
    double u;
    double xi;
    double xi_prime;
};

enum class RhoMethod { piecewise_dde, alladi_asymptotic };

struct DickmanContext {
    double u;
    double log_rho; // natural log of rho(u)
    double i_xi;    // I(xi(u)), 0 for u < 1
    RhoMethod method;
};

// Newton on g(xi) = e^xi - 1 - u*xi inside the bracket (log u, 2 log u].
XiValue solve_xi(double u, double tol = 1e-14);

// I(s) = integral_0^s (e^v - 1)/v dv = sum_{k>=1} s^k/(k*k!), |s| <= 300.
double i_integral(double s);

// Dickman's function: the continuous solution of u rho'(u) + rho(u-1) = 0
// with rho = 1 on [0,1]. Values come from a lazily built piecewise table
// (see dickman.cpp for the construction); relative error <= 1e-10 for
// u <= 50 and <= 1e-8 for u <= 500.
double log_rho(double u);
DickmanContext rho(double u);

// Alladi's asymptotic log rho(u) = (1/2) log(xi'/2pi) + gamma - u*xi + I(xi);
// relative accuracy O(1/u). At u -> 1+ the removable 0/0 in xi' is handled by
// the series limit xi' -> 2.
DickmanContext rho_alladi(double u);

// log P(l_r(Z) = n) ~ -gamma - log r + log rho(n/r); sharp once r is at least
// sqrt(n log n), usable whenever n/r <= 500.
LogValue dickman_estimate(std::int64_t n, std::int64_t r);

// The xi-form of the same quantity: -(1/2) log(2 pi r n) + I(xi(u)) - u*xi(u)
// with u = n/r. Requires r >= 2 and u > 1 (the xi-based form degenerates at
// u = 1).
LogValue dickman_xi_estimate(std::int64_t n, std::int64_t r);

} // namespace cyclebound

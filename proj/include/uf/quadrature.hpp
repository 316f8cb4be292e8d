#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace uf {

// A real function of a point in R^N.
using PointFunction = std::function<double(std::span<const double>)>;

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule; cached, thread-safe.
const GaussRule& gauss_legendre(int n);

struct CubatureOptions {
    double rel_tol = 1e-10;
    // Absolute floor, relative to the integral of |f - f_ref|.
    double abs_floor = 1e-14;
    int points_per_axis = 4;
    std::size_t max_regions = 1u << 15;
};

struct CubatureResult {
    double average = 0.0;   // integral / box volume
    double error = 0.0;     // estimated error of the average
    bool converged = true;
    bool finite = true;
    std::size_t evaluations = 0;
};

/// Mean value of f over the box [lo, hi].
///
/// Globally adaptive: every subregion carries the tensor Gauss-Legendre value
/// of its 2^N children and the difference to its own one-rule value as the
/// error estimate; the worst subregion is bisected along every axis until the
/// summed estimate meets the tolerance. The integrand is shifted by its first
/// sample, so a function constant on the box is reproduced exactly.
CubatureResult box_average(const PointFunction& f, std::span<const double> lo, std::span<const double> hi,
                           const CubatureOptions& opts = {});

struct BallAverage {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    int nodes = 0;
};

// Mean of f over the Euclidean ball B_r(center) by nested Gauss-Legendre
// slicing, doubling the node count until successive values agree to
// rel_tol. Throws QuadratureError on a non-finite sample.
BallAverage ball_average(const PointFunction& f, std::span<const double> center, double r,
                         double rel_tol = 1e-10);

// Volume of the radius-r ball in R^dim.
double ball_volume(int dim, double r);

// Fraction of a ball's volume lying beyond a hyperplane at distance d from
// its centre (0 <= d). Closed form via the sin^N integral recurrence.
double cap_fraction(int dim, double d_over_r);

// Volume of B_r(0) intersected with the box prod [lo_k, hi_k]; bounds may be
// infinite. Exact slicing with breakpoints, Gauss-Legendre per smooth piece.
double ball_box_volume(double r, std::span<const double> lo, std::span<const double> hi);

}  // namespace uf

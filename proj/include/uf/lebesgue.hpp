#pragma once

#include <span>
#include <vector>

#include "uf/grid.hpp"
#include "uf/quadrature.hpp"
#include "uf/ultraspace.hpp"

namespace uf {

// Radius of the regularizing ball. Used with a grid it must stay below h/2,
// so a ball centred in a cell meets at most one face per axis.
class EtaRadius {
public:
    explicit EtaRadius(double eta);
    double value() const { return eta_; }
    void require_fits(const Grid& grid) const;

private:
    double eta_;
};

// Ball mean of a general function (nested Gauss-Legendre, see ball_average).
BallAverage lebesgue_average(const PointFunction& f, std::span<const double> x, EtaRadius eta);

/// Ball mean of a piecewise-constant grid function.
///
/// No face inside the ball: the cell value. One face: closed-form cap volume
/// fraction on each side. Faces along several axes: exact ball-orthant
/// volumes. A point on faces only (no other face in reach) returns the mean
/// of the adjacent cells exactly.
double lebesgue_average(const Ultrafunction& u, std::span<const double> x, EtaRadius eta);

/// Cell values plus regularized face traces: the mean of the two adjacent
/// cells (exterior counts as 0).
struct RegularizedFunction {
    Ultrafunction cells;
    std::vector<std::vector<double>> trace;  // [axis][face index]

    double face_value(FaceId f) const { return trace[f.axis][f.index]; }
    friend bool operator==(const RegularizedFunction&, const RegularizedFunction&) = default;
};

RegularizedFunction regularize(const Ultrafunction& u);

// 1 on cells of omega and interior faces, 0 outside, 1/2 on boundary faces.
RegularizedFunction regularized_characteristic(const Region& omega);

struct IdempotencePoint {
    std::vector<double> x;
    double single = 0.0;
    double twice = 0.0;
    double deviation = 0.0;
};

struct IdempotenceReport {
    std::vector<IdempotencePoint> points;
    std::vector<std::size_t> violations;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool ok() const { return violations.empty(); }
};

// Compares the ball mean of the ball mean with the ball mean at each point.
IdempotenceReport check_idempotence(const Ultrafunction& f, const std::vector<std::vector<double>>& points,
                                    EtaRadius eta, double tolerance = 1e-10);

}  // namespace uf

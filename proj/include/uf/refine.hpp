#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "uf/grid.hpp"

namespace uf {

struct RefineStage {
    int level = 0;
    double h = 0.0;
    double value = 0.0;
    double diff = 0.0;        // value - previous value, NaN at level 0
    double value_rate = 0.0;  // log2(|previous value| / |value|), NaN at level 0
    double diff_rate = 0.0;   // log2(|previous diff| / |diff|), NaN below level 2
};

struct RefineTable {
    std::string functional;
    std::vector<RefineStage> stages;
};

// Evaluates `value(grid)` on base, refine(base), ... (levels stages, >= 2).
RefineTable refine_chain(const std::string& name, const Grid& base, int levels,
                         const std::function<double(const Grid&)>& value);

// Integral over the cells whose centre satisfies `inside` of the projection of f.
RefineTable refine_region_integral(const std::string& f_expr, const std::function<bool(std::span<const double>)>& inside,
                                   const Grid& base, int levels);

// |lhs - rhs_pointwise| / scale of the divergence identity for the projected field.
RefineTable refine_gauss_residual(const std::vector<std::string>& phi_exprs,
                                  const std::function<bool(std::span<const double>)>& inside, const Grid& base,
                                  int levels);

// max over cells at least `margin` cells from the box boundary of
// |(D_axis P f)_c - df(centre_c)|.
RefineTable refine_derivative_error(const std::string& f_expr, const std::string& df_expr, int axis,
                                    const Grid& base, int levels, int margin = 1);

// Regularized value of P f at a point.
RefineTable refine_point_value(const std::string& f_expr, const std::vector<double>& point, const Grid& base,
                               int levels);

// max |u(T)| of the conservation-law solver started from P u0.
RefineTable refine_max_u(const std::string& u0_expr, const std::string& flux, double T, const Grid& base,
                         int levels, int support_margin = 2);

}  // namespace uf

//---------------------------------------------------------------------------//
//! \file rsp/wigner.hpp
//! Wigner functions on a phase-space grid and their rotated marginals.
//!
//! Scaling follows the quadrature convention of fock.hpp: the vacuum is
//! W(x, p) = (2/pi) exp(-2 (x^2 + p^2)), so |W| <= 2/pi for any state.
//---------------------------------------------------------------------------//
#pragma once

#include <string>
#include <vector>

#include "rsp/fock.hpp"

namespace rsp
{
//! Uniform axis: min, min + step, ..., min + (count - 1) step
struct Axis
{
    double min;
    double step;
    int count;

    double operator[](int i) const { return min + step * i; }
    double max() const { return (*this)[count - 1]; }

    //! Axis covering [lo, hi] with the given step (hi rounded to the grid)
    static Axis span(double lo, double hi, double step);
};

struct GridSpec
{
    Axis x = Axis::span(-3, 3, 0.05);
    Axis p = Axis::span(-3, 3, 0.05);
};

struct WignerGrid
{
    Axis x_axis;
    Axis p_axis;
    //! values[i * p_axis.count + j] = W(x_i, p_j)
    std::vector<double> values;
    //! Normalization sum W dx dp deviates from 1 by more than 1e-4
    bool coarse = false;

    double at(int i, int j) const { return values[i * p_axis.count + j]; }
    double integral() const;
    double min_value() const;
};

//! Contribution W_mn(x, p) of the operator |m><n|; W = sum rho_mn W_mn.
complex wigner_kernel(int m, int n, double x, double p);

//! W(x, p) of rho at a single point
double wigner_point(DensityMatrix const& rho, double x, double p);

WignerGrid wigner_from_dm(DensityMatrix const& rho, GridSpec const& spec = {});

struct Marginal
{
    std::vector<double> x;
    std::vector<double> pdf;
    //! Mass deficit above 1e-3: the grid does not cover the support
    bool truncated = false;
};

/*!
 * Density of X_theta = X cos(theta) + P sin(theta) from the grid.
 *
 * For each x on the grid's x axis, W is integrated along the line
 * {x (cos, sin) + s (-sin, cos)} with bilinear interpolation at the grid
 * step. Points outside the grid count as zero.
 */
Marginal marginal(WignerGrid const& grid, double theta);

//! CSV with header `x,p,W`
std::string format_wigner_csv(WignerGrid const& grid);
//! {"x_axis": {...}, "p_axis": {...}, "values": [[...], ...]} row-major in x
std::string format_wigner_json(WignerGrid const& grid);

//---------------------------------------------------------------------------//
}  // namespace rsp

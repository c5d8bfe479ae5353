//---------------------------------------------------------------------------//
//! \file wigner.cpp
//---------------------------------------------------------------------------//
#include "rsp/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace rsp
{
namespace
{
constexpr double two_over_pi = 2 / std::numbers::pi;

// L_k^(a)(t) for k = 0..kmax
void laguerre(int kmax, int a, double t, std::vector<double>& out)
{
    out.assign(kmax + 1, 0.0);
    out[0] = 1;
    if (kmax >= 1)
    {
        out[1] = 1 + a - t;
    }
    for (int k = 1; k < kmax; ++k)
    {
        out[k + 1] = ((2 * k + 1 + a - t) * out[k] - (k + a) * out[k - 1])
                     / (k + 1);
    }
}

// W_mn for m >= n, all pairs, written into a (d x d) lower-triangular table
void kernel_table(int cutoff, double x, double p, CMatrix& table)
{
    double const r2 = x * x + p * p;
    double const r = std::sqrt(r2);
    double const phi = std::atan2(p, x);
    double const t = 4 * r2;
    table.setZero(cutoff + 1, cutoff + 1);
    std::vector<double> lag;
    for (int a = 0; a <= cutoff; ++a)
    {
        if (a > 0 && r == 0)
        {
            continue;
        }
        laguerre(cutoff - a, a, t, lag);
        for (int n = 0; n + a <= cutoff; ++n)
        {
            int const m = n + a;
            // (2/pi) (-1)^n sqrt(n!/m!) (2 r)^a e^{-2 r^2}, in log space
            double log_mag = -2 * r2
                             + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
            if (a > 0)
            {
                log_mag += a * std::log(2 * r);
            }
            double const mag = two_over_pi * std::exp(log_mag)
                               * (n % 2 ? -1.0 : 1.0) * lag[n];
            // (alpha*)^a with alpha = x + i p
            table(m, n) = std::polar(mag, -a * phi);
        }
    }
}

double bilinear(WignerGrid const& g, double u, double v)
{
    double const fi = (u - g.x_axis.min) / g.x_axis.step;
    double const fj = (v - g.p_axis.min) / g.p_axis.step;
    if (fi < 0 || fj < 0 || fi > g.x_axis.count - 1 || fj > g.p_axis.count - 1)
    {
        return 0;
    }
    int const i = std::min(static_cast<int>(fi), g.x_axis.count - 2);
    int const j = std::min(static_cast<int>(fj), g.p_axis.count - 2);
    double const di = fi - i;
    double const dj = fj - j;
    return (1 - di) * (1 - dj) * g.at(i, j) + di * (1 - dj) * g.at(i + 1, j)
           + (1 - di) * dj * g.at(i, j + 1) + di * dj * g.at(i + 1, j + 1);
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

//---------------------------------------------------------------------------//
Axis Axis::span(double lo, double hi, double step)
{
    if (!(step > 0) || !(hi > lo))
    {
        throw DomainError("axis needs hi > lo and a positive step");
    }
    int const count = static_cast<int>(std::round((hi - lo) / step)) + 1;
    return {lo, step, count};
}

double WignerGrid::integral() const
{
    double sum = 0;
    for (double v : values)
    {
        sum += v;
    }
    return sum * x_axis.step * p_axis.step;
}

double WignerGrid::min_value() const
{
    return *std::min_element(values.begin(), values.end());
}

complex wigner_kernel(int m, int n, double x, double p)
{
    if (m < 0 || n < 0)
    {
        throw DomainError("photon number must be non-negative");
    }
    CMatrix table;
    kernel_table(std::max(m, n), x, p, table);
    return m >= n ? table(m, n) : std::conj(table(n, m));
}

double wigner_point(DensityMatrix const& rho, double x, double p)
{
    int const cutoff = rho.cutoff();
    CMatrix table;
    kernel_table(cutoff, x, p, table);
    double w = 0;
    for (int m = 0; m <= cutoff; ++m)
    {
        w += rho(m, m).real() * table(m, m).real();
        for (int n = 0; n < m; ++n)
        {
            // rho_mn W_mn + rho_nm W_nm = 2 Re(rho_mn W_mn)
            w += 2 * (rho(m, n) * table(m, n)).real();
        }
    }
    return w;
}

WignerGrid wigner_from_dm(DensityMatrix const& rho, GridSpec const& spec)
{
    if (spec.x.count < 2 || spec.p.count < 2)
    {
        throw DomainError("Wigner grid needs at least 2 points per axis");
    }
    WignerGrid grid{spec.x, spec.p, {}, false};
    grid.values.resize(static_cast<std::size_t>(spec.x.count) * spec.p.count);
    for (int i = 0; i < spec.x.count; ++i)
    {
        for (int j = 0; j < spec.p.count; ++j)
        {
            grid.values[i * spec.p.count + j]
                = wigner_point(rho, spec.x[i], spec.p[j]);
        }
    }
    grid.coarse = std::abs(grid.integral() - 1) > 1e-4;
    return grid;
}

Marginal marginal(WignerGrid const& grid, double theta)
{
    double const c = std::cos(theta);
    double const s = std::sin(theta);
    double const step = std::min(grid.x_axis.step, grid.p_axis.step);
    double const reach = std::hypot(
        std::max(std::abs(grid.x_axis.min), std::abs(grid.x_axis.max())),
        std::max(std::abs(grid.p_axis.min), std::abs(grid.p_axis.max())));
    int const half = static_cast<int>(std::ceil(reach / step));

    Marginal out;
    double mass = 0;
    for (int i = 0; i < grid.x_axis.count; ++i)
    {
        double const x = grid.x_axis[i];
        double sum = 0;
        for (int k = -half; k <= half; ++k)
        {
            double const t = k * step;
            sum += bilinear(grid, x * c - t * s, x * s + t * c);
        }
        out.x.push_back(x);
        out.pdf.push_back(sum * step);
        mass += sum * step * grid.x_axis.step;
    }
    out.truncated = std::abs(mass - 1) > 1e-3;
    return out;
}

std::string format_wigner_csv(WignerGrid const& grid)
{
    std::ostringstream os;
    os << "x,p,W\n";
    for (int i = 0; i < grid.x_axis.count; ++i)
    {
        for (int j = 0; j < grid.p_axis.count; ++j)
        {
            os << num(grid.x_axis[i]) << ',' << num(grid.p_axis[j]) << ','
               << num(grid.at(i, j)) << '\n';
        }
    }
    return os.str();
}

std::string format_wigner_json(WignerGrid const& grid)
{
    std::ostringstream os;
    auto axis = [&](Axis const& a) {
        os << "{\"min\": " << num(a.min) << ", \"step\": " << num(a.step)
           << ", \"count\": " << a.count << '}';
    };
    os << "{\"x_axis\": ";
    axis(grid.x_axis);
    os << ", \"p_axis\": ";
    axis(grid.p_axis);
    os << ", \"values\": [";
    for (int i = 0; i < grid.x_axis.count; ++i)
    {
        os << (i ? ",\n  [" : "\n  [");
        for (int j = 0; j < grid.p_axis.count; ++j)
        {
            os << (j ? "," : "") << num(grid.at(i, j));
        }
        os << ']';
    }
    os << "\n]}\n";
    return os.str();
}

//---------------------------------------------------------------------------//
}  // namespace rsp

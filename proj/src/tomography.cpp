//---------------------------------------------------------------------------//
//! \file tomography.cpp
//---------------------------------------------------------------------------//
#include "rsp/tomography.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace rsp
{
namespace
{
constexpr double two_pi = 2 * std::numbers::pi;

double wrap_phase(double theta)
{
    double wrapped = std::fmod(theta, two_pi);
    if (wrapped < 0)
    {
        wrapped += two_pi;
    }
    return wrapped >= two_pi ? 0.0 : wrapped;
}

//---------------------------------------------------------------------------//
/*!
 * Quadrature kets |x_k, theta_k> as the columns of a (cutoff+1) x N matrix.
 */
class ProjectorSet
{
  public:
    ProjectorSet(std::span<PhasePoint const> points, int cutoff)
        : kets_(cutoff + 1, static_cast<Eigen::Index>(points.size()))
    {
        for (std::size_t k = 0; k < points.size(); ++k)
        {
            kets_.col(static_cast<Eigen::Index>(k))
                = quadrature_bra(cutoff, points[k].x, points[k].theta)
                      .conjugate();
        }
    }

    //! Tr(rho Pi_k) = <k|rho|k>, floored
    Eigen::VectorXd probabilities(CMatrix const& rho) const
    {
        CMatrix const m = rho * kets_;
        Eigen::VectorXd p
            = (kets_.conjugate().cwiseProduct(m)).colwise().sum().real();
        return p.cwiseMax(probability_floor);
    }

    static double mean_log(Eigen::VectorXd const& p)
    {
        return p.array().log().mean();
    }

    //! (1/N) sum_k |k><k| / p_k
    CMatrix r_operator(Eigen::VectorXd const& p) const
    {
        Eigen::VectorXd const w = p.cwiseInverse() / static_cast<double>(p.size());
        CMatrix r = (kets_ * w.asDiagonal()) * kets_.adjoint();
        return (r + r.adjoint()) / 2.0;
    }

  private:
    CMatrix kets_;
};

CMatrix rrr_step(CMatrix const& rho, CMatrix const& r)
{
    CMatrix next = r * rho * r;
    next = (next + next.adjoint()) / 2.0;
    return next / next.trace().real();
}

}  // namespace

//---------------------------------------------------------------------------//
// Binning
//---------------------------------------------------------------------------//
void BinSpec::validate() const
{
    if (!(width > 0) || !std::isfinite(width))
    {
        throw DomainError("bin width must be positive");
    }
    if (!(half_range > 0) || !std::isfinite(half_range))
    {
        throw DomainError("binning range is empty");
    }
    double const units = half_range / width - 0.5;
    if (std::abs(units - std::round(units)) > 1e-6 || units < -1e-9)
    {
        throw DomainError("binning half-range must be (k + 1/2) * width");
    }
    if (wide_tail_bins && std::round(units) < 4)
    {
        throw DomainError("binning range too small for wide tail bins");
    }
}

std::vector<double> BinSpec::edges() const
{
    this->validate();
    int const units = static_cast<int>(std::round(half_range / width - 0.5));
    int const regular = wide_tail_bins ? units - 4 : units;
    std::vector<double> positive;
    for (int k = 0; k <= regular; ++k)
    {
        positive.push_back((k + 0.5) * width);
    }
    if (wide_tail_bins)
    {
        positive.push_back((regular + 2.5) * width);
        positive.push_back((regular + 4.5) * width);
    }
    std::vector<double> edges;
    for (auto it = positive.rbegin(); it != positive.rend(); ++it)
    {
        edges.push_back(-*it);
    }
    edges.insert(edges.end(), positive.begin(), positive.end());
    return edges;
}

std::optional<std::size_t> find_bin(std::span<double const> edges, double x)
{
    if (edges.size() < 2 || !(x >= edges.front()) || !(x < edges.back()))
    {
        return std::nullopt;
    }
    auto const it = std::upper_bound(edges.begin(), edges.end(), x);
    return static_cast<std::size_t>(it - edges.begin()) - 1;
}

Postselection postselect(std::span<QuadratureSample const> samples,
                         BinSpec const& spec)
{
    if (samples.empty())
    {
        throw DomainError("cannot postselect an empty dataset");
    }
    auto const edges = spec.edges();
    Postselection out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    {
        out.bins.push_back({Bin{edges[i], edges[i + 1]}, {}, 0});
    }
    for (auto const& s : samples)
    {
        auto const idx = find_bin(edges, s.x_a);
        if (!idx)
        {
            ++out.discarded;
            continue;
        }
        out.bins[*idx].points.push_back({wrap_phase(-s.theta_rel), s.x_b});
        ++out.in_range;
    }
    for (auto& b : out.bins)
    {
        b.relative_rate = out.in_range
                              ? static_cast<double>(b.points.size())
                                    / static_cast<double>(out.in_range)
                              : 0.0;
    }
    return out;
}

//---------------------------------------------------------------------------//
// Maximum likelihood
//---------------------------------------------------------------------------//
double log_likelihood(DensityMatrix const& rho,
                      std::span<PhasePoint const> points)
{
    if (points.empty())
    {
        throw DomainError("log-likelihood of an empty record");
    }
    ProjectorSet const projectors(points, rho.cutoff());
    return ProjectorSet::mean_log(projectors.probabilities(rho.elements()));
}

ReconstructionResult maxlik_reconstruct(std::span<PhasePoint const> points,
                                        MaxLikOptions const& options)
{
    if (points.size() < min_tomography_points)
    {
        throw DomainError("maximum likelihood needs at least "
                          + std::to_string(min_tomography_points)
                          + " points, got " + std::to_string(points.size()));
    }
    if (options.cutoff < 2 || options.cutoff > max_supported_photons)
    {
        throw DomainError("tomography cutoff must lie in [2, 30]");
    }
    if (options.max_iter < 0 || !(options.tol > 0))
    {
        throw DomainError("invalid iteration controls");
    }

    ProjectorSet const projectors(points, options.cutoff);
    int const dim = options.cutoff + 1;
    CMatrix const identity = CMatrix::Identity(dim, dim);

    CMatrix rho = identity / static_cast<double>(dim);
    Eigen::VectorXd probs = projectors.probabilities(rho);
    double loglik = ProjectorSet::mean_log(probs);

    ReconstructionResult result{
        DensityMatrix::maximally_mixed(options.cutoff), loglik, 0, false, {}};
    if (options.record_trace)
    {
        result.trace.push_back(loglik);
    }

    for (int iter = 1; iter <= options.max_iter; ++iter)
    {
        CMatrix const r = projectors.r_operator(probs);
        CMatrix candidate = rrr_step(rho, r);
        Eigen::VectorXd cand_probs = projectors.probabilities(candidate);
        double cand_loglik = ProjectorSet::mean_log(cand_probs);

        bool stalled = false;
        for (double eps = 1; cand_loglik < loglik; eps /= 2)
        {
            if (eps < 1e-12)
            {
                stalled = true;
                break;
            }
            CMatrix const diluted = (identity + eps * r) / (1 + eps);
            candidate = rrr_step(rho, diluted);
            cand_probs = projectors.probabilities(candidate);
            cand_loglik = ProjectorSet::mean_log(cand_probs);
        }
        if (stalled)
        {
            // no ascent direction left at double precision
            result.converged = true;
            break;
        }

        double const change = (candidate - rho).cwiseAbs().maxCoeff();
        rho = std::move(candidate);
        probs = std::move(cand_probs);
        loglik = cand_loglik;
        result.iterations = iter;
        if (options.record_trace)
        {
            result.trace.push_back(loglik);
        }
        if (options.on_iterate)
        {
            options.on_iterate(DensityMatrix::unchecked(rho));
        }
        if (change < options.tol)
        {
            result.converged = true;
            break;
        }
    }

    result.rho = DensityMatrix(rho);
    result.log_likelihood = loglik;
    return result;
}

//---------------------------------------------------------------------------//
// Qubit model fit
//---------------------------------------------------------------------------//
QubitFit fit_qubit_model(DensityMatrix const& rho)
{
    QubitFit fit;
    fit.model_mismatch = rho.leakage() >= leakage_limit;
    double const p11 = rho(1, 1).real();
    complex const c01 = rho(0, 1);
    fit.coherence_phase = std::arg(c01);
    if (!(p11 > fit_floor))
    {
        fit.degenerate = true;
        fit.y2 = 0;
        fit.efficiency = 0;
        return fit;
    }
    double e = p11 + std::norm(c01) / p11;
    if (e > 1)
    {
        fit.clamped = e - 1 > 1e-6;
        e = 1;
    }
    fit.efficiency = e;
    fit.y2 = std::min(1.0, p11 / e);
    return fit;
}

//---------------------------------------------------------------------------//
// Per-bin reconstruction
//---------------------------------------------------------------------------//
QubitEstimate BinReconstruction::estimate() const
{
    return {bin.center(), n_samples,           fit.y2,
            fit.coherence_phase, fit.efficiency, relative_rate};
}

std::vector<BinReconstruction>
reconstruct_bins(Postselection const& selection, MaxLikOptions const& options,
                 std::size_t min_samples, unsigned workers)
{
    std::size_t const threshold = std::max(min_samples, min_tomography_points);
    std::vector<BinReconstruction> out(selection.bins.size());
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        auto const& b = selection.bins[i];
        out[i].bin = b.bin;
        out[i].n_samples = b.points.size();
        out[i].relative_rate = b.relative_rate;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(out.size());
    auto work = [&] {
        for (std::size_t i = next++; i < out.size(); i = next++)
        {
            auto const& pts = selection.bins[i].points;
            if (pts.size() < threshold)
            {
                continue;
            }
            try
            {
                MaxLikOptions opts = options;
                opts.on_iterate = nullptr;
                out[i].result = maxlik_reconstruct(pts, opts);
                out[i].fit = fit_qubit_model(out[i].result->rho);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };

    unsigned n_workers = workers ? workers : std::thread::hardware_concurrency();
    n_workers = std::clamp<unsigned>(n_workers, 1, 64);
    if (n_workers == 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < n_workers; ++w)
        {
            threads.emplace_back(work);
        }
    }
    for (auto const& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace rsp

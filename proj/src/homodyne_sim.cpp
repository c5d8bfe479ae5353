//---------------------------------------------------------------------------//
//! \file homodyne_sim.cpp
//---------------------------------------------------------------------------//
#include "rsp/homodyne_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "rsp/model.hpp"

namespace rsp
{
namespace
{
constexpr double two_pi = 2 * std::numbers::pi;
constexpr int max_proposals = 100'000;

double wrap_phase(double theta)
{
    double wrapped = std::fmod(theta, two_pi);
    if (wrapped < 0)
    {
        wrapped += two_pi;
    }
    // fmod of values just below a multiple of 2 pi can round up to 2 pi
    return wrapped >= two_pi ? 0.0 : wrapped;
}

double vacuum_density(double x)
{
    return std::sqrt(2 / std::numbers::pi) * std::exp(-2 * x * x);
}

}  // namespace

//---------------------------------------------------------------------------//
double PhaseSweep::phase(std::uint64_t index, std::uint64_t count) const
{
    switch (kind)
    {
        case Kind::linear:
            return wrap_phase(two_pi * static_cast<double>(index)
                              / static_cast<double>(count));
        case Kind::fixed:
            return wrap_phase(value);
        case Kind::stepped: {
            auto const step = index * static_cast<std::uint64_t>(steps)
                              / count;
            return wrap_phase(two_pi * static_cast<double>(step) / steps);
        }
    }
    return 0;
}

void SimConfig::validate() const
{
    if (n_samples < 1)
    {
        throw DomainError("n_samples must be at least 1");
    }
    if (!(alpha2 > 0 && alpha2 < 1))
    {
        throw DomainError("alpha2 must lie in (0, 1)");
    }
    if (!(eta >= 0 && eta <= 1))
    {
        throw DomainError("eta must lie in [0, 1]");
    }
    if (sweep.kind == PhaseSweep::Kind::stepped && sweep.steps < 1)
    {
        throw DomainError("stepped sweep needs at least one step");
    }
    if (sweep.kind == PhaseSweep::Kind::fixed && !std::isfinite(sweep.value))
    {
        throw DomainError("fixed sweep phase must be finite");
    }
    if (fock_cutoff < 1 || fock_cutoff > max_supported_photons)
    {
        throw DomainError("fock_cutoff out of range");
    }
}

//---------------------------------------------------------------------------//
double envelope_constant()
{
    // f/g <= 8 r^2 exp(-r^2) <= 8/e
    return 8 / std::numbers::e;
}

double joint_pdf(double x_a, double x_b, double theta_rel, double alpha2,
                 double eta)
{
    double const alpha = std::sqrt(alpha2);
    double const beta = std::sqrt(1 - alpha2);
    double const vac = vacuum_density(x_a) * vacuum_density(x_b);
    double const poly = alpha2 * x_a * x_a + (1 - alpha2) * x_b * x_b
                        - 2 * alpha * beta * x_a * x_b * std::cos(theta_rel);
    // (2/pi) e^{-2xa^2-2xb^2} equals the product of the vacuum densities
    return (1 - eta) * vac + eta * vac * 4 * poly;
}

SamplePair sample_pair(Rng& rng, double theta_rel, double alpha2, double eta,
                       RejectionStats* stats)
{
    if (rng.uniform() >= eta)
    {
        double const sd = std::sqrt(vacuum_variance);
        return {sd * rng.normal(), sd * rng.normal()};
    }
    // Envelope N(0, I/2): density exp(-r^2)/pi
    double const sd = std::sqrt(0.5);
    double const c = envelope_constant();
    double const alpha = std::sqrt(alpha2);
    double const beta = std::sqrt(1 - alpha2);
    double const cos_t = std::cos(theta_rel);
    for (int attempt = 0; attempt < max_proposals; ++attempt)
    {
        double const xa = sd * rng.normal();
        double const xb = sd * rng.normal();
        double const r2 = xa * xa + xb * xb;
        double const poly = alpha2 * xa * xa + (1 - alpha2) * xb * xb
                            - 2 * alpha * beta * xa * xb * cos_t;
        // f/g = 8 poly exp(-r^2)
        double const ratio = 8 * poly * std::exp(-r2);
        if (stats)
        {
            ++stats->proposals;
        }
        if (ratio > c)
        {
            throw NumericalError("envelope violation in pair sampler");
        }
        if (rng.uniform() * c < ratio)
        {
            if (stats)
            {
                ++stats->accepted;
            }
            return {xa, xb};
        }
    }
    throw NumericalError("envelope violation: no proposal accepted");
}

double max_model_deviation(SimConfig const& config)
{
    config.validate();
    int const cutoff = config.fock_cutoff;
    auto const ensemble = source_ensemble(config.alpha2, config.eta, cutoff);
    double worst = 0;
    for (double theta : {0.0, 1.3, 2.9})
    {
        for (double xa : {-1.2, -0.4, 0.0, 0.71, 1.5})
        {
            CVector const bra_a = quadrature_bra(cutoff, xa, 0.0);
            for (double xb : {-0.9, 0.0, 0.3, 1.1})
            {
                CVector const bra_b = quadrature_bra(cutoff, xb, -theta);
                double fock = 0;
                for (auto const& [w, state] : ensemble.components())
                {
                    fock += w * std::norm(
                        (bra_a.transpose() * state.amplitudes() * bra_b)(0, 0));
                }
                worst = std::max(worst, std::abs(fock - joint_pdf(
                                                            xa, xb, theta,
                                                            config.alpha2,
                                                            config.eta)));
            }
        }
    }
    return worst;
}

std::vector<QuadratureSample> generate_dataset(SimConfig const& config)
{
    if (max_model_deviation(config) > model_check_tolerance)
    {
        throw NumericalError("closed-form joint density disagrees with the "
                             "Fock-level source state");
    }
    std::uint64_t const n = config.n_samples;
    std::vector<QuadratureSample> out(n);

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i)
        {
            Rng rng = Rng::substream(config.seed, i);
            double const theta = config.sweep.phase(i, n);
            auto const [xa, xb] = sample_pair(rng, theta, config.alpha2,
                                              config.eta);
            out[i] = {theta, xa, xb};
        }
    };

    unsigned workers = config.workers ? config.workers
                                      : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, 64);
    if (workers == 1 || n < 1024)
    {
        run_range(0, n);
        return out;
    }

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> threads;
        std::uint64_t const chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w)
        {
            std::uint64_t const begin = std::min<std::uint64_t>(w * chunk, n);
            std::uint64_t const end = std::min<std::uint64_t>(begin + chunk, n);
            threads.emplace_back([&, w, begin, end] {
                try
                {
                    run_range(begin, end);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
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
// QuadratureSampler
//---------------------------------------------------------------------------//
QuadratureSampler::QuadratureSampler(DensityMatrix rho) : rho_(std::move(rho))
{
    int const cutoff = rho_.cutoff();
    double mean_n = 0;
    for (int n = 0; n <= cutoff; ++n)
    {
        mean_n += n * rho_(n, n).real();
    }
    // twice the phase-averaged quadrature variance (2<n> + 1)/4
    sigma_ = std::sqrt(0.5 * (2 * mean_n + 1));

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho_.elements(),
                                                  Eigen::EigenvaluesOnly);
    double const lambda_max = solver.eigenvalues().maxCoeff();

    double const extent = 12 + 2 * std::sqrt(static_cast<double>(cutoff));
    double worst = 0;
    for (double x = -extent; x <= extent; x += 1e-3)
    {
        auto const f = hermite_functions(cutoff, x);
        double k = 0;
        for (double v : f)
        {
            k += v * v;
        }
        double const g = std::exp(-0.5 * x * x / (sigma_ * sigma_))
                         / (sigma_ * std::sqrt(2 * std::numbers::pi));
        worst = std::max(worst, k / g);
    }
    bound_ = 1.02 * lambda_max * worst;
}

double QuadratureSampler::sample(Rng& rng, double theta) const
{
    for (int attempt = 0; attempt < max_proposals; ++attempt)
    {
        double const x = sigma_ * rng.normal();
        double const g = std::exp(-0.5 * x * x / (sigma_ * sigma_))
                         / (sigma_ * std::sqrt(2 * std::numbers::pi));
        double const p = quadrature_pdf(rho_, theta, x);
        if (p > bound_ * g)
        {
            throw NumericalError("envelope violation in quadrature sampler");
        }
        if (rng.uniform() * bound_ * g < p)
        {
            return x;
        }
    }
    throw NumericalError("envelope violation: no proposal accepted");
}

//---------------------------------------------------------------------------//
}  // namespace rsp

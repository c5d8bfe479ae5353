//---------------------------------------------------------------------------//
//! \file model.cpp
//---------------------------------------------------------------------------//
#include "rsp/model.hpp"

#include <cmath>
#include <numbers>

namespace rsp
{
namespace
{
// |<q|0>|^2 = sqrt(2/pi) exp(-2 q^2)
double vacuum_density(double q)
{
    return std::sqrt(2 / std::numbers::pi) * std::exp(-2 * q * q);
}

// Integral of the vacuum density and of 4 q^2 times it from -inf to q
double vacuum_cdf(double q)
{
    return 0.5 * std::erfc(-std::numbers::sqrt2 * q);
}

double photon_cdf(double q)
{
    // d/dq [-q vacuum_density(q)] = vacuum_density(q) (4 q^2 - 1)
    return vacuum_cdf(q) - q * vacuum_density(q);
}

}  // namespace

void ProtocolParams::validate() const
{
    if (!(alpha2 > 0 && alpha2 < 1))
    {
        throw DomainError("alpha2 must lie in (0, 1)");
    }
    if (!(eta > 0 && eta <= 1))
    {
        throw DomainError("eta must lie in (0, 1]");
    }
    if (!std::isfinite(q) || !std::isfinite(theta_a))
    {
        throw DomainError("q and theta_a must be finite");
    }
}

QubitCoefficients qubit_coefficients(ProtocolParams const& params)
{
    params.validate();
    complex const x = std::sqrt(params.alpha2)
                      * quad_wavefunction(1, params.q, params.theta_a);
    complex const y = -std::sqrt(params.beta2())
                      * quad_wavefunction(0, params.q, params.theta_a);
    double const norm = std::sqrt(std::norm(x) + std::norm(y));
    return {x / norm, y / norm};
}

double single_photon_fraction(ProtocolParams const& params)
{
    params.validate();
    double const b2 = params.beta2();
    return b2 / (b2 + 4 * params.alpha2 * params.q * params.q);
}

double preparation_efficiency(ProtocolParams const& params)
{
    params.validate();
    double const p0 = vacuum_density(params.q);
    double const p1 = 4 * params.q * params.q * p0;
    double const photon = params.eta
                          * (params.alpha2 * p1 + params.beta2() * p0);
    return photon / (photon + (1 - params.eta) * p0);
}

double success_rate(ProtocolParams const& params)
{
    double const eta = params.eta;
    if (!(params.alpha2 > 0 && params.alpha2 < 1) || !(eta >= 0 && eta <= 1))
    {
        throw DomainError("invalid protocol parameters");
    }
    double const p0 = vacuum_density(params.q);
    double const p1 = 4 * params.q * params.q * p0;
    return (1 - eta) * p0 + eta * (params.alpha2 * p1 + params.beta2() * p0);
}

double success_probability(double alpha2, double eta, double lo, double hi)
{
    double const vac = vacuum_cdf(hi) - vacuum_cdf(lo);
    double const one = photon_cdf(hi) - photon_cdf(lo);
    return (1 - eta) * vac + eta * (alpha2 * one + (1 - alpha2) * vac);
}

DensityMatrix predict_rho_b(ProtocolParams const& params, int cutoff)
{
    auto const [x, y] = qubit_coefficients(params);
    double const e = preparation_efficiency(params);
    CVector psi = CVector::Zero(cutoff + 1);
    psi[0] = x;
    psi[1] = y;
    CMatrix rho = e * psi * psi.adjoint();
    rho(0, 0) += 1 - e;
    return DensityMatrix(std::move(rho));
}

Prediction predict(ProtocolParams const& params, int cutoff)
{
    auto const [x, y] = qubit_coefficients(params);
    return {x,
            y,
            std::norm(y),
            preparation_efficiency(params),
            success_rate(params),
            predict_rho_b(params, cutoff)};
}

TwoModeEnsemble source_ensemble(double alpha2, double eta, int cutoff)
{
    auto split = beam_splitter(TwoModePure::fock(1, 0, cutoff), alpha2);
    std::vector<WeightedTwoMode> parts;
    if (eta > 0)
    {
        parts.push_back({eta, std::move(split)});
    }
    if (eta < 1)
    {
        parts.push_back({1 - eta, TwoModePure::fock(0, 0, cutoff)});
    }
    return TwoModeEnsemble(std::move(parts));
}

DensityMatrix conditional_state_from_fock(ProtocolParams const& params,
                                          int cutoff)
{
    params.validate();
    auto const ensemble = source_ensemble(params.alpha2, params.eta, cutoff);
    CMatrix rho = CMatrix::Zero(cutoff + 1, cutoff + 1);
    double total = 0;
    for (auto const& [w, state] : ensemble.components())
    {
        auto const proj = project_mode_a(state, params.q, params.theta_a);
        // unnormalized conditional vector already carries its own weight
        auto const& c = proj.conditional.amplitudes();
        rho += w * c * c.adjoint();
        total += w * proj.weight;
    }
    if (!(total > 0))
    {
        throw NumericalError("zero-probability projection");
    }
    return DensityMatrix(CMatrix(rho / total));
}

//---------------------------------------------------------------------------//
}  // namespace rsp

//---------------------------------------------------------------------------//
//! \file rsp/model.hpp
//! Closed-form predictions for remote qubit preparation by a quadrature
//! measurement on alpha|1,0> - beta|0,1> with source efficiency eta.
//---------------------------------------------------------------------------//
#pragma once

#include "rsp/fock.hpp"

namespace rsp
{
//---------------------------------------------------------------------------//
/*!
 * Protocol parameters.
 *
 * alpha2 is the beam-splitter transmission (beta^2 = 1 - alpha2), eta the
 * cumulative efficiency of the single-photon source, theta_a Alice's local
 * oscillator phase and q the conditional quadrature value.
 */
struct ProtocolParams
{
    double alpha2 = 0.5;
    double eta = 0.55;
    double theta_a = 0;
    double q = 0;

    double beta2() const { return 1 - alpha2; }

    //! Throws DomainError when alpha2 is outside (0,1), eta outside (0,1] or
    //! q not finite.
    void validate() const;
};

struct QubitCoefficients
{
    complex x;  //!< vacuum amplitude
    complex y;  //!< single-photon amplitude
};

struct Prediction
{
    complex x;
    complex y;
    double y2;
    double efficiency;
    double success_rate;
    DensityMatrix rho_b;
};

//! Normalized (x, y) with real-positive normalization constant.
QubitCoefficients qubit_coefficients(ProtocolParams const& params);

//! beta^2 / (beta^2 + 4 alpha^2 q^2)
double single_photon_fraction(ProtocolParams const& params);

//! Weight E of the pure qubit in the conditional ensemble.
double preparation_efficiency(ProtocolParams const& params);

/*!
 * Probability density of Alice's outcome q:
 * (1 - eta)|<q|0>|^2 + eta (alpha^2 |<q|1>|^2 + beta^2 |<q|0>|^2).
 * Integrates to one over q.
 */
double success_rate(ProtocolParams const& params);

//! Integral of success_rate over [lo, hi), in closed form.
double success_probability(double alpha2, double eta, double lo, double hi);

//! E |psi_B><psi_B| + (1 - E)|0><0| at the given cutoff (>= 1)
DensityMatrix predict_rho_b(ProtocolParams const& params, int cutoff = 1);

Prediction predict(ProtocolParams const& params, int cutoff = 1);

/*!
 * Conditional state of mode B built from the two-mode ensemble directly:
 * the source mixture eta |1><1| + (1 - eta)|0><0| is split on the beam
 * splitter and each branch is projected on <q_theta_a| with Bayesian weights.
 */
DensityMatrix conditional_state_from_fock(ProtocolParams const& params,
                                          int cutoff = 2);

//! Two-mode ensemble after the beam splitter for the lossy single photon.
TwoModeEnsemble source_ensemble(double alpha2, double eta, int cutoff = 2);

//---------------------------------------------------------------------------//
}  // namespace rsp

//---------------------------------------------------------------------------//
//! \file rsp/fock.hpp
//! Fock-basis numerics shared by every stage of the toolkit.
//!
//! Quadrature convention: X = (a + a^dag)/2, P = (a - a^dag)/(2i), so
//! [X, P] = i/2 and the vacuum quadrature variance is 1/4. The vacuum
//! wavefunction is (2/pi)^(1/4) exp(-x^2). Every pdf, sampler, projector and
//! Wigner kernel in this library uses this one scaling.
//---------------------------------------------------------------------------//
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rsp
{
using complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

//! Vacuum variance of any quadrature X_theta.
inline constexpr double vacuum_variance = 0.25;

//! Highest photon number for which the wavefunction recurrence is supported.
inline constexpr int max_supported_photons = 30;

//---------------------------------------------------------------------------//
// Errors
//---------------------------------------------------------------------------//
//! Input outside the domain of an operation (bad state, bad parameter).
class DomainError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Numerical breakdown (non-convergence, envelope violation, ...).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
// States
//---------------------------------------------------------------------------//
/*!
 * Single-mode pure state, amplitudes indexed by photon number 0..cutoff.
 */
class PureState
{
  public:
    //! Vacuum at the given cutoff
    explicit PureState(int cutoff);
    explicit PureState(CVector amplitudes);

    static PureState fock(int n, int cutoff);

    int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
    CVector const& amplitudes() const { return amps_; }
    complex operator[](int n) const { return amps_[n]; }

    double norm_squared() const { return amps_.squaredNorm(); }

    //! Unit-norm copy; throws DomainError for the zero vector.
    PureState normalized() const;

  private:
    CVector amps_;
};

/*!
 * Pure state of modes A and B; element (nA, nB) is the amplitude of
 * |nA>_A |nB>_B. Both modes share the same cutoff.
 */
class TwoModePure
{
  public:
    explicit TwoModePure(CMatrix amplitudes);

    //! |nA, nB> at the given cutoff
    static TwoModePure fock(int n_a, int n_b, int cutoff);

    int cutoff() const { return static_cast<int>(amps_.rows()) - 1; }
    CMatrix const& amplitudes() const { return amps_; }
    complex operator()(int n_a, int n_b) const { return amps_(n_a, n_b); }

    double norm_squared() const { return amps_.squaredNorm(); }
    TwoModePure normalized() const;

    //! Largest nA + nB with a nonzero amplitude (-1 for the zero state)
    int max_total_photons() const;

  private:
    CMatrix amps_;
};

struct WeightedTwoMode
{
    double weight;
    TwoModePure state;
};

//! Mixed two-mode state as a convex combination of pure components.
class TwoModeEnsemble
{
  public:
    explicit TwoModeEnsemble(std::vector<WeightedTwoMode> components);

    std::vector<WeightedTwoMode> const& components() const
    {
        return components_;
    }

  private:
    std::vector<WeightedTwoMode> components_;
};

/*!
 * Hermitian, positive semidefinite, unit-trace matrix over the Fock basis.
 *
 * Construction validates the invariants (Hermitian to 1e-12, trace to 1e-9,
 * smallest eigenvalue >= -1e-9). The exact anti-Hermitian residue is removed
 * so downstream sums are real.
 */
class DensityMatrix
{
  public:
    explicit DensityMatrix(CMatrix elements);

    static DensityMatrix pure(PureState const& psi);
    static DensityMatrix fock(int n, int cutoff);
    static DensityMatrix maximally_mixed(int cutoff);

    //! Hermitize and wrap without the PSD/trace checks; for iterates whose
    //! physicality is asserted separately.
    static DensityMatrix unchecked(CMatrix elements);

    int cutoff() const { return static_cast<int>(rho_.rows()) - 1; }
    CMatrix const& elements() const { return rho_; }
    complex operator()(int m, int n) const { return rho_(m, n); }

    //! Same state in a larger (or equal) truncated space
    DensityMatrix embedded(int cutoff) const;

    double min_eigenvalue() const;
    double trace_distance(DensityMatrix const& other) const;

    //! sum over n >= 2 of rho_nn
    double leakage() const;

  private:
    DensityMatrix() = default;

    CMatrix rho_;
};

struct WeightedPure
{
    double weight;
    PureState state;
};

//! rho = sum_k w_k |psi_k><psi_k| (states normalized first)
DensityMatrix density_from_ensemble(std::span<WeightedPure const> components);

//---------------------------------------------------------------------------//
// Quadrature wavefunctions
//---------------------------------------------------------------------------//
/*!
 * <Q_theta|n> = (2/pi)^(1/4) H_n(sqrt2 Q) / sqrt(2^n n!) exp(-Q^2)
 * exp(-i n theta).
 *
 * The normalized Hermite functions are built by the three-term recurrence
 *   f_{n+1} = sqrt(2/(n+1)) y f_n - sqrt(n/(n+1)) f_{n-1},  y = sqrt2 Q
 * so the factorial never appears explicitly.
 */
complex quad_wavefunction(int n, double q, double theta);

//! Real part of <Q|n> at theta = 0 for all n = 0..cutoff.
std::vector<double> hermite_functions(int cutoff, double q);

//! <Q_theta|n> for n = 0..cutoff, i.e. the quadrature eigenvector in the
//! Fock basis (conjugated).
CVector quadrature_bra(int cutoff, double q, double theta);

//! Probability density of outcome x for a theta-quadrature measurement
double quadrature_pdf(DensityMatrix const& rho, double theta, double x);

//---------------------------------------------------------------------------//
// Two-mode operations
//---------------------------------------------------------------------------//
/*!
 * Lossless beam splitter with transmission alpha2 acting on creation
 * operators as a^dag -> alpha a^dag - beta b^dag,
 * b^dag -> beta a^dag + alpha b^dag, so that |1,0> -> alpha|1,0> - beta|0,1>.
 */
TwoModePure beam_splitter(TwoModePure const& input, double transmission);

struct ProjectionResult
{
    //! Unnormalized conditional vector of mode B
    PureState conditional;
    //! Squared norm of the conditional vector (density of outcome q)
    double weight;

    //! Normalized conditional state, empty for a zero-probability outcome
    std::optional<PureState> normalized() const;
};

//! Project mode A onto the quadrature eigenstate <q_theta|.
ProjectionResult
project_mode_a(TwoModePure const& state, double q, double theta_a);

//---------------------------------------------------------------------------//
}  // namespace rsp

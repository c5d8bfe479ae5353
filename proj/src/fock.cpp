//---------------------------------------------------------------------------//
//! \file fock.cpp
//---------------------------------------------------------------------------//
#include "rsp/fock.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rsp
{
namespace
{
void require_cutoff(int cutoff)
{
    if (cutoff < 1 || cutoff > max_supported_photons)
    {
        throw DomainError("Fock cutoff must lie in [1, "
                          + std::to_string(max_supported_photons)
                          + "], got " + std::to_string(cutoff));
    }
}

double binomial(int n, int k)
{
    double result = 1;
    for (int i = 1; i <= k; ++i)
    {
        result = result * (n - k + i) / i;
    }
    return result;
}

}  // namespace

//---------------------------------------------------------------------------//
// PureState
//---------------------------------------------------------------------------//
PureState::PureState(int cutoff)
{
    require_cutoff(cutoff);
    amps_ = CVector::Zero(cutoff + 1);
    amps_[0] = 1;
}

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes))
{
    require_cutoff(this->cutoff());
}

PureState PureState::fock(int n, int cutoff)
{
    if (n < 0 || n > cutoff)
    {
        throw DomainError("photon number " + std::to_string(n)
                          + " outside cutoff " + std::to_string(cutoff));
    }
    PureState result(cutoff);
    result.amps_[0] = 0;
    result.amps_[n] = 1;
    return result;
}

PureState PureState::normalized() const
{
    double const norm = amps_.norm();
    if (!(norm > 0))
    {
        throw DomainError("cannot normalize the zero state");
    }
    return PureState(CVector(amps_ / norm));
}

//---------------------------------------------------------------------------//
// TwoModePure
//---------------------------------------------------------------------------//
TwoModePure::TwoModePure(CMatrix amplitudes) : amps_(std::move(amplitudes))
{
    if (amps_.rows() != amps_.cols())
    {
        throw DomainError("two-mode amplitude matrix must be square");
    }
    require_cutoff(this->cutoff());
}

TwoModePure TwoModePure::fock(int n_a, int n_b, int cutoff)
{
    require_cutoff(cutoff);
    if (n_a < 0 || n_b < 0 || n_a > cutoff || n_b > cutoff)
    {
        throw DomainError("photon numbers outside cutoff");
    }
    CMatrix amps = CMatrix::Zero(cutoff + 1, cutoff + 1);
    amps(n_a, n_b) = 1;
    return TwoModePure(std::move(amps));
}

TwoModePure TwoModePure::normalized() const
{
    double const norm = amps_.norm();
    if (!(norm > 0))
    {
        throw DomainError("cannot normalize the zero state");
    }
    return TwoModePure(CMatrix(amps_ / norm));
}

int TwoModePure::max_total_photons() const
{
    int result = -1;
    for (int a = 0; a < amps_.rows(); ++a)
    {
        for (int b = 0; b < amps_.cols(); ++b)
        {
            if (amps_(a, b) != complex{0, 0})
            {
                result = std::max(result, a + b);
            }
        }
    }
    return result;
}

TwoModeEnsemble::TwoModeEnsemble(std::vector<WeightedTwoMode> components)
    : components_(std::move(components))
{
    if (components_.empty())
    {
        throw DomainError("ensemble needs at least one component");
    }
    double total = 0;
    for (auto& c : components_)
    {
        if (!(c.weight >= 0 && c.weight <= 1))
        {
            throw DomainError("ensemble weight outside [0, 1]");
        }
        total += c.weight;
        c.state = c.state.normalized();
    }
    if (std::abs(total - 1) > 1e-12)
    {
        throw DomainError("ensemble weights must sum to 1");
    }
}

//---------------------------------------------------------------------------//
// DensityMatrix
//---------------------------------------------------------------------------//
DensityMatrix::DensityMatrix(CMatrix elements)
{
    if (elements.rows() != elements.cols())
    {
        throw DomainError("density matrix must be square");
    }
    require_cutoff(static_cast<int>(elements.rows()) - 1);
    double const herm_err = (elements - elements.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > 1e-12)
    {
        throw DomainError("density matrix is not Hermitian");
    }
    rho_ = (elements + elements.adjoint()) / 2.0;
    if (std::abs(rho_.trace().real() - 1) > 1e-9)
    {
        throw DomainError("density matrix trace differs from 1");
    }
    if (this->min_eigenvalue() < -1e-9)
    {
        throw DomainError("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::unchecked(CMatrix elements)
{
    DensityMatrix result;
    result.rho_ = (elements + elements.adjoint()) / 2.0;
    return result;
}

DensityMatrix DensityMatrix::pure(PureState const& psi)
{
    auto const v = psi.normalized().amplitudes();
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::fock(int n, int cutoff)
{
    return pure(PureState::fock(n, cutoff));
}

DensityMatrix DensityMatrix::maximally_mixed(int cutoff)
{
    require_cutoff(cutoff);
    return DensityMatrix(CMatrix::Identity(cutoff + 1, cutoff + 1)
                         / static_cast<double>(cutoff + 1));
}

DensityMatrix DensityMatrix::embedded(int cutoff) const
{
    if (cutoff < this->cutoff())
    {
        throw DomainError("cannot embed into a smaller Fock space");
    }
    CMatrix big = CMatrix::Zero(cutoff + 1, cutoff + 1);
    big.topLeftCorner(rho_.rows(), rho_.cols()) = rho_;
    return unchecked(std::move(big));
}

double DensityMatrix::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho_,
                                                  Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double DensityMatrix::trace_distance(DensityMatrix const& other) const
{
    int const n = std::max(this->cutoff(), other.cutoff());
    CMatrix diff = this->embedded(n).rho_ - other.embedded(n).rho_;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(diff,
                                                  Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double DensityMatrix::leakage() const
{
    double sum = 0;
    for (int n = 2; n < rho_.rows(); ++n)
    {
        sum += rho_(n, n).real();
    }
    return sum;
}

DensityMatrix density_from_ensemble(std::span<WeightedPure const> components)
{
    if (components.empty())
    {
        throw DomainError("ensemble needs at least one component");
    }
    int cutoff = 1;
    double total = 0;
    for (auto const& c : components)
    {
        cutoff = std::max(cutoff, c.state.cutoff());
        total += c.weight;
        if (c.weight < 0)
        {
            throw DomainError("negative ensemble weight");
        }
    }
    if (std::abs(total - 1) > 1e-9)
    {
        throw DomainError("ensemble weights sum to " + std::to_string(total)
                          + ", expected 1");
    }
    CMatrix rho = CMatrix::Zero(cutoff + 1, cutoff + 1);
    for (auto const& c : components)
    {
        CVector v = CVector::Zero(cutoff + 1);
        v.head(c.state.cutoff() + 1) = c.state.normalized().amplitudes();
        rho += c.weight * v * v.adjoint();
    }
    return DensityMatrix(std::move(rho));
}

//---------------------------------------------------------------------------//
// Quadrature wavefunctions
//---------------------------------------------------------------------------//
std::vector<double> hermite_functions(int cutoff, double q)
{
    if (cutoff < 0)
    {
        throw DomainError("photon number must be non-negative");
    }
    if (!std::isfinite(q))
    {
        throw DomainError("quadrature value must be finite");
    }
    std::vector<double> f(cutoff + 1);
    double const y = std::numbers::sqrt2 * q;
    // (2/pi)^(1/4)
    static double const prefactor = std::pow(2 / std::numbers::pi, 0.25);
    f[0] = prefactor * std::exp(-q * q);
    if (cutoff >= 1)
    {
        f[1] = std::numbers::sqrt2 * y * f[0];
    }
    for (int n = 1; n < cutoff; ++n)
    {
        f[n + 1] = std::sqrt(2.0 / (n + 1)) * y * f[n]
                   - std::sqrt(static_cast<double>(n) / (n + 1)) * f[n - 1];
    }
    return f;
}

complex quad_wavefunction(int n, double q, double theta)
{
    if (n < 0)
    {
        throw DomainError("photon number must be non-negative");
    }
    return hermite_functions(n, q)[n] * std::polar(1.0, -n * theta);
}

CVector quadrature_bra(int cutoff, double q, double theta)
{
    auto const f = hermite_functions(cutoff, q);
    CVector result(cutoff + 1);
    for (int n = 0; n <= cutoff; ++n)
    {
        result[n] = f[n] * std::polar(1.0, -n * theta);
    }
    return result;
}

double quadrature_pdf(DensityMatrix const& rho, double theta, double x)
{
    // <x|rho|x> with <x|n> = bra[n]
    CVector const bra = quadrature_bra(rho.cutoff(), x, theta);
    return (bra.transpose() * rho.elements() * bra.conjugate())(0).real();
}

//---------------------------------------------------------------------------//
// Two-mode operations
//---------------------------------------------------------------------------//
TwoModePure beam_splitter(TwoModePure const& input, double transmission)
{
    if (!(transmission > 0 && transmission < 1))
    {
        throw DomainError("beam-splitter transmission must lie in (0, 1)");
    }
    int const cutoff = input.cutoff();
    if (input.max_total_photons() > cutoff)
    {
        throw DomainError("beam-splitter output would exceed the Fock cutoff");
    }
    double const t = std::sqrt(transmission);
    double const r = std::sqrt(1 - transmission);

    // (a^dag)^na (b^dag)^nb / sqrt(na! nb!) with
    // a^dag -> t a^dag - r b^dag, b^dag -> r a^dag + t b^dag
    CMatrix out = CMatrix::Zero(cutoff + 1, cutoff + 1);
    auto const& in = input.amplitudes();
    for (int na = 0; na <= cutoff; ++na)
    {
        for (int nb = 0; na + nb <= cutoff; ++nb)
        {
            complex const amp = in(na, nb);
            if (amp == complex{0, 0})
            {
                continue;
            }
            double const norm = std::sqrt(std::tgamma(na + 1.0)
                                          * std::tgamma(nb + 1.0));
            for (int j = 0; j <= na; ++j)
            {
                // j factors of t a^dag, na - j of -r b^dag
                double const cj = binomial(na, j) * std::pow(t, j)
                                  * std::pow(-r, na - j);
                for (int k = 0; k <= nb; ++k)
                {
                    // k factors of r a^dag, nb - k of t b^dag
                    double const ck = binomial(nb, k) * std::pow(r, k)
                                      * std::pow(t, nb - k);
                    int const out_a = j + k;
                    int const out_b = na + nb - out_a;
                    double const fock_norm = std::sqrt(
                        std::tgamma(out_a + 1.0) * std::tgamma(out_b + 1.0));
                    out(out_a, out_b) += amp * cj * ck * fock_norm / norm;
                }
            }
        }
    }
    return TwoModePure(std::move(out));
}

std::optional<PureState> ProjectionResult::normalized() const
{
    if (!(weight > 0))
    {
        return std::nullopt;
    }
    return PureState(CVector(conditional.amplitudes() / std::sqrt(weight)));
}

ProjectionResult
project_mode_a(TwoModePure const& state, double q, double theta_a)
{
    CVector const bra = quadrature_bra(state.cutoff(), q, theta_a);
    // c_B(nB) = sum_nA <q|nA> psi(nA, nB)
    CVector c = state.amplitudes().transpose() * bra;
    double const weight = c.squaredNorm();
    return {PureState(std::move(c)), weight};
}

//---------------------------------------------------------------------------//
}  // namespace rsp

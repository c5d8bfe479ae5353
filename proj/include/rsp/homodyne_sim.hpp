//---------------------------------------------------------------------------//
//! \file rsp/homodyne_sim.hpp
//! Monte-Carlo generation of correlated homodyne records (x_A, x_B).
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <vector>

#include "rsp/fock.hpp"
#include "rsp/rng.hpp"

namespace rsp
{
//---------------------------------------------------------------------------//
//! How the relative phase theta_A - theta_B evolves over a run.
struct PhaseSweep
{
    enum class Kind
    {
        linear,   //!< continuous ramp over one full 2 pi cycle
        fixed,    //!< constant value
        stepped,  //!< `steps` equal plateaus covering [0, 2 pi)
    };

    Kind kind = Kind::linear;
    double value = 0;
    int steps = 1;

    //! Phase of event `index` out of `count`, in [0, 2 pi)
    double phase(std::uint64_t index, std::uint64_t count) const;
};

struct SimConfig
{
    double alpha2 = 0.5;
    double eta = 0.55;
    std::uint64_t n_samples = 300'000;
    std::uint64_t seed = 1;
    PhaseSweep sweep;
    int fock_cutoff = 8;
    //! 0 selects the hardware concurrency
    unsigned workers = 0;

    void validate() const;
};

struct QuadratureSample
{
    double theta_rel;
    double x_a;
    double x_b;
};

//! Constant c of the entangled-branch envelope c N(0, I/2); equals 8/e.
double envelope_constant();

/*!
 * Joint density of (x_a, x_b) at relative phase theta_rel:
 * (1 - eta) G(x_a) G(x_b)
 *   + eta (2/pi) e^{-2 x_a^2 - 2 x_b^2}
 *       4 [alpha^2 x_a^2 + beta^2 x_b^2 - 2 alpha beta x_a x_b cos theta_rel]
 * with G the vacuum density.
 */
double joint_pdf(double x_a, double x_b, double theta_rel, double alpha2,
                 double eta);

struct SamplePair
{
    double x_a;
    double x_b;
};

//! Running count of entangled-branch proposals and acceptances.
struct RejectionStats
{
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
};

/*!
 * Draw one (x_a, x_b) pair distributed per joint_pdf.
 *
 * Bernoulli(eta) chooses the branch. The vacuum branch draws two independent
 * N(0, 1/4) values; the entangled branch uses rejection sampling from
 * N(0, I/2). Throws NumericalError after 1e5 rejected proposals.
 */
SamplePair sample_pair(Rng& rng, double theta_rel, double alpha2, double eta,
                       RejectionStats* stats = nullptr);

inline constexpr double model_check_tolerance = 1e-9;

/*!
 * Largest difference between joint_pdf and the density of the Fock-level
 * source state (truncated at config.fock_cutoff) over a fixed set of
 * points and phases.
 */
double max_model_deviation(SimConfig const& config);

/*!
 * Draw config.n_samples pairs. Event i uses substream (seed, i) and the
 * sweep phase for index i, so the output does not depend on the worker
 * count. Throws NumericalError when max_model_deviation exceeds
 * model_check_tolerance.
 */
std::vector<QuadratureSample> generate_dataset(SimConfig const& config);

//---------------------------------------------------------------------------//
/*!
 * Exact sampler of the theta-quadrature distribution of a single-mode state.
 *
 * Rejection from a centred normal whose width follows the mean photon
 * number. The bound uses <x|rho|x> <= lambda_max sum_n |<x|n>|^2, which does
 * not depend on theta, so one constant serves every phase.
 */
class QuadratureSampler
{
  public:
    explicit QuadratureSampler(DensityMatrix rho);

    double sample(Rng& rng, double theta) const;

    double acceptance_bound() const { return bound_; }

  private:
    DensityMatrix rho_;
    double sigma_;
    double bound_;
};

//---------------------------------------------------------------------------//
}  // namespace rsp

//---------------------------------------------------------------------------//
//! \file rsp/tomography.hpp
//! Postselection on Alice's quadrature and maximum-likelihood homodyne
//! tomography of Bob's conditional ensembles.
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rsp/fock.hpp"
#include "rsp/homodyne_sim.hpp"

namespace rsp
{
//---------------------------------------------------------------------------//
// Binning
//---------------------------------------------------------------------------//
/*!
 * Non-overlapping bins on Alice's quadrature.
 *
 * Regular bins of `width` are centred on integer multiples of the width,
 * starting with [-width/2, width/2). With `wide_tail_bins` the outermost two
 * bins on each side are twice as wide. `half_range` must therefore equal
 * (k + 1/2) width for an integer k (k >= 4 with wide tails). The default
 * gives 33 regular bins plus 2 wide bins per side over [-1.4555, 1.4555).
 */
struct BinSpec
{
    double width = 0.071;
    double half_range = 20.5 * 0.071;
    bool wide_tail_bins = true;

    void validate() const;

    //! Ascending bin edges; bin i is [edges[i], edges[i+1])
    std::vector<double> edges() const;
};

struct Bin
{
    double lo;
    double hi;

    double center() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

//! Bob's homodyne record: LO phase and measured quadrature
struct PhasePoint
{
    double theta;
    double x;
};

struct BinContent
{
    Bin bin;
    std::vector<PhasePoint> points;
    //! count / (samples inside the binned range)
    double relative_rate = 0;
};

struct Postselection
{
    std::vector<BinContent> bins;
    std::size_t in_range = 0;
    std::size_t discarded = 0;
};

/*!
 * Assign each sample to the bin containing x_a (half-open [lo, hi)).
 *
 * Tomography works in the frame where Alice's phase is zero, so Bob's LO
 * phase is theta_B = -theta_rel (wrapped to [0, 2 pi)).
 */
Postselection postselect(std::span<QuadratureSample const> samples,
                         BinSpec const& spec);

//! Index of the bin containing x, or empty when x lies outside the range
std::optional<std::size_t> find_bin(std::span<double const> edges, double x);

//---------------------------------------------------------------------------//
// Maximum likelihood
//---------------------------------------------------------------------------//
struct MaxLikOptions
{
    int cutoff = 5;
    int max_iter = 2000;
    double tol = 1e-9;
    //! Keep the mean log-likelihood of every iterate (index 0 = start)
    bool record_trace = false;
    //! Called with each accepted iterate; for invariant checks
    std::function<void(DensityMatrix const&)> on_iterate;
};

struct ReconstructionResult
{
    DensityMatrix rho;
    double log_likelihood;
    int iterations;
    bool converged;
    std::vector<double> trace;
};

//! Minimum number of points accepted by maxlik_reconstruct
inline constexpr std::size_t min_tomography_points = 50;

//! Floor applied to Tr(rho Pi) before division and logarithms
inline constexpr double probability_floor = 1e-300;

/*!
 * Iterative R rho R likelihood maximization over the Fock space truncated
 * at `cutoff`.
 *
 * Starting from the maximally mixed state, each step maps
 * rho -> N[R rho R] with R = (1/N) sum_k Pi_k / Tr(rho Pi_k), Pi_k the
 * projector on the quadrature eigenstate |x_k, theta_k>. When a plain step
 * would lower the likelihood, the diluted operator (I + eps R)/(1 + eps) is
 * used with eps halved until the likelihood does not decrease, so the
 * likelihood trace is monotone. Iteration stops when the largest element
 * change falls below `tol` or after `max_iter` steps.
 */
ReconstructionResult maxlik_reconstruct(std::span<PhasePoint const> points,
                                        MaxLikOptions const& options = {});

//! Mean over points of ln Tr(rho Pi_k) (floored)
double log_likelihood(DensityMatrix const& rho,
                      std::span<PhasePoint const> points);

//---------------------------------------------------------------------------//
// Qubit model fit
//---------------------------------------------------------------------------//
struct QubitFit
{
    double y2 = 0;
    double efficiency = 0;
    double coherence_phase = 0;
    //! rho_11 below the fit floor: pure vacuum, E undetermined (reported 0)
    bool degenerate = false;
    //! population above n = 1 exceeds 0.05
    bool model_mismatch = false;
    //! E exceeded 1 by more than 1e-6 and was clamped
    bool clamped = false;
};

inline constexpr double fit_floor = 1e-4;
inline constexpr double leakage_limit = 0.05;

/*!
 * Invert rho = E|psi><psi| + (1 - E)|0><0| with psi = x|0> + y|1>:
 * E = rho_11 + |rho_01|^2 / rho_11, |y|^2 = rho_11 / E,
 * coherence phase = arg rho_01.
 */
QubitFit fit_qubit_model(DensityMatrix const& rho);

//---------------------------------------------------------------------------//
// Per-bin reconstruction
//---------------------------------------------------------------------------//
struct QubitEstimate
{
    double q_center;
    std::size_t n_samples;
    double y2;
    double coherence_phase;
    double efficiency;
    double relative_rate;
};

struct BinReconstruction
{
    Bin bin;
    std::size_t n_samples = 0;
    double relative_rate = 0;
    //! Empty for bins below the sample threshold
    std::optional<ReconstructionResult> result;
    QubitFit fit;

    bool skipped() const { return !result.has_value(); }
    QubitEstimate estimate() const;
};

/*!
 * Reconstruct every bin holding at least `min_samples` points. Bins are
 * independent and processed by `workers` threads (0 = hardware
 * concurrency); results are ordered by bin.
 */
std::vector<BinReconstruction>
reconstruct_bins(Postselection const& selection, MaxLikOptions const& options,
                 std::size_t min_samples = 500, unsigned workers = 0);

//---------------------------------------------------------------------------//
}  // namespace rsp

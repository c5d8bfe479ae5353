//---------------------------------------------------------------------------//
//! \file rsp/rng.hpp
//! Reproducible random substreams keyed by (seed, index).
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace rsp
{
//---------------------------------------------------------------------------//
/*!
 * xoshiro256** seeded through SplitMix64.
 *
 * Each simulated event draws from its own stream, derived by hashing
 * (seed, index), so a dataset is identical for any number of workers. The
 * uniform and normal variates are computed here rather than with the
 * standard distributions, whose algorithms are implementation-defined.
 */
class Rng
{
  public:
    using result_type = std::uint64_t;

    static constexpr std::string_view generator_name
        = "xoshiro256starstar/splitmix64-substream";

    explicit Rng(std::uint64_t seed);

    //! Independent stream for event `index` of a run with `seed`
    static Rng substream(std::uint64_t seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    //! Uniform in [0, 1) with 53 random bits
    double uniform();

    //! Standard normal (Box-Muller; the second variate is cached)
    double normal();

  private:
    std::array<std::uint64_t, 4> s_{};
    double cached_normal_ = 0;
    bool has_cached_ = false;
};

//! SplitMix64 finalizer
std::uint64_t mix64(std::uint64_t x);

//---------------------------------------------------------------------------//
}  // namespace rsp

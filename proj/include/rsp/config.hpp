//---------------------------------------------------------------------------//
//! \file rsp/config.hpp
//! Run configuration shared by every pipeline stage.
//!
//! The file format is flat `key=value` text; keys are the long CLI flag
//! names without the leading dashes, `#` starts a comment line.
//---------------------------------------------------------------------------//
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsp/homodyne_sim.hpp"
#include "rsp/tomography.hpp"

namespace rsp
{
//! Invalid command line or configuration
class UsageError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig
{
    SimConfig sim;
    BinSpec bins;
    int tomography_cutoff = 5;
    int max_iter = 2000;
    double tol = 1e-9;
    std::size_t min_samples = 500;
    std::filesystem::path out_dir = "rsp-out";

    //! Conditional quadratures whose bins get a Wigner export
    std::vector<double> q_list = {0.35, 0.71};
    //! Prediction curves: transmissions and Q grid [-q_max, q_max]
    std::vector<double> predict_alpha2 = {0.5, 0.08};
    double predict_q_max = 3.0;
    double predict_q_step = 0.01;

    //! Throws UsageError
    void validate() const;

    MaxLikOptions maxlik_options() const;

    bool operator==(RunConfig const&) const;
};

//! Apply one `key=value` setting (key without dashes); throws UsageError
void apply_setting(RunConfig& config, std::string const& key,
                   std::string const& value);

RunConfig parse_config(std::string const& text);
RunConfig load_config(std::filesystem::path const& path);

//! Every key, one per line, in a fixed order; parse_config inverts it
std::string serialize_config(RunConfig const& config);

//! Names of all recognized keys
std::vector<std::string> const& config_keys();

std::string format_sweep(PhaseSweep const& sweep);
PhaseSweep parse_sweep(std::string const& text);

//---------------------------------------------------------------------------//
}  // namespace rsp

//---------------------------------------------------------------------------//
//! \file rsp/dataset.hpp
//! CSV interchange format for homodyne records.
//!
//! \code
//! # alpha2=0.5
//! # eta=0.55
//! # seed=1
//! # generator=xoshiro256starstar/splitmix64-substream
//! # n=300000
//! theta_rel,x_a,x_b
//! 0,0.123456789,-0.234567891
//! \endcode
//!
//! Values are printed with 9 significant digits. Further `# key=value`
//! comment lines are allowed and preserved as metadata.
//---------------------------------------------------------------------------//
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsp/homodyne_sim.hpp"

namespace rsp
{
//! Malformed or missing input data
class DataError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Dataset
{
    //! Ordered metadata from the comment header
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<QuadratureSample> samples;

    //! Metadata value or empty string
    std::string meta(std::string const& key) const;
};

//! Dataset with the standard provenance header for a simulation run
Dataset make_dataset(SimConfig const& config,
                     std::vector<QuadratureSample> samples);

void write_dataset(std::ostream& os, Dataset const& data);
std::string format_dataset(Dataset const& data);

//! Throws DataError with the offending line number on malformed rows
Dataset read_dataset(std::istream& is);
Dataset read_dataset(std::filesystem::path const& path);

//! Write to `path` via a temporary file in the same directory and rename
void write_file_atomic(std::filesystem::path const& path,
                       std::string const& contents);

//---------------------------------------------------------------------------//
}  // namespace rsp

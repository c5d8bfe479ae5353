//---------------------------------------------------------------------------//
//! \file rsp/commands.hpp
//! Pipeline stages behind the `rsp` command line tool.
//!
//! Every stage reads its inputs from files in the output directory (or an
//! explicit path) and writes its outputs atomically, so stages can be re-run
//! independently.
//---------------------------------------------------------------------------//
#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rsp/config.hpp"

namespace rsp
{
//! Process exit codes
enum class ExitCode : int
{
    success = 0,
    usage = 1,
    data = 2,
    numerical = 3,
};

//! Map the active exception to an exit code (call inside a catch block)
ExitCode classify_current_exception();

//! Standard file names inside the output directory
namespace files
{
inline constexpr char const* dataset = "dataset.csv";
inline constexpr char const* reconstruction = "reconstruction.json";
inline constexpr char const* predictions = "predictions.csv";
inline constexpr char const* report = "report.json";
inline constexpr char const* scatter = "fig2_scatter.csv";
inline constexpr char const* conditional = "fig2_conditional_histogram.csv";
}  // namespace files

//! Bins with at least this many samples count as well populated
inline constexpr std::size_t well_populated_samples = 2000;

//! Simulate and write the dataset; returns its path
std::filesystem::path cmd_simulate(RunConfig const& config);

/*!
 * Postselect and reconstruct every bin of a dataset.
 *
 * alpha2 and eta are taken from the dataset header when present. Writes
 * reconstruction.json to the output directory and returns its content.
 */
nlohmann::json cmd_reconstruct(std::filesystem::path const& dataset,
                               RunConfig const& config);

//! Write the (alpha2, Q, y2, E, R) prediction table; returns its path
std::filesystem::path cmd_predict(RunConfig const& config);

/*!
 * Compare reconstruction results with the model and export plot data:
 * per-bin residuals and purification flags, Wigner grids for the bins
 * nearest to each q in q-list, and the fixed-phase scatter subsample and
 * conditional histogram. Returns the report written to report.json.
 */
nlohmann::json cmd_analyze(RunConfig const& config);

//! simulate -> reconstruct -> predict -> analyze
nlohmann::json cmd_pipeline(RunConfig const& config);

//! Per-bin record as stored in reconstruction.json
nlohmann::json bin_to_json(BinReconstruction const& bin);

//! Density matrix from its nested [re, im] array form
DensityMatrix density_from_json(nlohmann::json const& rho);

//---------------------------------------------------------------------------//
}  // namespace rsp

//---------------------------------------------------------------------------//
//! \file config.cpp
//---------------------------------------------------------------------------//
#include "rsp/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rsp
{
namespace
{
std::string trim(std::string const& s)
{
    auto const first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
    {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string exact(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double to_double(std::string const& key, std::string const& text)
{
    auto const t = trim(text);
    double v = 0;
    auto const [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()
        || !std::isfinite(v))
    {
        throw UsageError("invalid number for " + key + ": '" + text + "'");
    }
    return v;
}

template<class Int>
Int to_integer(std::string const& key, std::string const& text)
{
    auto const t = trim(text);
    Int v = 0;
    auto const [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    {
        throw UsageError("invalid integer for " + key + ": '" + text + "'");
    }
    return v;
}

bool to_bool(std::string const& key, std::string const& text)
{
    auto const t = trim(text);
    if (t == "true" || t == "1" || t == "yes")
    {
        return true;
    }
    if (t == "false" || t == "0" || t == "no")
    {
        return false;
    }
    throw UsageError("invalid boolean for " + key + ": '" + text + "'");
}

std::vector<double> to_list(std::string const& key, std::string const& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (!trim(item).empty())
        {
            out.push_back(to_double(key, item));
        }
    }
    return out;
}

std::string format_list(std::vector<double> const& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        out += (i ? "," : "") + exact(values[i]);
    }
    return out;
}

}  // namespace

//---------------------------------------------------------------------------//
std::vector<std::string> const& config_keys()
{
    static std::vector<std::string> const keys = {
        "alpha2",         "eta",           "samples",
        "seed",           "sweep",         "sim-fock-cutoff",
        "threads",        "bin-width",     "bin-half-range",
        "wide-tail-bins", "fock-cutoff",   "max-iter",
        "tol",            "min-samples",   "out-dir",
        "q-list",         "predict-alpha2", "predict-q-max",
        "predict-q-step",
    };
    return keys;
}

std::string format_sweep(PhaseSweep const& sweep)
{
    switch (sweep.kind)
    {
        case PhaseSweep::Kind::linear:
            return "linear";
        case PhaseSweep::Kind::fixed:
            return "fixed:" + exact(sweep.value);
        case PhaseSweep::Kind::stepped:
            return "stepped:" + std::to_string(sweep.steps);
    }
    return "linear";
}

PhaseSweep parse_sweep(std::string const& text)
{
    auto const t = trim(text);
    PhaseSweep sweep;
    if (t == "linear")
    {
        return sweep;
    }
    auto const colon = t.find(':');
    auto const head = t.substr(0, colon);
    if (colon != std::string::npos && head == "fixed")
    {
        sweep.kind = PhaseSweep::Kind::fixed;
        sweep.value = to_double("sweep", t.substr(colon + 1));
        return sweep;
    }
    if (colon != std::string::npos && head == "stepped")
    {
        sweep.kind = PhaseSweep::Kind::stepped;
        sweep.steps = to_integer<int>("sweep", t.substr(colon + 1));
        return sweep;
    }
    throw UsageError("sweep must be 'linear', 'fixed:<phase>' or "
                     "'stepped:<count>', got '"
                     + text + "'");
}

void apply_setting(RunConfig& c, std::string const& raw_key,
                   std::string const& value)
{
    auto const key = trim(raw_key);
    if (key == "alpha2")
        c.sim.alpha2 = to_double(key, value);
    else if (key == "eta")
        c.sim.eta = to_double(key, value);
    else if (key == "samples")
        c.sim.n_samples = to_integer<std::uint64_t>(key, value);
    else if (key == "seed")
        c.sim.seed = to_integer<std::uint64_t>(key, value);
    else if (key == "sweep")
        c.sim.sweep = parse_sweep(value);
    else if (key == "sim-fock-cutoff")
        c.sim.fock_cutoff = to_integer<int>(key, value);
    else if (key == "threads")
        c.sim.workers = to_integer<unsigned>(key, value);
    else if (key == "bin-width")
        c.bins.width = to_double(key, value);
    else if (key == "bin-half-range")
        c.bins.half_range = to_double(key, value);
    else if (key == "wide-tail-bins")
        c.bins.wide_tail_bins = to_bool(key, value);
    else if (key == "fock-cutoff")
        c.tomography_cutoff = to_integer<int>(key, value);
    else if (key == "max-iter")
        c.max_iter = to_integer<int>(key, value);
    else if (key == "tol")
        c.tol = to_double(key, value);
    else if (key == "min-samples")
        c.min_samples = to_integer<std::size_t>(key, value);
    else if (key == "out-dir")
        c.out_dir = trim(value);
    else if (key == "q-list")
        c.q_list = to_list(key, value);
    else if (key == "predict-alpha2")
        c.predict_alpha2 = to_list(key, value);
    else if (key == "predict-q-max")
        c.predict_q_max = to_double(key, value);
    else if (key == "predict-q-step")
        c.predict_q_step = to_double(key, value);
    else
        throw UsageError("unknown configuration key '" + key + "'");
}

RunConfig parse_config(std::string const& text)
{
    RunConfig config;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line))
    {
        ++lineno;
        auto const t = trim(line);
        if (t.empty() || t.front() == '#')
        {
            continue;
        }
        auto const eq = t.find('=');
        if (eq == std::string::npos)
        {
            throw UsageError("config line " + std::to_string(lineno)
                             + ": expected key=value");
        }
        apply_setting(config, t.substr(0, eq), t.substr(eq + 1));
    }
    return config;
}

RunConfig load_config(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw UsageError("cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(RunConfig const& c)
{
    std::ostringstream os;
    os << "alpha2=" << exact(c.sim.alpha2) << '\n'
       << "eta=" << exact(c.sim.eta) << '\n'
       << "samples=" << c.sim.n_samples << '\n'
       << "seed=" << c.sim.seed << '\n'
       << "sweep=" << format_sweep(c.sim.sweep) << '\n'
       << "sim-fock-cutoff=" << c.sim.fock_cutoff << '\n'
       << "threads=" << c.sim.workers << '\n'
       << "bin-width=" << exact(c.bins.width) << '\n'
       << "bin-half-range=" << exact(c.bins.half_range) << '\n'
       << "wide-tail-bins=" << (c.bins.wide_tail_bins ? "true" : "false")
       << '\n'
       << "fock-cutoff=" << c.tomography_cutoff << '\n'
       << "max-iter=" << c.max_iter << '\n'
       << "tol=" << exact(c.tol) << '\n'
       << "min-samples=" << c.min_samples << '\n'
       << "out-dir=" << c.out_dir.string() << '\n'
       << "q-list=" << format_list(c.q_list) << '\n'
       << "predict-alpha2=" << format_list(c.predict_alpha2) << '\n'
       << "predict-q-max=" << exact(c.predict_q_max) << '\n'
       << "predict-q-step=" << exact(c.predict_q_step) << '\n';
    return os.str();
}

void RunConfig::validate() const
{
    try
    {
        sim.validate();
        bins.validate();
    }
    catch (DomainError const& e)
    {
        throw UsageError(e.what());
    }
    if (tomography_cutoff < 2 || tomography_cutoff > max_supported_photons)
    {
        throw UsageError("fock-cutoff must lie in [2, 30]");
    }
    if (max_iter < 1 || !(tol > 0))
    {
        throw UsageError("max-iter must be >= 1 and tol > 0");
    }
    if (min_samples < min_tomography_points)
    {
        throw UsageError("min-samples must be at least "
                         + std::to_string(min_tomography_points));
    }
    if (!(predict_q_max > 0) || !(predict_q_step > 0))
    {
        throw UsageError("prediction grid needs positive q-max and q-step");
    }
    for (double a : predict_alpha2)
    {
        if (!(a > 0 && a < 1))
        {
            throw UsageError("predict-alpha2 values must lie in (0, 1)");
        }
    }
    if (out_dir.empty())
    {
        throw UsageError("out-dir must not be empty");
    }
}

MaxLikOptions RunConfig::maxlik_options() const
{
    MaxLikOptions opts;
    opts.cutoff = tomography_cutoff;
    opts.max_iter = max_iter;
    opts.tol = tol;
    return opts;
}

bool RunConfig::operator==(RunConfig const& o) const
{
    auto const sweep_eq = [](PhaseSweep const& a, PhaseSweep const& b) {
        return a.kind == b.kind && a.value == b.value && a.steps == b.steps;
    };
    return sim.alpha2 == o.sim.alpha2 && sim.eta == o.sim.eta
           && sim.n_samples == o.sim.n_samples && sim.seed == o.sim.seed
           && sweep_eq(sim.sweep, o.sim.sweep)
           && sim.fock_cutoff == o.sim.fock_cutoff
           && sim.workers == o.sim.workers && bins.width == o.bins.width
           && bins.half_range == o.bins.half_range
           && bins.wide_tail_bins == o.bins.wide_tail_bins
           && tomography_cutoff == o.tomography_cutoff
           && max_iter == o.max_iter && tol == o.tol
           && min_samples == o.min_samples && out_dir == o.out_dir
           && q_list == o.q_list && predict_alpha2 == o.predict_alpha2
           && predict_q_max == o.predict_q_max
           && predict_q_step == o.predict_q_step;
}

//---------------------------------------------------------------------------//
}  // namespace rsp

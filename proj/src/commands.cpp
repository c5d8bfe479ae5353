//---------------------------------------------------------------------------//
//! \file commands.cpp
//---------------------------------------------------------------------------//
#include "rsp/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rsp/dataset.hpp"
#include "rsp/model.hpp"
#include "rsp/wigner.hpp"

namespace rsp
{
namespace
{
using nlohmann::json;

constexpr double fig2_q = 0.71;
constexpr double fig2_phase_window = std::numbers::pi / 36;
constexpr std::size_t fig2_max_points = 61'440;

std::string num(double v, char const* fmt = "%.9g")
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

void ensure_dir(std::filesystem::path const& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw DataError("cannot create output directory " + dir.string()
                        + ": " + ec.message());
    }
}

double meta_or(Dataset const& data, char const* key, double fallback)
{
    auto const text = data.meta(key);
    if (text.empty())
    {
        return fallback;
    }
    try
    {
        return std::stod(text);
    }
    catch (std::exception const&)
    {
        throw DataError(std::string("invalid '") + key
                        + "' in dataset header: " + text);
    }
}

json read_json(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw DataError("missing input " + path.string());
    }
    try
    {
        return json::parse(in);
    }
    catch (json::exception const& e)
    {
        throw DataError("cannot parse " + path.string() + ": " + e.what());
    }
}

double angular_distance(double a, double b)
{
    double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
    return std::min(d, 2 * std::numbers::pi - d);
}

// Probability that (x_a, x_b) falls in [a0,a1) x [b0,b1) at phase theta,
// by Gauss-Legendre product quadrature on each cell
double cell_probability(double a0, double a1, double b0, double b1,
                        double theta, double alpha2, double eta)
{
    static constexpr double nodes[] = {-0.906179845938664, -0.538469310105683,
                                       0.0, 0.538469310105683,
                                       0.906179845938664};
    static constexpr double weights[] = {0.236926885056189, 0.478628670499366,
                                         0.568888888888889, 0.478628670499366,
                                         0.236926885056189};
    double sum = 0;
    for (int i = 0; i < 5; ++i)
    {
        double const xa = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * nodes[i];
        for (int j = 0; j < 5; ++j)
        {
            double const xb = 0.5 * (b0 + b1) + 0.5 * (b1 - b0) * nodes[j];
            sum += weights[i] * weights[j]
                   * joint_pdf(xa, xb, theta, alpha2, eta);
        }
    }
    return sum * 0.25 * (a1 - a0) * (b1 - b0);
}

}  // namespace

//---------------------------------------------------------------------------//
ExitCode classify_current_exception()
{
    try
    {
        throw;
    }
    catch (UsageError const&)
    {
        return ExitCode::usage;
    }
    catch (DomainError const&)
    {
        return ExitCode::usage;
    }
    catch (DataError const&)
    {
        return ExitCode::data;
    }
    catch (NumericalError const&)
    {
        return ExitCode::numerical;
    }
    catch (std::filesystem::filesystem_error const&)
    {
        return ExitCode::data;
    }
    catch (...)
    {
        return ExitCode::numerical;
    }
}

//---------------------------------------------------------------------------//
std::filesystem::path cmd_simulate(RunConfig const& config)
{
    config.validate();
    ensure_dir(config.out_dir);
    auto data = make_dataset(config.sim, generate_dataset(config.sim));
    data.metadata.emplace_back("sweep", format_sweep(config.sim.sweep));
    auto const path = config.out_dir / files::dataset;
    write_file_atomic(path, format_dataset(data));
    return path;
}

//---------------------------------------------------------------------------//
json bin_to_json(BinReconstruction const& b)
{
    json j;
    j["q_center"] = b.bin.center();
    j["lo"] = b.bin.lo;
    j["hi"] = b.bin.hi;
    j["n"] = b.n_samples;
    j["relative_rate"] = b.relative_rate;
    if (b.skipped())
    {
        return j;
    }
    auto const& r = *b.result;
    j["y2"] = b.fit.y2;
    j["E"] = b.fit.efficiency;
    j["coherence_phase"] = b.fit.coherence_phase;
    j["log_likelihood"] = r.log_likelihood;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["flags"] = {{"degenerate", b.fit.degenerate},
                  {"model_mismatch", b.fit.model_mismatch},
                  {"clamped", b.fit.clamped}};
    json rho = json::array();
    for (int m = 0; m <= r.rho.cutoff(); ++m)
    {
        json row = json::array();
        for (int n = 0; n <= r.rho.cutoff(); ++n)
        {
            row.push_back({r.rho(m, n).real(), r.rho(m, n).imag()});
        }
        rho.push_back(std::move(row));
    }
    j["rho"] = std::move(rho);
    return j;
}

DensityMatrix density_from_json(json const& rho)
{
    if (!rho.is_array() || rho.empty())
    {
        throw DataError("rho must be a non-empty nested array");
    }
    auto const dim = static_cast<Eigen::Index>(rho.size());
    CMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
    {
        auto const& row = rho[r];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
        {
            throw DataError("rho must be square");
        }
        for (Eigen::Index c = 0; c < dim; ++c)
        {
            auto const& z = row[c];
            if (!z.is_array() || z.size() != 2)
            {
                throw DataError("rho elements must be [re, im] pairs");
            }
            m(r, c) = {z[0].get<double>(), z[1].get<double>()};
        }
    }
    try
    {
        return DensityMatrix(m);
    }
    catch (DomainError const& e)
    {
        throw DataError(std::string("stored rho is not physical: ") + e.what());
    }
}

json cmd_reconstruct(std::filesystem::path const& dataset_path,
                     RunConfig const& config)
{
    config.validate();
    auto const data = read_dataset(dataset_path);
    if (data.samples.empty())
    {
        throw DataError("dataset " + dataset_path.string()
                        + " contains no samples");
    }
    double const alpha2 = meta_or(data, "alpha2", config.sim.alpha2);
    double const eta = meta_or(data, "eta", config.sim.eta);

    auto const selection = postselect(data.samples, config.bins);
    auto const bins = reconstruct_bins(selection, config.maxlik_options(),
                                       config.min_samples, config.sim.workers);

    json out;
    out["alpha2"] = alpha2;
    out["eta"] = eta;
    out["dataset"] = dataset_path.filename().string();
    out["n_total"] = data.samples.size();
    out["in_range"] = selection.in_range;
    out["discarded"] = selection.discarded;
    out["settings"] = {{"bin_width", config.bins.width},
                       {"bin_half_range", config.bins.half_range},
                       {"wide_tail_bins", config.bins.wide_tail_bins},
                       {"fock_cutoff", config.tomography_cutoff},
                       {"max_iter", config.max_iter},
                       {"tol", config.tol},
                       {"min_samples", config.min_samples}};
    out["bins"] = json::array();
    out["skipped"] = json::array();
    for (auto const& b : bins)
    {
        (b.skipped() ? out["skipped"] : out["bins"]).push_back(bin_to_json(b));
    }

    ensure_dir(config.out_dir);
    write_file_atomic(config.out_dir / files::reconstruction,
                      out.dump(2) + "\n");
    return out;
}

//---------------------------------------------------------------------------//
std::filesystem::path cmd_predict(RunConfig const& config)
{
    config.validate();
    std::ostringstream os;
    os << "alpha2,Q,y2,E,R\n";
    int const steps = static_cast<int>(
        std::round(2 * config.predict_q_max / config.predict_q_step));
    for (double alpha2 : config.predict_alpha2)
    {
        for (int i = 0; i <= steps; ++i)
        {
            ProtocolParams const params{
                alpha2, config.sim.eta, 0,
                -config.predict_q_max + i * config.predict_q_step};
            try
            {
                params.validate();
            }
            catch (DomainError const& e)
            {
                throw UsageError(e.what());
            }
            os << num(alpha2) << ',' << num(params.q) << ','
               << num(single_photon_fraction(params)) << ','
               << num(preparation_efficiency(params)) << ','
               << num(success_rate(params)) << '\n';
        }
    }
    ensure_dir(config.out_dir);
    auto const path = config.out_dir / files::predictions;
    write_file_atomic(path, os.str());
    return path;
}

//---------------------------------------------------------------------------//
json cmd_analyze(RunConfig const& config)
{
    config.validate();
    auto const recon = read_json(config.out_dir / files::reconstruction);
    double alpha2 = 0;
    double eta = 0;
    try
    {
        alpha2 = recon.at("alpha2").get<double>();
        eta = recon.at("eta").get<double>();
        if (!recon.at("bins").is_array())
        {
            throw DataError("reconstruction bins must be an array");
        }
    }
    catch (json::exception const& e)
    {
        throw DataError(std::string("malformed reconstruction results: ")
                        + e.what());
    }

    auto const edges = config.bins.edges();
    double const range_prob = success_probability(alpha2, eta, edges.front(),
                                                   edges.back());

    json report;
    report["schema_version"] = 1;
    report["alpha2"] = alpha2;
    report["eta"] = eta;
    report["bins"] = json::array();

    struct Reconstructed
    {
        double q;
        DensityMatrix rho;
    };
    std::vector<Reconstructed> reconstructed;

    for (auto const& b : recon["bins"])
    {
        double q = 0;
        double lo = 0;
        double hi = 0;
        std::size_t n = 0;
        double y2 = 0;
        double e = 0;
        double rate = 0;
        try
        {
            q = b.at("q_center").get<double>();
            lo = b.at("lo").get<double>();
            hi = b.at("hi").get<double>();
            n = b.at("n").get<std::size_t>();
            y2 = b.at("y2").get<double>();
            e = b.at("E").get<double>();
            rate = b.at("relative_rate").get<double>();
        }
        catch (json::exception const& ex)
        {
            throw DataError(std::string("malformed bin record: ") + ex.what());
        }
        ProtocolParams const params{alpha2, eta, 0, q};
        double const pred_y2 = single_photon_fraction(params);
        double const pred_e = preparation_efficiency(params);
        double const pred_rate = success_probability(alpha2, eta, lo, hi)
                                 / range_prob;
        report["bins"].push_back({
            {"q_center", q},
            {"n", n},
            {"y2", y2},
            {"E", e},
            {"relative_rate", rate},
            {"predicted", {{"y2", pred_y2}, {"E", pred_e}, {"relative_rate", pred_rate}}},
            {"residual", {{"y2", y2 - pred_y2}, {"E", e - pred_e}, {"relative_rate", rate - pred_rate}}},
            {"purified", e > eta},
            {"well_populated", n >= well_populated_samples},
        });
        reconstructed.push_back({q, density_from_json(b.at("rho"))});
    }
    report["skipped"] = recon.value("skipped", json::array());

    // Wigner exports
    report["wigner"] = json::array();
    for (double q : config.q_list)
    {
        if (reconstructed.empty())
        {
            break;
        }
        auto const* best = &reconstructed.front();
        for (auto const& r : reconstructed)
        {
            if (std::abs(r.q - q) < std::abs(best->q - q))
            {
                best = &r;
            }
        }
        auto const grid = wigner_from_dm(best->rho);
        std::string const stem = "wigner_q" + num(best->q, "%.3f");
        write_file_atomic(config.out_dir / (stem + ".csv"),
                          format_wigner_csv(grid));
        write_file_atomic(config.out_dir / (stem + ".json"),
                          format_wigner_json(grid));
        double const w0 = wigner_point(best->rho, 0, 0);
        ProtocolParams const params{alpha2, eta, 0, best->q};
        double const model_p11 = preparation_efficiency(params)
                                 * single_photon_fraction(params);
        report["wigner"].push_back({
            {"q_requested", q},
            {"q_center", best->q},
            {"csv", stem + ".csv"},
            {"json", stem + ".json"},
            {"w_origin", w0},
            {"min_value", grid.min_value()},
            {"negative_at_origin", w0 < 0},
            {"model_negative_at_origin", model_p11 > 0.5},
        });
    }

    // Scatter near zero relative phase and conditional histogram
    auto const dataset_path = config.out_dir / files::dataset;
    if (std::filesystem::exists(dataset_path))
    {
        auto const data = read_dataset(dataset_path);
        std::vector<QuadratureSample> near_zero;
        for (auto const& s : data.samples)
        {
            if (angular_distance(s.theta_rel, 0) <= fig2_phase_window)
            {
                near_zero.push_back(s);
                if (near_zero.size() == fig2_max_points)
                {
                    break;
                }
            }
        }
        std::ostringstream scatter;
        scatter << "x_a,x_b\n";
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        for (auto const& s : near_zero)
        {
            scatter << num(s.x_a) << ',' << num(s.x_b) << '\n';
            sa += s.x_a;
            sb += s.x_b;
            saa += s.x_a * s.x_a;
            sbb += s.x_b * s.x_b;
            sab += s.x_a * s.x_b;
        }
        write_file_atomic(config.out_dir / files::scatter, scatter.str());

        double const cnt = static_cast<double>(near_zero.size());
        double corr = 0;
        if (cnt > 1)
        {
            double const cov = sab / cnt - (sa / cnt) * (sb / cnt);
            double const va = saa / cnt - (sa / cnt) * (sa / cnt);
            double const vb = sbb / cnt - (sb / cnt) * (sb / cnt);
            corr = cov / std::sqrt(va * vb);
        }

        auto const window = find_bin(edges, fig2_q);
        double const a0 = edges[*window];
        double const a1 = edges[*window + 1];
        constexpr double h_lo = -2.0;
        constexpr double h_width = 0.1;
        constexpr int h_bins = 40;
        std::vector<std::size_t> counts(h_bins, 0);
        std::size_t in_window = 0;
        for (auto const& s : near_zero)
        {
            if (s.x_a >= a0 && s.x_a < a1)
            {
                ++in_window;
                int const k = static_cast<int>(
                    std::floor((s.x_b - h_lo) / h_width));
                if (k >= 0 && k < h_bins)
                {
                    ++counts[k];
                }
            }
        }
        double const window_prob = success_probability(alpha2, eta, a0, a1);
        std::ostringstream hist;
        hist << "x_lo,x_hi,count,density,model_density\n";
        for (int k = 0; k < h_bins; ++k)
        {
            double const lo = h_lo + k * h_width;
            double const hi = lo + h_width;
            double const density
                = in_window ? counts[k] / (static_cast<double>(in_window) * h_width)
                            : 0.0;
            double const model = cell_probability(a0, a1, lo, hi, 0, alpha2, eta)
                                 / (window_prob * h_width);
            hist << num(lo) << ',' << num(hi) << ',' << counts[k] << ','
                 << num(density) << ',' << num(model) << '\n';
        }
        write_file_atomic(config.out_dir / files::conditional, hist.str());

        report["fig2"] = {
            {"scatter_file", files::scatter},
            {"scatter_points", near_zero.size()},
            {"phase_window", fig2_phase_window},
            {"pearson_correlation", corr},
            {"conditional_histogram_file", files::conditional},
            {"conditional_q", fig2_q},
            {"conditional_window", {a0, a1}},
            {"conditional_count", in_window},
        };
    }

    write_file_atomic(config.out_dir / files::report, report.dump(2) + "\n");
    return report;
}

json cmd_pipeline(RunConfig const& config)
{
    auto const dataset = cmd_simulate(config);
    cmd_reconstruct(dataset, config);
    cmd_predict(config);
    return cmd_analyze(config);
}

//---------------------------------------------------------------------------//
}  // namespace rsp

//---------------------------------------------------------------------------//
//! \file acceptance.cpp
//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//! Exits 0 once every criterion has been evaluated; with --strict, any
//! failed criterion gives exit code 1.
//---------------------------------------------------------------------------//
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rsp/homodyne_sim.hpp"
#include "rsp/model.hpp"
#include "rsp/tomography.hpp"
#include "rsp/wigner.hpp"

using namespace rsp;

namespace
{
constexpr double pi = std::numbers::pi;

struct Outcome
{
    bool pass = true;
    std::string detail;

    void require(bool ok, std::string const& what)
    {
        if (!ok)
        {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(char const* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

int failures = 0;

void report(int id, char const* title, Outcome const& o,
            std::string const& summary)
{
    std::printf("criterion %d %s: %s | %s%s%s\n", id, o.pass ? "PASS" : "FAIL",
                title, summary.c_str(), o.detail.empty() ? "" : " | ",
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
}

//! Counts per bin plus a final overflow cell, with model probabilities
double occupancy_pvalue(std::vector<QuadratureSample> const& data,
                        double alpha2, double eta)
{
    auto const sel = postselect(data, BinSpec{});
    std::vector<double> observed, probs;
    double inside = 0;
    for (auto const& b : sel.bins)
    {
        observed.push_back(static_cast<double>(b.points.size()));
        probs.push_back(success_probability(alpha2, eta, b.bin.lo, b.bin.hi));
        inside += probs.back();
    }
    observed.push_back(static_cast<double>(sel.discarded));
    probs.push_back(1 - inside);
    return oracle::chi_square(observed, probs).pvalue;
}

std::vector<PhasePoint> homodyne_record(DensityMatrix const& rho, int n,
                                        std::uint64_t seed)
{
    QuadratureSampler const sampler(rho);
    std::vector<PhasePoint> points;
    points.reserve(n);
    for (int i = 0; i < n; ++i)
    {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        double const theta = 2 * pi * rng.uniform();
        points.push_back({theta, sampler.sample(rng, theta)});
    }
    return points;
}

// Bins entering criteria 1 and 2
bool qualifies(BinReconstruction const& b)
{
    return !b.skipped() && b.n_samples >= 2000;
}

}  // namespace

int main(int argc, char** argv)
{
    bool const strict = argc > 1 && std::string(argv[1]) == "--strict";
    using clock = std::chrono::steady_clock;
    double const eta = 0.55;

    //-----------------------------------------------------------------------//
    // Main run shared by criteria 1-3
    auto const t0 = clock::now();
    SimConfig sim;
    sim.alpha2 = 0.5;
    sim.eta = eta;
    sim.n_samples = 300'000;
    sim.seed = 1;
    auto const data = generate_dataset(sim);
    auto const selection = postselect(data, BinSpec{});
    auto const bins = reconstruct_bins(selection, MaxLikOptions{}, 500);
    double const seconds
        = std::chrono::duration<double>(clock::now() - t0).count();

    // 1. Qubit content
    {
        Outcome o;
        double worst = 0;
        int checked = 0;
        for (auto const& b : bins)
        {
            double const q = b.bin.center();
            if (!qualifies(b) || std::abs(q) > 1.1)
            {
                continue;
            }
            ++checked;
            double const pred = single_photon_fraction({0.5, eta, 0, q});
            double const dev = b.fit.y2 - pred;
            worst = std::max(worst, std::abs(dev));
            o.require(std::abs(dev) <= 0.05,
                      fmt("Q=%.3f y2=%.3f model=%.3f", q, b.fit.y2, pred));
            if (std::abs(std::abs(q) - 0.5) < 0.0355)
            {
                o.require(std::abs(b.fit.y2 - 0.5) <= 0.04,
                          fmt("Q=%.3f y2=%.3f outside 0.50+-0.04", q, b.fit.y2));
            }
        }
        o.require(checked > 0, "no qualifying bins");
        o.require(seconds <= 300, fmt("runtime %.0f s", seconds));
        report(1, "qubit content vs beta^2/(beta^2+4 alpha^2 Q^2)", o,
               fmt("%d bins, max |dev| %.3f (tol 0.05), runtime %.1f s", checked,
                   worst, seconds));
    }

    // 2. Purification threshold
    {
        Outcome o;
        int checked = 0;
        for (auto const& b : bins)
        {
            double const q = std::abs(b.bin.center());
            double const e = b.fit.efficiency;
            if (!qualifies(b))
            {
                continue;
            }
            if (q >= 0.55)
            {
                ++checked;
                o.require(e > eta, fmt("Q=%.3f E=%.3f not above eta", q, e));
            }
            else if (q <= 0.45)
            {
                ++checked;
                o.require(e < eta, fmt("Q=%.3f E=%.3f not below eta", q, e));
            }
        }
        int mismatches = 0;
        for (int i = 0; i < 10; ++i)
        {
            for (int j = 0; j < 10; ++j)
            {
                for (int k = 0; k < 10; ++k)
                {
                    double const a2 = 0.05 + 0.1 * i;
                    double const et = 0.05 + 0.1 * j;
                    double const q = -1.7 + 0.37 * k;
                    double const e = preparation_efficiency({a2, et, 0, q});
                    int const lhs = (e > et) - (e < et);
                    int const rhs = (std::abs(q) > 0.5) - (std::abs(q) < 0.5);
                    mismatches += lhs != rhs;
                }
            }
        }
        o.require(mismatches == 0, fmt("%d grid mismatches", mismatches));
        report(2, "purification threshold sign(E - eta) = sign(|Q| - 1/2)", o,
               fmt("%d bins checked, analytic grid 1000 points, %d mismatches",
                   checked, mismatches));
    }

    // 3. Success-rate profile
    {
        Outcome o;
        SimConfig low = sim;
        low.alpha2 = 0.08;
        double const p_half = occupancy_pvalue(data, 0.5, eta);
        double const p_low = occupancy_pvalue(generate_dataset(low), 0.08, eta);
        o.require(p_half > 0.01, "alpha2=0.5 rejected");
        o.require(p_low > 0.01, "alpha2=0.08 rejected");
        report(3, "bin occupancy vs integrated success rate", o,
               fmt("chi2 p = %.3f (alpha2=0.5), %.3f (alpha2=0.08), level 0.01",
                   p_half, p_low));
    }

    // 4. Fixed-phase scatter statistics
    {
        Outcome o;
        SimConfig fig2 = sim;
        fig2.n_samples = 61'440;
        fig2.sweep = {PhaseSweep::Kind::fixed, 0, 1};
        auto const pairs = generate_dataset(fig2);
        double n = static_cast<double>(pairs.size());
        double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
        for (auto const& s : pairs)
        {
            sa += s.x_a;
            sb += s.x_b;
            saa += s.x_a * s.x_a;
            sbb += s.x_b * s.x_b;
            sab += s.x_a * s.x_b;
        }
        double const corr
            = (sab / n - sa * sb / (n * n))
              / std::sqrt((saa / n - sa * sa / (n * n))
                          * (sbb / n - sb * sb / (n * n)));
        auto moment = [&](auto f) {
            return oracle::simpson2d(
                [&](double a, double b) {
                    return f(a, b) * joint_pdf(a, b, 0.0, 0.5, eta);
                },
                -5, 5, 400);
        };
        double const model_corr
            = moment([](double a, double b) { return a * b; })
              / std::sqrt(moment([](double a, double) { return a * a; })
                          * moment([](double, double b) { return b * b; }));
        o.require(std::abs(std::abs(corr) - std::abs(model_corr)) <= 0.01,
                  "correlation off");

        // conditional x_b histogram in the bin holding x_a = 0.71
        auto const edges = BinSpec{}.edges();
        auto const k = *find_bin(edges, 0.71);
        double const a0 = edges[k], a1 = edges[k + 1];
        int const cells = 40;
        std::vector<double> observed(cells + 1, 0), probs(cells + 1, 0);
        for (auto const& s : pairs)
        {
            if (s.x_a >= a0 && s.x_a < a1)
            {
                int const c = static_cast<int>(std::floor((s.x_b + 2) / 0.1));
                (c >= 0 && c < cells ? observed[c] : observed.back()) += 1;
            }
        }
        double const window = success_probability(0.5, eta, a0, a1);
        double inside = 0;
        for (int c = 0; c < cells; ++c)
        {
            double const lo = -2 + 0.1 * c;
            probs[c] = oracle::simpson(
                           [&](double a) {
                               return oracle::simpson(
                                   [&](double b) {
                                       return joint_pdf(a, b, 0.0, 0.5, eta);
                                   },
                                   lo, lo + 0.1, 20);
                           },
                           a0, a1, 20)
                       / window;
            inside += probs[c];
        }
        probs.back() = std::max(0.0, 1 - inside);
        auto const chi = oracle::chi_square(observed, probs);
        o.require(chi.pvalue > 0.01, "conditional histogram rejected");
        report(4, "zero-phase correlation and conditional histogram", o,
               fmt("corr %.4f vs model %.4f (tol 0.01); %d conditional "
                   "samples, chi2 p = %.3f",
                   corr, model_corr, static_cast<int>(
                       std::accumulate(observed.begin(), observed.end(), 0.0)),
                   chi.pvalue));
    }

    // 5. Tomography engine
    {
        Outcome o;
        CMatrix m = CMatrix::Zero(2, 2);
        m(0, 0) = 0.45;
        m(1, 1) = 0.55;
        auto const points = homodyne_record(DensityMatrix(m), 30'000, 5);
        MaxLikOptions opts;
        opts.record_trace = true;
        double worst_trace = 0, worst_herm = 0, min_eig = 1;
        opts.on_iterate = [&](DensityMatrix const& rho) {
            auto const& e = rho.elements();
            worst_trace = std::max(worst_trace, std::abs(e.trace().real() - 1));
            worst_herm = std::max(worst_herm,
                                  (e - e.adjoint()).cwiseAbs().maxCoeff());
            min_eig = std::min(min_eig, rho.min_eigenvalue());
        };
        auto const r = maxlik_reconstruct(points, opts);
        double worst_drop = 0;
        for (std::size_t i = 1; i < r.trace.size(); ++i)
        {
            worst_drop = std::max(worst_drop, r.trace[i - 1] - r.trace[i]);
        }
        double const p11 = r.rho(1, 1).real();
        o.require(std::abs(p11 - 0.55) <= 0.02, "rho_11 off");
        o.require(worst_drop <= 1e-12, "likelihood decreased");
        o.require(worst_trace <= 1e-9 && worst_herm <= 1e-12 && min_eig >= -1e-9,
                  "unphysical iterate");
        o.require(r.rho.leakage() < 0.02, "leakage");
        report(5, "maximum likelihood on diag(0.45, 0.55)", o,
               fmt("rho_11 %.4f, %d iterations, max likelihood drop %.1e, "
                   "max |tr-1| %.1e, min eig %.1e, leakage %.4f",
                   p11, r.iterations, worst_drop, worst_trace, min_eig,
                   r.rho.leakage()));
    }

    // 6. Wigner layer
    {
        Outcome o;
        CMatrix m = CMatrix::Zero(2, 2);
        m(0, 0) = 0.45;
        m(1, 1) = 0.55;
        double const w_vac = wigner_point(DensityMatrix::fock(0, 1), 0, 0);
        double const w_one = wigner_point(DensityMatrix::fock(1, 1), 0, 0);
        double const w_mix = wigner_point(DensityMatrix(m), 0, 0);
        o.require(std::abs(w_vac - 2 / pi) <= 1e-9, "vacuum W(0,0)");
        o.require(std::abs(w_one + 2 / pi) <= 1e-9, "photon W(0,0)");
        o.require(std::abs(w_mix + 0.0637) <= 1e-4, "mixture W(0,0)");

        GridSpec const grid{Axis::span(-5, 5, 0.025), Axis::span(-5, 5, 0.025)};
        std::mt19937_64 gen(13);
        double worst = 0;
        for (int t = 0; t < 20; ++t)
        {
            auto const rho = oracle::random_density(5, gen);
            auto const w = wigner_from_dm(rho, grid);
            for (double th : {0.0, pi / 4, pi / 2})
            {
                auto const mg = marginal(w, th);
                for (std::size_t i = 0; i < mg.x.size(); ++i)
                {
                    worst = std::max(worst, std::abs(mg.pdf[i]
                                                     - quadrature_pdf(rho, th,
                                                                      mg.x[i])));
                }
            }
        }
        o.require(worst < 1e-3, "marginal deviation");

        // origin negativity of reconstructions from model-generated data;
        // cases within 0.03 of the boundary are not statistically decidable
        // at this sample size and are left out
        int agree = 0, cases = 0, excluded = 0;
        std::uint64_t seed = 600;
        for (double a2 : {0.08, 0.5})
        {
            for (double et : {0.55, 0.75, 0.95})
            {
                for (double q : {0.0, 0.35, 0.71})
                {
                    ProtocolParams const p{a2, et, 0, q};
                    double const p11 = preparation_efficiency(p)
                                       * single_photon_fraction(p);
                    if (std::abs(p11 - 0.5) < 0.03)
                    {
                        ++excluded;
                        continue;
                    }
                    ++cases;
                    auto const rho = predict_rho_b(p);
                    auto const r = maxlik_reconstruct(
                        homodyne_record(rho, 20'000, seed++));
                    bool const negative = wigner_point(r.rho, 0, 0) < 0;
                    if (negative == (p11 > 0.5))
                    {
                        ++agree;
                    }
                    else
                    {
                        o.require(false, fmt("a2=%.2f eta=%.2f Q=%.2f E*y2=%.3f",
                                             a2, et, q, p11));
                    }
                }
            }
        }
        report(6, "Wigner origin values, marginals, negativity", o,
               fmt("W(0,0) = %.10f, %.10f, %.5f; marginal max dev %.1e; "
                   "negativity matches E*y2 > 1/2 in %d/%d cases (%d near the "
                   "boundary skipped)",
                   w_vac, w_one, w_mix, worst, agree, cases, excluded));
    }

    // 7. Oracle equivalence
    {
        Outcome o;
        std::mt19937_64 gen(2024);
        std::uniform_real_distribution<double> u(0, 1);
        double worst_rho = 0;
        for (int t = 0; t < 100; ++t)
        {
            ProtocolParams const p{0.02 + 0.96 * u(gen), 0.02 + 0.98 * u(gen),
                                   2 * pi * u(gen), -2.5 + 5 * u(gen)};
            worst_rho = std::max(
                worst_rho, (predict_rho_b(p, 2).elements()
                            - conditional_state_from_fock(p, 2).elements())
                               .cwiseAbs()
                               .maxCoeff());
        }
        double worst_pdf = 0;
        for (int t = 0; t < 100; ++t)
        {
            double const xa = -2.5 + 5 * u(gen), xb = -2.5 + 5 * u(gen);
            double const th = 2 * pi * u(gen);
            double const a2 = 0.02 + 0.96 * u(gen), et = u(gen);
            worst_pdf = std::max(
                worst_pdf, std::abs(joint_pdf(xa, xb, th, a2, et)
                                    - oracle::joint_pdf_two_mode(xa, xb, th,
                                                                 a2, et)));
        }
        o.require(worst_rho < 1e-10, "predict_rho_b");
        o.require(worst_pdf < 1e-10, "joint_pdf");
        report(7, "closed forms vs Fock-level constructions", o,
               fmt("max |rho diff| %.1e, max |pdf diff| %.1e (tol 1e-10)",
                   worst_rho, worst_pdf));
    }

    std::printf("%d of 7 criteria failed\n", failures);
    return strict && failures > 0 ? 1 : 0;
}

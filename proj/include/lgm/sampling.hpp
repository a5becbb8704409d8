#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lgm/moments.hpp"

namespace lgm {

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Deterministic generator for one (seed, stream) pair.
class Rng {
public:
    explicit Rng(RngSpec spec);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    /// (x + iy)/sqrt(2) with x, y standard normal.
    cplx complex_normal();

    const RngSpec& spec() const { return spec_; }

private:
    RngSpec spec_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

struct BrownianPathSpec {
    double t = 1.0;
    int steps = 100;
    void validate() const;
};

/// Haar-distributed element in the defining representation. G2 has no exact
/// sampler; it runs a Brownian path to t = 50 with 5000 steps.
Matrix haar_sample(const RepData& rep, Rng& rng);
Matrix haar_sample(const RepData& rep, RngSpec spec);

/// Geodesic random walk g <- g expm(sqrt(h) sum_a z_a xi^a), h = t/steps.
Matrix brownian_path(const RepData& rep, const BrownianPathSpec& spec, Rng& rng);
Matrix brownian_path(const RepData& rep, const BrownianPathSpec& spec, RngSpec rng);

struct MCEstimate {
    cplx value = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
    /// Wilson only: (sum w)^2 / sum w^2.
    double effective_samples = 0.0;
    /// Wilson only: largest |Im(beta sum_p W_p)| seen, dropped from the weights.
    double discarded_imag = 0.0;
};

struct MCOptions {
    long samples = 10000;
    RngSpec rng;
    /// Steps per path for the Brownian measure.
    int brownian_steps = 200;
};

/// Draws group elements for the measure: Haar draws for Haar and Wilson,
/// Brownian paths for Brownian.
class MeasureSampler {
public:
    MeasureSampler(RepPtr rep, const MeasureSpec& measure, const MCOptions& opts);
    Matrix next();

private:
    RepPtr rep_;
    MeasureSpec measure_;
    int steps_;
    Rng rng_;
};

/// Real Wilson action beta * sum_p Re W_p(g); imag receives |beta * sum_p Im W_p(g)|.
double wilson_action(const MeasureSpec& measure, const GroupPoint& p, double* imag = nullptr);

/// Monte Carlo estimate of E[f] from per-sample values and (log-)weights;
/// empty log_weights means equal weights.
MCEstimate weighted_estimate(const std::vector<cplx>& values, const std::vector<double>& log_weights);

MCEstimate mc_expect(const LoopSum& f, const MeasureSpec& measure, const MCOptions& opts);
MCEstimate mc_expect(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure,
                     const MCOptions& opts);
inline MCEstimate mc_expect(std::initializer_list<WilsonLoop> loops, const MeasureSpec& measure,
                            const MCOptions& opts)
{
    return mc_expect(std::vector<WilsonLoop>(loops), measure, opts);
}

} // namespace lgm

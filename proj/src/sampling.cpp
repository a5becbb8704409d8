#include "lgm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lgm/errors.hpp"
#include "lgm/linalg.hpp"

namespace lgm {

namespace {

std::seed_seq make_seed(RngSpec s)
{
    const auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); };
    const auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
    return std::seed_seq{lo(s.seed), hi(s.seed), lo(s.stream), hi(s.stream)};
}

Matrix phase_fixed_q(const Matrix& z)
{
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index k = 0; k < z.cols(); ++k) {
        const cplx rk = r(k, k);
        const double a = std::abs(rk);
        q.col(k) *= a > 0.0 ? rk / a : cplx(1.0);
    }
    return q;
}

Matrix sample_unitary(int n, Rng& rng)
{
    Matrix z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            z(i, j) = rng.complex_normal();
    return phase_fixed_q(z);
}

Matrix sample_orthogonal(int n, Rng& rng)
{
    Eigen::MatrixXd z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            z(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    Eigen::MatrixXd q = qr.householderQ();
    for (int k = 0; k < n; ++k)
        if (qr.matrixQR()(k, k) < 0.0)
            q.col(k) *= -1.0;
    // O(N) Haar -> SO(N) Haar: right-multiplying the det -1 coset by diag(-1,1,..) is measure preserving
    if (q.determinant() < 0.0)
        q.col(0) *= -1.0;
    return q.cast<cplx>();
}

// Columns [u_1..u_N, -J conj(u_1)..-J conj(u_N)] from quaternionic Gram-Schmidt.
Matrix sample_symplectic(const RepData& rep, Rng& rng)
{
    const int n = rep.spec.n, d = 2 * n;
    Matrix g = Matrix::Zero(d, d);
    for (int k = 0; k < n; ++k) {
        Vector v(d);
        for (int i = 0; i < d; ++i)
            v(i) = rng.complex_normal();
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < k; ++j) {
                v -= g.col(j) * g.col(j).dot(v);
                v -= g.col(n + j) * g.col(n + j).dot(v);
            }
        v /= v.norm();
        g.col(k) = v;
        g.col(n + k) = -rep.j * v.conjugate();
    }
    return g;
}

} // namespace

Rng::Rng(RngSpec spec) : spec_(spec)
{
    auto seq = make_seed(spec);
    engine_.seed(seq);
}

cplx Rng::complex_normal()
{
    const double x = normal(), y = normal();
    return cplx{x, y} * (1.0 / std::numbers::sqrt2);
}

void BrownianPathSpec::validate() const
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("Brownian path needs t > 0");
    if (steps < 1)
        throw DomainError("Brownian path needs steps >= 1");
}

Matrix haar_sample(const RepData& rep, Rng& rng)
{
    switch (rep.spec.family) {
    case Family::U:
        return sample_unitary(rep.dim, rng);
    case Family::SU: {
        Matrix g = sample_unitary(rep.dim, rng);
        const cplx det = g.determinant();
        return g * std::pow(det, -1.0 / rep.dim);
    }
    case Family::SO:
        return sample_orthogonal(rep.dim, rng);
    case Family::Sp:
        return sample_symplectic(rep, rng);
    case Family::G2:
        return brownian_path(rep, {50.0, 5000}, rng);
    case Family::U1Power: {
        const double theta = 2.0 * std::numbers::pi * rng.uniform();
        Matrix g(1, 1);
        g(0, 0) = std::exp(cplx{0.0, rep.spec.n * theta});
        return g;
    }
    }
    throw DomainError("haar_sample: unknown family");
}

Matrix haar_sample(const RepData& rep, RngSpec spec)
{
    Rng rng(spec);
    return haar_sample(rep, rng);
}

Matrix brownian_path(const RepData& rep, const BrownianPathSpec& spec, Rng& rng)
{
    spec.validate();
    const int d = rep.dim;
    const double sh = std::sqrt(spec.t / spec.steps);
    const bool real = rep.spec.family == Family::SO || rep.spec.family == Family::G2;
    Matrix g = Matrix::Identity(d, d);
    Matrix x(d, d);
    for (int s = 0; s < spec.steps; ++s) {
        x.setZero();
        for (const auto& xi : rep.generators)
            x += (sh * rng.normal()) * xi;
        g = g * expm_skew_hermitian(x);
        if (real)
            g = g.real().cast<cplx>();
    }
    return g;
}

Matrix brownian_path(const RepData& rep, const BrownianPathSpec& spec, RngSpec rng)
{
    Rng r(rng);
    return brownian_path(rep, spec, r);
}

MeasureSampler::MeasureSampler(RepPtr rep, const MeasureSpec& measure, const MCOptions& opts)
    : rep_(std::move(rep)), measure_(measure), steps_(opts.brownian_steps), rng_(opts.rng)
{
    measure_.validate();
}

Matrix MeasureSampler::next()
{
    if (measure_.kind == MeasureSpec::Kind::Brownian)
        return brownian_path(*rep_, {measure_.t, steps_}, rng_);
    return haar_sample(*rep_, rng_);
}

double wilson_action(const MeasureSpec& measure, const GroupPoint& p, double* imag)
{
    cplx s = 0.0;
    for (const auto& w : measure.plaquettes)
        s += w.evaluate(p);
    if (imag)
        *imag = std::abs(measure.beta * s.imag());
    return measure.beta * s.real();
}

MCEstimate weighted_estimate(const std::vector<cplx>& values, const std::vector<double>& log_weights)
{
    const auto n = values.size();
    if (n < 2)
        throw DomainError("Monte Carlo estimate needs at least two samples");
    MCEstimate est;
    est.samples = static_cast<long>(n);
    if (log_weights.empty()) {
        cplx mean = 0.0;
        for (auto v : values)
            mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (auto v : values)
            ss += std::norm(v - mean);
        est.value = mean;
        est.stderr_ = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
        est.effective_samples = static_cast<double>(n);
        return est;
    }
    if (log_weights.size() != n)
        throw ShapeError("weighted_estimate: values and weights differ in length");
    const double top = *std::max_element(log_weights.begin(), log_weights.end());
    if (!std::isfinite(top))
        throw NumericalGuardError("Wilson weights are not finite");
    double sw = 0.0, sw2 = 0.0;
    cplx swx = 0.0;
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = std::exp(log_weights[k] - top);
        sw += w[k];
        sw2 += w[k] * w[k];
        swx += w[k] * values[k];
    }
    if (!(sw > 0.0) || !std::isfinite(sw))
        throw NumericalGuardError("zero effective sample size");
    est.value = swx / sw;
    double var = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        var += w[k] * w[k] * std::norm(values[k] - est.value);
    est.stderr_ = std::sqrt(var) / sw;
    est.effective_samples = sw * sw / sw2;
    if (est.effective_samples < 1.0 + 1e-9)
        throw NumericalGuardError("zero effective sample size: one sample carries all the weight");
    return est;
}

MCEstimate mc_expect(const LoopSum& f, const MeasureSpec& measure, const MCOptions& opts)
{
    if (opts.samples < 100)
        throw DomainError("mc_expect needs at least 100 samples");
    if (!f.rep())
        throw DomainError("mc_expect: empty loop sum");
    MeasureSampler sampler(f.rep(), measure, opts);
    const bool weighted = measure.kind == MeasureSpec::Kind::Wilson && measure.beta != 0.0;
    std::vector<cplx> values;
    std::vector<double> logw;
    values.reserve(static_cast<std::size_t>(opts.samples));
    double imag = 0.0;
    for (long s = 0; s < opts.samples; ++s) {
        const GroupPoint p(sampler.next());
        values.push_back(f.evaluate(p));
        if (weighted) {
            double im = 0.0;
            logw.push_back(wilson_action(measure, p, &im));
            imag = std::max(imag, im);
        }
    }
    auto est = weighted_estimate(values, logw);
    est.discarded_imag = imag;
    return est;
}

MCEstimate mc_expect(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure, const MCOptions& opts)
{
    if (loops.empty())
        throw DomainError("mc_expect: no loops");
    LoopSum f(loops.front().rep());
    f.add(1.0, loops);
    return mc_expect(f, measure, opts);
}

} // namespace lgm

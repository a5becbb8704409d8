// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "lgm/errors.hpp"
#include "lgm/linalg.hpp"
#include "lgm/moments.hpp"
#include "lgm/sampling.hpp"
#include "lgm/theorem_a.hpp"
#include "test_util.hpp"

using namespace lgm;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    // records a measured value against a bound
    void bound(const std::string& what, double value, double limit)
    {
        if (!(value <= limit)) {
            ok = false;
            detail << what << "=" << value << " > " << limit << "; ";
        }
        worst = std::max(worst, limit > 0 ? value / limit : value);
    }
    double worst = 0.0;
};

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// --- 1
void completeness(Outcome& o)
{
    std::vector<GroupSpec> specs{{Family::G2, 7}};
    for (int n = 1; n <= 6; ++n) {
        if (n >= 2)
            specs.push_back({Family::SO, n}), specs.push_back({Family::SU, n});
        specs.push_back({Family::Sp, n});
        specs.push_back({Family::U, n});
    }
    for (const auto& s : specs)
        o.bound(s.name(), max_abs_diff(split_casimir(*make_rep(s)), closed_form_completeness(s)), 1e-12);
}

// --- 2
void casimir_values(Outcome& o)
{
    for (int n = 1; n <= 6; ++n) {
        const double nn = n;
        if (n >= 2) {
            o.bound("SO(" + std::to_string(n) + ")", std::abs(make_rep({Family::SO, n})->lambda - (1 - nn)), 1e-12);
            o.bound("SU(" + std::to_string(n) + ")", std::abs(make_rep({Family::SU, n})->lambda - (-nn + 1 / nn)),
                    1e-12);
        }
        o.bound("Sp(" + std::to_string(n) + ")", std::abs(make_rep({Family::Sp, n})->lambda + (1 + 2 * nn)), 1e-12);
        o.bound("U(" + std::to_string(n) + ")", std::abs(make_rep({Family::U, n})->lambda + nn), 1e-12);
    }
    // G2: lambda delta_ij = sum_k K_ikkj
    const auto g2 = make_rep({Family::G2, 7});
    const Tensor k = split_casimir(*g2);
    double err = 0.0;
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) {
            cplx s = 0.0;
            for (std::size_t a = 0; a < 7; ++a)
                s += k({i, a, a, j});
            err = std::max(err, std::abs(s - (i == j ? g2->lambda : 0.0)));
        }
    o.bound("G2 contraction", err, 1e-12);
    o.bound("G2 closed form", std::abs(g2->lambda - casimir_eigenvalue({Family::G2, 7})), 1e-12);
}

// --- 3
void intro_moment(Outcome& o)
{
    for (int n : {2, 3, 4}) {
        const auto op = haar_moment(make_rep({Family::U, n}), 1, 1);
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l) {
                        const double want = (i == k && j == l) ? 1.0 / n : 0.0;
                        err = std::max(err, std::abs(op.entry(static_cast<std::size_t>(i * n + k),
                                                              static_cast<std::size_t>(j * n + l)) -
                                                     want));
                    }
        o.bound("U(" + std::to_string(n) + ")", err, 1e-10);
    }
}

// --- 4
void g2_second_moment(Outcome& o)
{
    const auto g2 = make_rep({Family::G2, 7});
    const auto op = haar_moment(g2, 2, 0);
    double err = 0.0;
    for (std::size_t r = 0; r < 49; ++r)
        for (std::size_t c = 0; c < 49; ++c) {
            const double want = (r / 7 == r % 7 && c / 7 == c % 7) ? 1.0 / 7.0 : 0.0;
            err = std::max(err, std::abs(op.entry(r, c) - want));
        }
    o.bound("moment", err, 1e-9);
    const auto wm = weingarten(spanning_set(g2, 2, 0, SpanningSource::G2u));
    if (wm.wg.rows() != 1 || wm.wg.cols() != 1) {
        o.ok = false;
        o.detail << "Wg is not 1x1; ";
        return;
    }
    o.bound("Wg", std::abs(wm.wg(0, 0) - 1.0 / 7.0), 1e-12);
}

// --- 5
std::vector<std::pair<double, int>> content_eigenvalues(int big, int n)
{
    const double N = big;
    switch (n) {
    case 1: return {{N, 1}};
    case 2: return {{N * (N + 1), 1}, {N * (N - 1), 1}};
    default: return {{N * (N + 1) * (N + 2), 1}, {(N + 1) * N * (N - 1), 4}, {N * (N - 1) * (N - 2), 1}};
    }
}

void unitary_weingarten(Outcome& o)
{
    for (int big : {3, 4}) {
        const auto rep = make_rep({Family::U, big});
        for (int n = 1; n <= 3; ++n) {
            const std::string tag = "U(" + std::to_string(big) + ") n=" + std::to_string(n);
            const auto wm = weingarten(spanning_set(rep, n, n, SpanningSource::Permutations));
            {
                const Matrix diff = wm.projector() - haar_moment(rep, n, n).dense();
                o.bound(tag + " projector", max_abs(diff), 1e-9);
            }
            std::vector<double> want;
            for (auto [v, mult] : content_eigenvalues(big, n))
                want.insert(want.end(), static_cast<std::size_t>(mult), v);
            std::sort(want.begin(), want.end());
            const auto ev = eig_hermitian(wm.gram).eigenvalues;
            if (static_cast<std::size_t>(ev.size()) != want.size()) {
                o.ok = false;
                o.detail << tag << " gram size; ";
                continue;
            }
            double err = 0.0;
            for (Eigen::Index i = 0; i < ev.size(); ++i)
                err = std::max(err, std::abs(ev(i) - want[static_cast<std::size_t>(i)]));
            o.bound(tag + " gram spectrum", err, 1e-9);
            if (n == 2) {
                const double N = big;
                // labels in lexicographic order: identity, then the swap
                const double a = 1.0 / (N * N - 1), b = -1.0 / (N * (N * N - 1));
                const double e = std::max({std::abs(wm.wg(0, 0) - a), std::abs(wm.wg(1, 1) - a),
                                           std::abs(wm.wg(0, 1) - b), std::abs(wm.wg(1, 0) - b)});
                o.bound(tag + " Wg", e, 1e-12);
            }
        }
    }
}

// --- 6
void off_balance(Outcome& o)
{
    for (int big : {2, 3, 4})
        for (auto [a, b] : {std::pair{1, 0}, {2, 1}})
            o.bound("U(" + std::to_string(big) + ") (" + std::to_string(a) + "," + std::to_string(b) + ")",
                    max_abs(haar_moment(make_rep({Family::U, big}), a, b).dense()), 1e-10);
}

// --- 7
void brownian_semigroup(Outcome& o)
{
    for (const auto& spec : {GroupSpec{Family::SU, 2}, GroupSpec{Family::U, 2}}) {
        const auto rep = make_rep(spec);
        for (int k = 1; k <= 3; ++k)
            for (int n = 0; n <= k; ++n) {
                const int nd = k - n;
                const std::string tag = spec.name() + " (" + std::to_string(n) + "," + std::to_string(nd) + ")";
                const Matrix a = brownian_moment(rep, n, nd, 0.4).dense();
                const Matrix b = brownian_moment(rep, n, nd, 0.7).dense();
                const Matrix ab = brownian_moment(rep, n, nd, 1.1).dense();
                o.bound(tag + " semigroup", max_abs(a * b - ab), 1e-10);
                const Matrix late = brownian_moment(rep, n, nd, 50.0).dense();
                o.bound(tag + " t=50", max_abs(late - haar_moment(rep, n, nd).dense()), 1e-8);
            }
    }
}

// --- 8
void u1_fourier(Outcome& o)
{
    const auto u1 = make_rep({Family::U, 1});
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    const int top = 3;
    // tr(g^n) as a loop with |n| unit factors
    auto power = [&](int n) {
        if (n == 0)
            return WilsonLoop::constant(u1, 1.0);
        return WilsonLoop(u1, std::vector<LoopFactor>(static_cast<std::size_t>(std::abs(n)),
                                                      LoopFactor{Matrix::Identity(1, 1), n > 0 ? 1 : -1}));
    };
    MomentEngine engine(u1);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<cplx> c1, c2;
        LoopSum f1(u1), f2(u1);
        for (int n = -top; n <= top; ++n) {
            c1.emplace_back(nd(rng), nd(rng));
            c2.emplace_back(nd(rng), nd(rng));
            f1 += c1.back() * LoopSum(power(n));
            f2 += c2.back() * LoopSum(power(n));
        }
        cplx want = 0.0;
        for (int n = -top; n <= top; ++n)
            want += c1[static_cast<std::size_t>(n + top)] * c2[static_cast<std::size_t>(-n + top)];
        o.bound("trial " + std::to_string(trial), std::abs(engine.expect(f1 * f2, MeasureSpec::haar()) - want),
                1e-12);
    }
}

// --- 9
void theorem_a_haar(Outcome& o)
{
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> deg(1, 2);
    for (const auto& spec : {GroupSpec{Family::SO, 3}, GroupSpec{Family::U, 2}, GroupSpec{Family::SU, 2},
                             GroupSpec{Family::Sp, 1}}) {
        const auto rep = make_rep(spec);
        double worst = 0.0;
        for (int trial = 0; trial < 25; ++trial) {
            const std::vector<WilsonLoop> loops{test::random_loop(rep, deg(rng), rng),
                                                test::random_loop(rep, deg(rng), rng)};
            const auto r = verify_theorem_a(loops, MeasureSpec::haar());
            worst = std::max(worst, r.residual / (1.0 + std::abs(r.lhs)));
        }
        o.bound(spec.name(), worst, 1e-9);
    }
}

// --- 10
void theorem_a_brownian(Outcome& o)
{
    std::mt19937_64 rng(10);
    TheoremAOptions opts;
    opts.fd_step = 1e-4;
    for (const auto& spec : {GroupSpec{Family::SO, 3}, GroupSpec{Family::U, 2}, GroupSpec{Family::SU, 2},
                             GroupSpec{Family::Sp, 1}}) {
        const auto rep = make_rep(spec);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const std::vector<WilsonLoop> loops{test::random_loop(rep, 2, rng), test::random_loop(rep, 1, rng)};
            worst = std::max(worst, verify_theorem_a(loops, MeasureSpec::brownian(1.0), opts).residual);
        }
        o.bound(spec.name(), worst, 1e-6);
    }
}

// --- 11
void theorem_a_wilson(Outcome& o)
{
    const auto u2 = make_rep({Family::U, 2});
    const auto plaq = WilsonLoop::linear(u2, Matrix::Identity(2, 2));
    std::mt19937_64 rng(11);
    const std::vector<WilsonLoop> loops{test::random_loop(u2, 1, rng), test::random_loop(u2, 1, rng)};
    TheoremAOptions opts;
    opts.mc.samples = 200000;
    opts.mc.rng = {11, 0};
    for (double beta : {0.0, 0.1, 0.5}) {
        const auto r = verify_theorem_a(loops, MeasureSpec::wilson(beta, {plaq}), opts);
        std::ostringstream tag;
        tag << "beta=" << beta;
        o.bound(tag.str() + " z", r.z_score, 3.0);
        if (beta == 0.0) {
            if (!r.haar_residual) {
                o.ok = false;
                o.detail << "no Haar residual at beta=0; ";
            } else {
                o.bound("beta=0 Haar residual", *r.haar_residual, 1e-9);
            }
        }
    }
}

// --- 12
void sampler_calibration(Outcome& o)
{
    MCOptions opts;
    opts.samples = 100000;
    opts.rng = {12, 0};
    for (int big : {1, 2, 3, 4}) {
        const auto rep = make_rep({Family::U, big});
        const Matrix id = Matrix::Identity(big, big);
        const auto e = mc_expect({WilsonLoop::linear(rep, id, 1), WilsonLoop::linear(rep, id, -1)},
                                 MeasureSpec::haar(), opts);
        if (big == 1) // |tr g|^2 = 1 identically
            o.bound("U(1)", std::abs(e.value - 1.0), 1e-12);
        else
            o.bound("U(" + std::to_string(big) + ") z", std::abs(e.value - 1.0) / e.stderr_, 3.0);
    }
    const auto so4 = make_rep({Family::SO, 4});
    const Matrix id = Matrix::Identity(4, 4);
    const auto e = mc_expect({WilsonLoop::linear(so4, id), WilsonLoop::linear(so4, id)}, MeasureSpec::haar(), opts);
    o.bound("SO(4) z", std::abs(e.value - 1.0) / e.stderr_, 3.0);
    // the exact value the estimate is calibrated against
    o.bound("SO(4) exact",
            std::abs(expect_exact({WilsonLoop::linear(so4, id), WilsonLoop::linear(so4, id)}, MeasureSpec::haar()) -
                     1.0),
            1e-10);
}

// --- 13
cplx directional(const WilsonLoop& w, const Matrix& g, const Matrix& xi)
{
    auto f = [&](double s) { return w.evaluate(Matrix(g * expm_skew_hermitian(s * xi))); };
    auto d = [&](double h) { return (f(h) - f(-h)) / (2.0 * h); };
    return (4.0 * d(1e-3) - d(2e-3)) / 3.0;
}

cplx second_directional(const WilsonLoop& w, const Matrix& g, const Matrix& xi)
{
    auto f = [&](double s) { return w.evaluate(Matrix(g * expm_skew_hermitian(s * xi))); };
    const cplx f0 = f(0.0);
    auto d2 = [&](double h) { return (f(h) - 2.0 * f0 + f(-h)) / (h * h); };
    return (4.0 * d2(1e-3) - d2(2e-3)) / 3.0;
}

void fd_oracles(Outcome& o)
{
    std::mt19937_64 rng(13);
    for (const auto& spec : test::small_catalog()) {
        const auto rep = make_rep(spec);
        double merge_err = 0.0, lap_err = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            const auto w1 = test::random_loop(rep, 2, rng), w2 = test::random_loop(rep, 1, rng);
            const auto w3 = test::random_loop(rep, 3, rng);
            const Matrix g = test::random_element(*rep, rng);
            cplx m = 0.0, l = 0.0;
            for (const auto& xi : rep->generators) {
                m += directional(w1, g, xi) * directional(w2, g, xi);
                l += second_directional(w3, g, xi);
            }
            merge_err = std::max(merge_err, std::abs(total_merge(w1, w2).evaluate(g) - m));
            lap_err = std::max(lap_err, std::abs(laplacian(w3).evaluate(g) - l));
        }
        o.bound(spec.name() + " merge", merge_err, 1e-7);
        o.bound(spec.name() + " laplacian", lap_err, 1e-7);
    }
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"completeness relations match closed forms", completeness},
        {"Casimir eigenvalues", casimir_values},
        {"U(N) first mixed moment", intro_moment},
        {"G2 second moment and Weingarten", g2_second_moment},
        {"U(N) Weingarten calculus", unitary_weingarten},
        {"U(N) off-balance moments vanish", off_balance},
        {"Brownian semigroup and Haar limit", brownian_semigroup},
        {"U(1) Fourier product", u1_fourier},
        {"Laplacian identity, Haar, exact", theorem_a_haar},
        {"Laplacian identity, Brownian ODE", theorem_a_brownian},
        {"Laplacian identity, Wilson action", theorem_a_wilson},
        {"sampler calibration", sampler_calibration},
        {"finite-difference oracles", fd_oracles},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.ok)
            ++failed;
        std::printf("criterion %2zu: %s  %-45s worst/limit=%.3g  (%.1fs) %s\n", i + 1, o.ok ? "PASS" : "FAIL",
                    criteria[i].first.c_str(), o.worst, secs, o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

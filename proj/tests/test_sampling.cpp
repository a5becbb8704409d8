#include <doctest.h>

#include <random>

#include "lgm/errors.hpp"
#include "lgm/sampling.hpp"
#include "test_util.hpp"

using namespace lgm;

TEST_CASE("sampling: Haar samples satisfy the group constraints")
{
    Rng rng({42, 0});
    for (const auto& spec : test::small_catalog()) {
        if (spec.family == Family::G2)
            continue;
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        for (int k = 0; k < 20; ++k)
            CHECK(group_residual(*rep, haar_sample(*rep, rng)) <= 1e-12);
    }
}

TEST_CASE("sampling: G2 by long Brownian path")
{
    const auto g2 = make_rep({Family::G2, 7});
    const Matrix g = haar_sample(*g2, RngSpec{3, 0});
    CHECK(group_residual(*g2, g) <= 1e-6);
}

TEST_CASE("sampling: reproducible per (seed, stream)")
{
    const auto rep = make_rep({Family::Sp, 2});
    const Matrix a = haar_sample(*rep, RngSpec{9, 1});
    const Matrix b = haar_sample(*rep, RngSpec{9, 1});
    const Matrix c = haar_sample(*rep, RngSpec{9, 2});
    CHECK((a - b).norm() == 0.0);
    CHECK((a - c).norm() > 0.1);

    const auto su2 = make_rep({Family::SU, 2});
    MCOptions opts;
    opts.samples = 500;
    opts.rng = {7, 0};
    const auto loops = std::vector<WilsonLoop>{WilsonLoop::linear(su2, Matrix::Identity(2, 2))};
    const auto e1 = mc_expect(loops, MeasureSpec::haar(), opts);
    const auto e2 = mc_expect(loops, MeasureSpec::haar(), opts);
    CHECK(e1.value == e2.value);
    CHECK(e1.stderr_ == e2.stderr_);
}

TEST_CASE("sampling: Brownian step stays on the group")
{
    const auto rep = make_rep({Family::SU, 3});
    Rng rng({1, 0});
    const Matrix g = brownian_path(*rep, {1.0, 300}, rng);
    CHECK(group_residual(*rep, g) <= 300 * 1e-13);
    const Matrix tiny = brownian_path(*rep, {1e-10, 1}, rng);
    CHECK((tiny - Matrix::Identity(3, 3)).norm() < 1e-3);
    CHECK_THROWS_AS(BrownianPathSpec({0.0, 1}).validate(), DomainError);
    CHECK_THROWS_AS(BrownianPathSpec({1.0, 0}).validate(), DomainError);
}

TEST_CASE("sampling: Monte Carlo estimates land on exact values")
{
    MCOptions opts;
    opts.samples = 20000;
    opts.rng = {11, 0};
    // U(2): E g_11 = 0
    const auto u2 = make_rep({Family::U, 2});
    Matrix e11 = Matrix::Zero(2, 2);
    e11(0, 0) = 1.0;
    const auto m = mc_expect({WilsonLoop::linear(u2, e11)}, MeasureSpec::haar(), opts);
    CHECK(std::abs(m.value) <= 3.0 * m.stderr_);
    // Sp(2): E |tr g|^2 = 1
    const auto sp2 = make_rep({Family::Sp, 2});
    const Matrix id = Matrix::Identity(4, 4);
    const auto s = mc_expect({WilsonLoop::linear(sp2, id, 1), WilsonLoop::linear(sp2, id, -1)},
                             MeasureSpec::haar(), opts);
    CHECK(std::abs(s.value - 1.0) <= 3.0 * s.stderr_);
    // U(1) Brownian: E z_t = exp(-t/2)
    const auto u1 = make_rep({Family::U, 1});
    opts.brownian_steps = 20;
    const auto b = mc_expect({WilsonLoop::linear(u1, Matrix::Identity(1, 1))}, MeasureSpec::brownian(1.0), opts);
    CHECK(std::abs(b.value - std::exp(-0.5)) <= 3.0 * b.stderr_);
}

TEST_CASE("sampling: Wilson estimator")
{
    const auto su2 = make_rep({Family::SU, 2});
    const auto tr = WilsonLoop::linear(su2, Matrix::Identity(2, 2));
    MCOptions opts;
    opts.samples = 2000;
    opts.rng = {5, 0};
    const auto haar = mc_expect({tr}, MeasureSpec::haar(), opts);
    const auto zero = mc_expect({tr}, MeasureSpec::wilson(0.0, {tr}), opts);
    CHECK(haar.value == zero.value);
    CHECK(haar.stderr_ == zero.stderr_);
    // positive beta favours large tr g
    opts.samples = 20000;
    const auto hot = mc_expect({tr}, MeasureSpec::wilson(1.0, {tr}), opts);
    CHECK(hot.value.real() > 0.3);
    CHECK(hot.effective_samples < 20000.0);
    CHECK(hot.discarded_imag < 1e-12);
    opts.samples = 50;
    CHECK_THROWS_AS(mc_expect({tr}, MeasureSpec::haar(), opts), DomainError);
    CHECK_THROWS_AS(weighted_estimate({1.0, 2.0}, {0.0, -1e6}), NumericalGuardError);
}

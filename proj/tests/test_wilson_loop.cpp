#include <doctest.h>

#include <random>

#include "lgm/errors.hpp"
#include "lgm/linalg.hpp"
#include "lgm/wilson_loop.hpp"
#include "test_util.hpp"

using namespace lgm;

namespace {

// xi^a W at g by Richardson-extrapolated central differences along g exp(s xi).
cplx directional(const WilsonLoop& w, const Matrix& g, const Matrix& xi)
{
    auto f = [&](double s) { return w.evaluate(Matrix(g * expm_skew_hermitian(s * xi))); };
    auto d = [&](double h) { return (f(h) - f(-h)) / (2.0 * h); };
    const double h = 2e-3;
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

cplx second_directional(const WilsonLoop& w, const Matrix& g, const Matrix& xi)
{
    auto f = [&](double s) { return w.evaluate(Matrix(g * expm_skew_hermitian(s * xi))); };
    const cplx f0 = f(0.0);
    auto d2 = [&](double h) { return (f(h) - 2.0 * f0 + f(-h)) / (h * h); };
    const double h = 2e-3;
    return (4.0 * d2(h / 2) - d2(h)) / 3.0;
}

} // namespace

TEST_CASE("loops: evaluation and canonical form")
{
    const auto rep = make_rep({Family::U, 2});
    std::mt19937_64 rng(10);
    const Matrix a = test::random_matrix(2, rng), b = test::random_matrix(2, rng);
    const Matrix g = test::random_element(*rep, rng);
    const WilsonLoop w(rep, {{a, 1}, {b, -1}}, 2.0);
    CHECK(w.degree() == 2);
    CHECK(w.sign_at(2) == -1);
    CHECK(std::abs(w.evaluate(g) - 2.0 * (a * g * b * g.adjoint()).trace()) < 1e-13);

    // g g^{-1} with nothing in between cancels
    const WilsonLoop c(rep, {{a, 1}, {Matrix::Identity(2, 2), -1}});
    CHECK(c.is_constant());
    CHECK(std::abs(c.evaluate(g) - a.trace()) < 1e-14);
    // sign-0 factors fold into their neighbours
    const WilsonLoop f(rep, {{a, 0}, {b, 1}});
    CHECK(f.degree() == 1);
    CHECK(std::abs(f.evaluate(g) - (a * b * g).trace()) < 1e-13);
    CHECK(std::abs(WilsonLoop::constant(rep, 3.5).evaluate(g) - 3.5) < 1e-14);

    CHECK_THROWS_AS(WilsonLoop(rep, {{Matrix::Identity(3, 3), 1}}), ShapeError);
    CHECK_THROWS_AS(WilsonLoop(rep, {{a, 2}}), DomainError);
    CHECK_THROWS_AS(w.sign_at(3), DomainError);
}

TEST_CASE("loops: cyclic invariance")
{
    std::mt19937_64 rng(11);
    for (const auto& spec : test::small_catalog()) {
        const auto rep = make_rep(spec);
        const auto w = test::random_loop(rep, 3, rng);
        const Matrix g = test::random_element(*rep, rng);
        for (int k = 1; k < 3; ++k)
            CHECK(std::abs(w.rotated(k).evaluate(g) - w.evaluate(g)) < 1e-13);
    }
}

TEST_CASE("loops: closed-form merging and twisting agree with generator sums")
{
    std::mt19937_64 rng(12);
    for (const auto& spec : test::small_catalog()) {
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        for (int trial = 0; trial < 3; ++trial) {
            const auto w1 = test::random_loop(rep, 2, rng);
            const auto w2 = test::random_loop(rep, 2, rng);
            const auto w3 = test::random_loop(rep, 3, rng);
            const GroupPoint p(test::random_element(*rep, rng));
            for (int s1 = 1; s1 <= 2; ++s1)
                for (int s2 = 1; s2 <= 2; ++s2) {
                    const cplx gen = merge_at(w1, s1, w2, s2, Expansion::GeneratorSum).evaluate(p);
                    const cplx closed = merge_at(w1, s1, w2, s2, Expansion::ClosedForm).evaluate(p);
                    CHECK(std::abs(gen - closed) < 1e-11);
                }
            for (int s1 = 1; s1 <= 3; ++s1)
                for (int s2 = 1; s2 <= 3; ++s2) {
                    if (s1 == s2)
                        continue;
                    const cplx gen = twist_at(w3, s1, s2, Expansion::GeneratorSum).evaluate(p);
                    const cplx closed = twist_at(w3, s1, s2, Expansion::ClosedForm).evaluate(p);
                    CHECK(std::abs(gen - closed) < 1e-11);
                }
        }
    }
}

TEST_CASE("loops: merging equals the derivative pairing")
{
    std::mt19937_64 rng(13);
    for (const auto& spec : test::small_catalog()) {
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        const auto w1 = test::random_loop(rep, 2, rng);
        const auto w2 = test::random_loop(rep, 1, rng);
        const Matrix g = test::random_element(*rep, rng);
        cplx oracle = 0.0;
        for (const auto& xi : rep->generators)
            oracle += directional(w1, g, xi) * directional(w2, g, xi);
        CHECK(std::abs(total_merge(w1, w2).evaluate(g) - oracle) < 1e-7);
    }
}

TEST_CASE("loops: Laplacian equals the second-difference oracle")
{
    std::mt19937_64 rng(14);
    for (const auto& spec : test::small_catalog()) {
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        const auto w = test::random_loop(rep, 3, rng);
        const Matrix g = test::random_element(*rep, rng);
        cplx oracle = 0.0;
        for (const auto& xi : rep->generators)
            oracle += second_directional(w, g, xi);
        for (auto how : {Expansion::GeneratorSum, Expansion::ClosedForm})
            CHECK(std::abs(laplacian(w, how).evaluate(g) - oracle) < 1e-7);
    }
}

TEST_CASE("loops: linear loops are Laplacian eigenfunctions")
{
    const auto rep = make_rep({Family::SU, 3});
    std::mt19937_64 rng(15);
    const auto w = WilsonLoop::linear(rep, test::random_matrix(3, rng));
    const GroupPoint p(test::random_element(*rep, rng));
    CHECK(std::abs(laplacian(w).evaluate(p) - rep->lambda * w.evaluate(p)) < 1e-13);
    CHECK(total_twist(w).terms().empty());
}

TEST_CASE("loops: merging rejects bad slots and mixed representations")
{
    std::mt19937_64 rng(16);
    const auto u2 = make_rep({Family::U, 2});
    const auto so3 = make_rep({Family::SO, 3});
    const auto a = test::random_loop(u2, 2, rng);
    const auto b = test::random_loop(so3, 1, rng);
    CHECK_THROWS_AS(merge_at(a, 1, b, 1), DomainError);
    CHECK_THROWS_AS(merge_at(a, 0, a, 1), DomainError);
    CHECK_THROWS_AS(twist_at(a, 1, 1), DomainError);
}

TEST_CASE("loops: coefficient tensor reproduces the product of loops")
{
    std::mt19937_64 rng(17);
    for (const auto& spec : {GroupSpec{Family::U, 2}, GroupSpec{Family::Sp, 1}, GroupSpec{Family::SO, 3}}) {
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        const std::vector<WilsonLoop> loops{test::random_loop(rep, 2, rng), test::random_loop(rep, 1, rng),
                                            WilsonLoop::constant(rep, 0.5)};
        const Matrix g = test::random_element(*rep, rng);
        const Matrix ginv = g.adjoint();
        const auto lt = loops_to_tensor(loops);
        const int k = lt.pattern.n + lt.pattern.n_dual;
        CHECK(k == 3);
        const auto d = static_cast<std::size_t>(rep->dim);
        std::size_t side = 1;
        for (int i = 0; i < k; ++i)
            side *= d;
        // rho(g)_{IJ} = prod g_{i j} prod ginv_{j' i'}
        cplx sum = 0.0;
        for (std::size_t r = 0; r < side; ++r)
            for (std::size_t c = 0; c < side; ++c) {
                cplx rho = 1.0;
                std::size_t rr = r, cc = c;
                for (int pos = k - 1; pos >= 0; --pos) {
                    const auto i = static_cast<Eigen::Index>(rr % d), j = static_cast<Eigen::Index>(cc % d);
                    rr /= d;
                    cc /= d;
                    rho *= pos < lt.pattern.n ? g(i, j) : ginv(j, i);
                }
                sum += lt.coeff.data()[r * side + c] * rho;
            }
        cplx direct = 1.0;
        for (const auto& w : loops)
            direct *= w.evaluate(g);
        CHECK(std::abs(lt.constant * sum - direct) < 1e-12);
    }
}

TEST_CASE("loops: loop sums distribute")
{
    std::mt19937_64 rng(18);
    const auto rep = make_rep({Family::SU, 2});
    const auto a = test::random_loop(rep, 1, rng), b = test::random_loop(rep, 2, rng);
    const GroupPoint p(test::random_element(*rep, rng));
    const LoopSum s = LoopSum(a) + 2.0 * LoopSum(b);
    const LoopSum prod = s * s;
    CHECK(prod.terms().size() == 4);
    CHECK(std::abs(prod.evaluate(p) - s.evaluate(p) * s.evaluate(p)) < 1e-12);
}

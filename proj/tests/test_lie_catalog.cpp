#include <doctest.h>

#include <random>

#include "lgm/errors.hpp"
#include "lgm/lie_catalog.hpp"
#include "test_util.hpp"

using namespace lgm;

TEST_CASE("catalog: generators are skew-Hermitian, orthonormal and complete")
{
    for (const auto& spec : test::small_catalog()) {
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        const int m = rep->algebra_dim();
        int expected = 0;
        const int n = spec.n;
        switch (spec.family) {
        case Family::SO: expected = n * (n - 1) / 2; break;
        case Family::Sp: expected = n * (2 * n + 1); break;
        case Family::U: expected = n * n; break;
        case Family::SU: expected = n * n - 1; break;
        case Family::G2: expected = 14; break;
        case Family::U1Power: expected = 1; break;
        }
        CHECK(m == expected);
        for (int a = 0; a < m; ++a) {
            const Matrix& x = rep->generators[static_cast<std::size_t>(a)];
            CHECK((x + x.adjoint()).norm() < 1e-14);
            for (int b = 0; b < m; ++b)
                CHECK(std::abs(rep->kappa(x, rep->generators[static_cast<std::size_t>(b)]) - (a == b ? 1.0 : 0.0)) <
                      1e-12);
        }
        // Casimir acts as a scalar on an irreducible representation
        CHECK((rep->casimir - rep->lambda * Matrix::Identity(rep->dim, rep->dim)).norm() < 1e-12);
    }
}

TEST_CASE("catalog: split Casimir matches the closed-form completeness relation")
{
    for (const auto& spec : test::small_catalog()) {
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        CHECK(max_abs_diff(split_casimir(*rep), closed_form_completeness(spec)) < 1e-12);
    }
}

TEST_CASE("catalog: Casimir eigenvalues")
{
    CHECK(make_rep({Family::SO, 4})->lambda == doctest::Approx(-3).epsilon(1e-13));
    CHECK(make_rep({Family::Sp, 2})->lambda == doctest::Approx(-5).epsilon(1e-13));
    CHECK(make_rep({Family::U, 3})->lambda == doctest::Approx(-3).epsilon(1e-13));
    CHECK(make_rep({Family::SU, 2})->lambda == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK(make_rep({Family::G2, 7})->lambda == doctest::Approx(-2).epsilon(1e-13));
    CHECK(make_rep({Family::U1Power, 3})->lambda == doctest::Approx(-9).epsilon(1e-13));
    // rho(C)_ij = K_ikkj
    const auto rep = make_rep({Family::G2, 7});
    const Tensor k = split_casimir(*rep);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) {
            cplx s = 0.0;
            for (std::size_t a = 0; a < 7; ++a)
                s += k({i, a, a, j});
            CHECK(std::abs(s - (i == j ? -2.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("catalog: octonion structure constants")
{
    // totally antisymmetric, and each pair of distinct imaginary units has exactly one product
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            int nonzero = 0;
            for (int k = 0; k < 7; ++k) {
                const double p = octonion_psi(i, j, k);
                CHECK(p == -octonion_psi(j, i, k));
                CHECK(p == octonion_psi(j, k, i));
                if (p != 0.0) {
                    ++nonzero;
                    CHECK(std::abs(p) == 1.0);
                }
            }
            CHECK(nonzero == (i == j ? 0 : 1));
        }
    CHECK(octonion_psi(0, 1, 2) == 1.0); // (1,2,3)
    CHECK(octonion_psi(2, 4, 3) == 1.0); // (3,5,4) taken as printed
}

TEST_CASE("catalog: group residual sees the defining constraints")
{
    std::mt19937_64 rng(5);
    for (const auto& spec : test::small_catalog()) {
        CAPTURE(spec.name());
        const auto rep = make_rep(spec);
        const Matrix g = test::random_element(*rep, rng);
        CHECK(group_residual(*rep, g) < 1e-11);
        CHECK((group_inverse(g) * g - Matrix::Identity(rep->dim, rep->dim)).norm() < 1e-12);
    }
    const auto so3 = make_rep({Family::SO, 3});
    Matrix reflect = Matrix::Identity(3, 3);
    reflect(0, 0) = -1.0;
    CHECK(group_residual(*so3, reflect) > 1.0);
    CHECK_THROWS_AS(group_residual(*so3, Matrix::Identity(2, 2)), ShapeError);
}

TEST_CASE("catalog: parsing and validation")
{
    CHECK(parse_family("SO") == Family::SO);
    CHECK(parse_family("g2") == Family::G2);
    CHECK(parse_family("u1") == Family::U1Power);
    CHECK_THROWS_AS(parse_family("e8"), DomainError);
    CHECK_THROWS_AS(make_rep({Family::SO, 1}), DomainError);
    CHECK_THROWS_AS(make_rep({Family::SU, 1}), DomainError);
    CHECK_THROWS_AS(make_rep({Family::G2, 3}), DomainError);
    CHECK(GroupSpec{Family::Sp, 2}.name() == "Sp(2)");
}

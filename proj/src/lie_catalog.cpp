#include "lgm/lie_catalog.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

constexpr cplx I{0.0, 1.0};

Matrix unit(int n, int r, int c)
{
    Matrix e = Matrix::Zero(n, n);
    e(r, c) = 1.0;
    return e;
}

// Block matrix [[a, b], [-conj(b), conj(a)]].
Matrix iota(const Matrix& a, const Matrix& b)
{
    const auto n = a.rows();
    Matrix m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = a;
    m.topRightCorner(n, n) = b;
    m.bottomLeftCorner(n, n) = -b.conjugate();
    m.bottomRightCorner(n, n) = a.conjugate();
    return m;
}

// Modified Gram-Schmidt under kappa(X,Y) = -scale * Re tr(XY). Candidates
// that are linearly dependent on earlier ones are dropped.
std::vector<Matrix> orthonormalize(const std::vector<Matrix>& candidates, double scale)
{
    auto kappa = [scale](const Matrix& x, const Matrix& y) {
        return -scale * (x * y).trace().real();
    };
    std::vector<Matrix> basis;
    for (const auto& c : candidates) {
        Matrix v = c;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis)
                v -= kappa(b, v) * b;
        const double nrm2 = kappa(v, v);
        if (nrm2 > 1e-20)
            basis.push_back(v / std::sqrt(nrm2));
    }
    return basis;
}

std::vector<Matrix> so_generators(int n)
{
    std::vector<Matrix> out;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            out.push_back(unit(n, a, b) - unit(n, b, a));
    return out;
}

std::vector<Matrix> u_candidates(int n, bool traceless)
{
    std::vector<Matrix> out;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            out.push_back(I * (unit(n, a, b) + unit(n, b, a)));
            out.push_back(unit(n, a, b) - unit(n, b, a));
        }
    if (!traceless) {
        for (int a = 0; a < n; ++a)
            out.push_back(I * unit(n, a, a));
    } else {
        for (int l = 1; l < n; ++l) {
            Matrix h = Matrix::Zero(n, n);
            for (int j = 0; j < l; ++j)
                h(j, j) = 1.0;
            h(l, l) = -static_cast<double>(l);
            out.push_back(I * h);
        }
    }
    return out;
}

std::vector<Matrix> sp_candidates(int n)
{
    const Matrix zero = Matrix::Zero(n, n);
    std::vector<Matrix> out;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            out.push_back(iota(unit(n, a, b) - unit(n, b, a), zero));
            out.push_back(iota(I * (unit(n, a, b) + unit(n, b, a)), zero));
            out.push_back(iota(zero, unit(n, a, b) + unit(n, b, a)));
            out.push_back(iota(zero, I * (unit(n, a, b) + unit(n, b, a))));
        }
    for (int c = 0; c < n; ++c) {
        out.push_back(iota(I * unit(n, c, c), zero));
        out.push_back(iota(zero, unit(n, c, c)));
        out.push_back(iota(zero, I * unit(n, c, c)));
    }
    return out;
}

Matrix symplectic_form(int n)
{
    Matrix j = Matrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Matrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
    return j;
}

using Psi = std::array<std::array<std::array<double, 7>, 7>, 7>;

const Psi& psi_table()
{
    static const Psi table = [] {
        Psi p{};
        const int triples[7][3] = {{1, 2, 3}, {1, 4, 7}, {1, 6, 5}, {2, 4, 6},
                                   {2, 5, 7}, {3, 5, 4}, {3, 6, 7}};
        for (const auto& t : triples) {
            const int a = t[0] - 1, b = t[1] - 1, c = t[2] - 1;
            p[a][b][c] = p[b][c][a] = p[c][a][b] = 1.0;
            p[b][a][c] = p[a][c][b] = p[c][b][a] = -1.0;
        }
        return p;
    }();
    return table;
}

// Octonion product restricted to imaginary units, returned as an 8-vector
// (component 0 is the real part).
Eigen::VectorXd octonion_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const auto& p = psi_table();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(8);
    z(0) = x(0) * y(0) - x.tail(7).dot(y.tail(7));
    z.tail(7) = x(0) * y.tail(7) + y(0) * x.tail(7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            const double xy = x(i + 1) * y(j + 1);
            if (xy == 0.0)
                continue;
            for (int k = 0; k < 7; ++k)
                z(k + 1) += xy * p[i][j][k];
        }
    return z;
}

// Basis of the derivation algebra of the octonions restricted to the
// imaginary part: real 7x7 D with D(e_i e_j) = D(e_i) e_j + e_i D(e_j).
std::vector<Matrix> g2_derivations()
{
    Eigen::MatrixXd system(8 * 49, 49);
    for (int u = 0; u < 49; ++u) {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(8, 8);
        d(1 + u / 7, 1 + u % 7) = 1.0;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                Eigen::VectorXd ei = Eigen::VectorXd::Unit(8, i + 1);
                Eigen::VectorXd ej = Eigen::VectorXd::Unit(8, j + 1);
                const Eigen::VectorXd lhs = d * octonion_product(ei, ej);
                const Eigen::VectorXd rhs =
                    octonion_product(d * ei, ej) + octonion_product(ei, d * ej);
                system.block(8 * (7 * i + j), u, 8, 1) = lhs - rhs;
            }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    std::vector<Matrix> out;
    for (Eigen::Index k = 0; k < 49; ++k) {
        const double sv = k < s.size() ? s(k) : 0.0;
        if (sv > 1e-9 * s(0))
            continue;
        Eigen::MatrixXd m(7, 7);
        for (int u = 0; u < 49; ++u)
            m(u / 7, u % 7) = svd.matrixV()(u, k);
        out.push_back(m.cast<cplx>());
    }
    if (out.size() != 14)
        throw Error("octonion derivation algebra has dimension " + std::to_string(out.size()) +
                    ", expected 14");
    return out;
}

std::vector<CompletenessTerm> completeness_terms(const GroupSpec& spec, int d,
                                                 const Matrix& j, const std::vector<Matrix>& psi)
{
    using Kind = CompletenessTerm::Kind;
    const Matrix id = Matrix::Identity(d, d);
    std::vector<CompletenessTerm> t;
    switch (spec.family) {
    case Family::SO:
        t.push_back({Kind::Cross, 1.0, id, id, {}});
        t.push_back({Kind::Swap, -1.0, {}, {}, {}});
        break;
    case Family::Sp:
        t.push_back({Kind::Cross, 1.0, j, j, {}});
        t.push_back({Kind::Swap, -1.0, {}, {}, {}});
        break;
    case Family::U:
        t.push_back({Kind::Swap, -1.0, {}, {}, {}});
        break;
    case Family::SU:
        t.push_back({Kind::Swap, -1.0, {}, {}, {}});
        t.push_back({Kind::Trace, 1.0 / spec.n, {}, {}, {id}});
        break;
    case Family::G2:
        t.push_back({Kind::Cross, 0.5, id, id, {}});
        t.push_back({Kind::Swap, -0.5, {}, {}, {}});
        t.push_back({Kind::Trace, -1.0 / 6.0, {}, {}, psi});
        break;
    case Family::U1Power:
        t.push_back({Kind::Swap, -static_cast<double>(spec.n) * spec.n, {}, {}, {}});
        break;
    }
    return t;
}

int rep_dim(const GroupSpec& spec)
{
    switch (spec.family) {
    case Family::SO:
    case Family::U:
    case Family::SU:
        return spec.n;
    case Family::Sp:
        return 2 * spec.n;
    case Family::G2:
        return 7;
    case Family::U1Power:
        return 1;
    }
    return 0;
}

std::vector<Matrix> psi_matrices()
{
    std::vector<Matrix> out;
    const auto& p = psi_table();
    for (int r = 0; r < 7; ++r) {
        Matrix m(7, 7);
        for (int i = 0; i < 7; ++i)
            for (int k = 0; k < 7; ++k)
                m(i, k) = p[r][i][k];
        out.push_back(m);
    }
    return out;
}

} // namespace

std::string family_key(Family f)
{
    switch (f) {
    case Family::SO: return "so";
    case Family::Sp: return "sp";
    case Family::U: return "u";
    case Family::SU: return "su";
    case Family::G2: return "g2";
    case Family::U1Power: return "u1";
    }
    return "?";
}

Family parse_family(const std::string& key)
{
    std::string k = key;
    std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
    if (k == "so") return Family::SO;
    if (k == "sp") return Family::Sp;
    if (k == "u") return Family::U;
    if (k == "su") return Family::SU;
    if (k == "g2") return Family::G2;
    if (k == "u1" || k == "u1power") return Family::U1Power;
    throw DomainError("unknown group family '" + key + "'");
}

void GroupSpec::validate() const
{
    switch (family) {
    case Family::SO:
        if (n < 2) throw DomainError("SO(N) requires N >= 2");
        break;
    case Family::Sp:
    case Family::U:
        if (n < 1) throw DomainError(name() + " requires N >= 1");
        break;
    case Family::SU:
        if (n < 2) throw DomainError("SU(N) requires N >= 2");
        break;
    case Family::G2:
        if (n != 7) throw DomainError("G2 is used in its 7-dimensional representation; n must be 7");
        break;
    case Family::U1Power:
        if (n == 0) throw DomainError("U(1) character exponent must be nonzero");
        break;
    }
}

std::string GroupSpec::name() const
{
    switch (family) {
    case Family::SO: return "SO(" + std::to_string(n) + ")";
    case Family::Sp: return "Sp(" + std::to_string(n) + ")";
    case Family::U: return "U(" + std::to_string(n) + ")";
    case Family::SU: return "SU(" + std::to_string(n) + ")";
    case Family::G2: return "G2";
    case Family::U1Power: return "U(1)^" + std::to_string(n);
    }
    return "?";
}

double RepData::kappa(const Matrix& x, const Matrix& y) const
{
    return -kappa_scale * (x * y).trace().real();
}

double octonion_psi(int i, int j, int k) { return psi_table().at(i).at(j).at(k); }

RepData build_representation(const GroupSpec& spec)
{
    spec.validate();
    RepData rep;
    rep.spec = spec;
    rep.dim = rep_dim(spec);
    const int d = rep.dim;

    switch (spec.family) {
    case Family::SO:
        // Normalized so that K_ijkl = d_ik d_jl - d_il d_jk.
        rep.kappa_scale = 0.5;
        rep.generators = orthonormalize(so_generators(d), rep.kappa_scale);
        rep.transpose_conjugator = Matrix::Identity(d, d);
        break;
    case Family::Sp:
        rep.kappa_scale = 0.5;
        rep.j = symplectic_form(spec.n);
        rep.generators = orthonormalize(sp_candidates(spec.n), rep.kappa_scale);
        rep.transpose_conjugator = rep.j;
        break;
    case Family::U:
        rep.generators = orthonormalize(u_candidates(d, false), 1.0);
        break;
    case Family::SU:
        rep.generators = orthonormalize(u_candidates(d, true), 1.0);
        break;
    case Family::G2:
        rep.psi = psi_matrices();
        rep.generators = orthonormalize(g2_derivations(), 1.0);
        rep.transpose_conjugator = Matrix::Identity(d, d);
        break;
    case Family::U1Power: {
        Matrix xi(1, 1);
        xi(0, 0) = I * static_cast<double>(spec.n);
        rep.generators = {xi};
        rep.kappa_scale = spec.n == 0 ? 1.0 : 1.0 / (static_cast<double>(spec.n) * spec.n);
        break;
    }
    }

    rep.casimir = Matrix::Zero(d, d);
    for (const auto& x : rep.generators)
        rep.casimir += x * x;
    rep.lambda = rep.casimir.trace().real() / d;
    rep.completeness = completeness_terms(spec, d, rep.j, rep.psi);
    return rep;
}

RepPtr make_rep(const GroupSpec& spec)
{
    return std::make_shared<const RepData>(build_representation(spec));
}

Tensor split_casimir(const RepData& rep)
{
    const auto d = static_cast<std::size_t>(rep.dim);
    Tensor k({d, d, d, d});
    for (const auto& x : rep.generators)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const cplx xij = x(i, j);
                if (xij == 0.0)
                    continue;
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b)
                        k({i, j, a, b}) += xij * x(a, b);
            }
    return k;
}

Tensor completeness_tensor(const std::vector<CompletenessTerm>& terms, int dim)
{
    using Kind = CompletenessTerm::Kind;
    const auto d = static_cast<std::size_t>(dim);
    Tensor k({d, d, d, d});
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) {
                    cplx v = 0.0;
                    for (const auto& t : terms) {
                        switch (t.kind) {
                        case Kind::Cross:
                            v += t.coeff * t.a(i, a) * t.b(j, b);
                            break;
                        case Kind::Swap:
                            if (i == b && j == a)
                                v += t.coeff;
                            break;
                        case Kind::Trace:
                            for (const auto& m : t.ms)
                                v += t.coeff * m(i, j) * m(a, b);
                            break;
                        }
                    }
                    k({i, j, a, b}) = v;
                }
    return k;
}

Tensor closed_form_completeness(const GroupSpec& spec)
{
    spec.validate();
    const int d = rep_dim(spec);
    const Matrix j = spec.family == Family::Sp ? symplectic_form(spec.n) : Matrix();
    const auto psi = spec.family == Family::G2 ? psi_matrices() : std::vector<Matrix>{};
    return completeness_tensor(completeness_terms(spec, d, j, psi), d);
}

double casimir_eigenvalue(const GroupSpec& spec)
{
    spec.validate();
    const double n = spec.n;
    switch (spec.family) {
    case Family::SO: return 1.0 - n;
    case Family::Sp: return -(1.0 + 2.0 * n);
    case Family::U: return -n;
    case Family::SU: return -n + 1.0 / n;
    case Family::G2: return -2.0;
    case Family::U1Power: return -n * n;
    }
    return 0.0;
}

double group_residual(const RepData& rep, const Matrix& g)
{
    const int d = rep.dim;
    if (g.rows() != d || g.cols() != d)
        throw ShapeError("group element must be " + std::to_string(d) + "x" + std::to_string(d));
    double res = (g.adjoint() * g - Matrix::Identity(d, d)).norm();
    switch (rep.spec.family) {
    case Family::SU:
        res = std::max(res, std::abs(g.determinant() - 1.0));
        break;
    case Family::SO:
        res = std::max(res, g.imag().cwiseAbs().maxCoeff());
        res = std::max(res, std::abs(g.determinant() - 1.0));
        break;
    case Family::Sp:
        res = std::max(res, (g.transpose() * rep.j * g - rep.j).norm());
        break;
    case Family::G2: {
        res = std::max(res, g.imag().cwiseAbs().maxCoeff());
        const Eigen::MatrixXd gr = g.real();
        const auto& p = psi_table();
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                // g(e_i e_j) - (g e_i)(g e_j), imaginary part.
                Eigen::VectorXd lhs = Eigen::VectorXd::Zero(7);
                for (int k = 0; k < 7; ++k)
                    if (p[i][j][k] != 0.0)
                        lhs += p[i][j][k] * gr.col(k);
                Eigen::VectorXd x = Eigen::VectorXd::Zero(8), y = Eigen::VectorXd::Zero(8);
                x.tail(7) = gr.col(i);
                y.tail(7) = gr.col(j);
                const Eigen::VectorXd prod = octonion_product(x, y);
                const double real_part = prod(0) + (i == j ? 1.0 : 0.0);
                res = std::max(res, std::hypot((lhs - prod.tail(7)).norm(), real_part));
            }
        break;
    }
    case Family::U:
    case Family::U1Power:
        break;
    }
    return res;
}

} // namespace lgm

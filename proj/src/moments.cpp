#include "lgm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "lgm/errors.hpp"
#include "lgm/linalg.hpp"

namespace lgm {

namespace {

std::size_t checked_dim(int d, int n, int n_dual, std::size_t budget)
{
    if (n < 0 || n_dual < 0)
        throw DomainError("tensor pattern (" + std::to_string(n) + "," + std::to_string(n_dual) +
                          ") has a negative entry");
    std::size_t dim = 1;
    for (int k = 0; k < n + n_dual; ++k) {
        dim *= static_cast<std::size_t>(d);
        if (dim > budget)
            break;
    }
    if (dim > budget) {
        const double need = std::pow(static_cast<double>(d), n + n_dual);
        std::ostringstream os;
        os << "tensor representation (" << n << "," << n_dual << ") of dimension " << d
           << " needs D = " << need << " > budget " << budget;
        throw BudgetError(os.str());
    }
    return dim;
}

struct KEntry {
    int p, q;
    double re, im;
};

// Nonzeros of K grouped by a pair of its indices.
struct KIndex {
    int d;
    std::vector<std::vector<KEntry>> vv, dd, vd;
};

KIndex index_split_casimir(const RepData& rep)
{
    const Tensor k = split_casimir(rep);
    const int d = rep.dim;
    KIndex out{d, {}, {}, {}};
    const auto dd2 = static_cast<std::size_t>(d * d);
    out.vv.resize(dd2);
    out.dd.resize(dd2);
    out.vd.resize(dd2);
    double top = 0.0;
    for (auto v : k.data())
        top = std::max(top, std::abs(v));
    const double floor = 1e-13 * std::max(1.0, top);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b),
                               uc = static_cast<std::size_t>(c), ue = static_cast<std::size_t>(e);
                    const cplx v = k({ua, ub, uc, ue});
                    if (std::abs(v) <= floor)
                        continue;
                    // K_{i j k l}: V-V rows (i,k) -> cols (j,l); dual-dual rows (j,l) -> cols (i,k);
                    // V-dual rows (i,l) -> cols (j,k).
                    out.vv[ua * d + uc].push_back({b, e, v.real(), v.imag()});
                    out.dd[ub * d + ue].push_back({a, c, v.real(), v.imag()});
                    out.vd[ua * d + ue].push_back({b, c, v.real(), v.imag()});
                }
    return out;
}

int find_root(std::vector<std::size_t>& parent, std::size_t x)
{
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return static_cast<int>(x);
}

} // namespace

MeasureSpec MeasureSpec::brownian(double t)
{
    MeasureSpec m;
    m.kind = Kind::Brownian;
    m.t = t;
    m.validate();
    return m;
}

MeasureSpec MeasureSpec::wilson(double beta, std::vector<WilsonLoop> plaquettes)
{
    MeasureSpec m;
    m.kind = Kind::Wilson;
    m.beta = beta;
    m.plaquettes = std::move(plaquettes);
    m.validate();
    return m;
}

void MeasureSpec::validate() const
{
    switch (kind) {
    case Kind::Haar:
        break;
    case Kind::Brownian:
        if (!(t > 0.0) || !std::isfinite(t))
            throw DomainError("Brownian measure needs t > 0");
        break;
    case Kind::Wilson:
        if (!std::isfinite(beta))
            throw DomainError("Wilson measure needs a finite beta");
        if (plaquettes.empty())
            throw DomainError("Wilson measure needs at least one plaquette");
        for (const auto& p : plaquettes) {
            if (p.degree() != 1)
                throw DomainError("plaquettes must be linear loops (one group slot)");
            if (!(p.rep()->spec == plaquettes.front().rep()->spec))
                throw DomainError("plaquettes must share one representation");
        }
        break;
    }
}

std::string MeasureSpec::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
    case Kind::Haar:
        return "haar";
    case Kind::Brownian:
        os << "brownian:t=" << t;
        return os.str();
    case Kind::Wilson:
        os << "wilson:beta=" << beta << ",plaquettes=" << plaquettes.size();
        return os.str();
    }
    return "?";
}

Tensor CasimirBlocks::dense() const
{
    Tensor out({dim, dim});
    auto data = out.data();
    for (const auto& b : blocks)
        for (std::size_t r = 0; r < b.index.size(); ++r)
            for (std::size_t c = 0; c < b.index.size(); ++c)
                data[b.index[r] * dim + b.index[c]] =
                    b.c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

CasimirBlocks casimir_blocks(const RepData& rep, int n, int n_dual, std::size_t budget)
{
    if (n + n_dual < 1)
        throw DomainError("tensor_casimir needs n + n' >= 1");
    const int d = rep.dim;
    const std::size_t dim = checked_dim(d, n, n_dual, budget);
    const int k = n + n_dual;
    const KIndex kidx = index_split_casimir(rep);

    std::vector<std::size_t> stride(static_cast<std::size_t>(k));
    for (int p = k - 1, s = 1; p >= 0; --p, s *= d)
        stride[static_cast<std::size_t>(p)] = static_cast<std::size_t>(s);

    struct Triplet {
        std::size_t r, c;
        cplx v;
    };
    std::vector<Triplet> triplets;
    std::vector<std::size_t> parent(dim);
    std::iota(parent.begin(), parent.end(), std::size_t{0});

    std::vector<cplx> acc(dim, 0.0);
    std::vector<char> seen(dim, 0);
    std::vector<std::size_t> touched;
    std::vector<int> digit(static_cast<std::size_t>(k));
    const double diag = rep.lambda * k;

    for (std::size_t row = 0; row < dim; ++row) {
        std::size_t x = row;
        for (int p = k - 1; p >= 0; --p) {
            digit[static_cast<std::size_t>(p)] = static_cast<int>(x % static_cast<std::size_t>(d));
            x /= static_cast<std::size_t>(d);
        }
        auto add = [&](std::size_t col, cplx v) {
            if (!seen[col]) {
                seen[col] = 1;
                touched.push_back(col);
            }
            acc[col] += v;
        };
        add(row, diag);
        for (int r = 0; r < k; ++r)
            for (int s = r + 1; s < k; ++s) {
                const bool rd = r >= n, sd = s >= n;
                const int ir = digit[static_cast<std::size_t>(r)], is = digit[static_cast<std::size_t>(s)];
                const auto key = static_cast<std::size_t>(ir * d + is);
                const auto& list = !rd && !sd ? kidx.vv[key] : (rd && sd ? kidx.dd[key] : kidx.vd[key]);
                const double w = (rd != sd) ? -2.0 : 2.0;
                const std::size_t base = row - static_cast<std::size_t>(ir) * stride[static_cast<std::size_t>(r)] -
                                         static_cast<std::size_t>(is) * stride[static_cast<std::size_t>(s)];
                for (const auto& e : list)
                    add(base + static_cast<std::size_t>(e.p) * stride[static_cast<std::size_t>(r)] +
                            static_cast<std::size_t>(e.q) * stride[static_cast<std::size_t>(s)],
                        w * cplx{e.re, e.im});
            }
        for (auto col : touched) {
            if (std::abs(acc[col]) > 1e-14) {
                triplets.push_back({row, col, acc[col]});
                const auto a = static_cast<std::size_t>(find_root(parent, row));
                const auto b = static_cast<std::size_t>(find_root(parent, col));
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
            acc[col] = 0.0;
            seen[col] = 0;
        }
        touched.clear();
    }

    CasimirBlocks out;
    out.n = n;
    out.n_dual = n_dual;
    out.dim = dim;
    std::vector<int> block_of(dim, -1);
    std::vector<std::size_t> local(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
        const auto root = static_cast<std::size_t>(find_root(parent, i));
        if (block_of[root] < 0) {
            block_of[root] = static_cast<int>(out.blocks.size());
            out.blocks.emplace_back();
        }
        auto& b = out.blocks[static_cast<std::size_t>(block_of[root])];
        block_of[i] = block_of[root];
        local[i] = b.index.size();
        b.index.push_back(i);
    }
    for (auto& b : out.blocks) {
        const auto m = static_cast<Eigen::Index>(b.index.size());
        b.c = Matrix::Zero(m, m);
    }
    for (const auto& t : triplets) {
        auto& b = out.blocks[static_cast<std::size_t>(block_of[t.r])];
        b.c(static_cast<Eigen::Index>(local[t.r]), static_cast<Eigen::Index>(local[t.c])) += t.v;
    }
    return out;
}

Tensor tensor_casimir(const RepData& rep, int n, int n_dual, std::size_t budget)
{
    return casimir_blocks(rep, n, n_dual, budget).dense();
}

CasimirSpectrum::CasimirSpectrum(RepPtr rep, int n, int n_dual, std::size_t budget)
    : rep_(std::move(rep)), n_(n), n_dual_(n_dual)
{
    auto cb = casimir_blocks(*rep_, n, n_dual, budget);
    dim_ = cb.dim;
    cutoff_ = 1e-8 * std::max(1.0, std::abs(rep_->lambda) * (n + n_dual));
    double smallest_nonzero = std::numeric_limits<double>::infinity();
    for (auto& b : cb.blocks) {
        auto eig = eig_hermitian(b.c);
        for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
            const double e = std::abs(eig.eigenvalues(i));
            if (e >= cutoff_)
                smallest_nonzero = std::min(smallest_nonzero, e);
        }
        blocks_.push_back({std::move(b.index), std::move(eig.eigenvalues), std::move(eig.eigenvectors)});
    }
    if (smallest_nonzero < 10.0 * cutoff_) {
        std::ostringstream os;
        os << "tensor Casimir has an eigenvalue of size " << smallest_nonzero
           << " within 10x of the null cutoff " << cutoff_ << "; refusing to classify it";
        throw SpectralGapError(os.str());
    }
}

std::vector<SpectrumEntry> CasimirSpectrum::spectrum() const
{
    std::vector<double> all;
    all.reserve(dim_);
    for (const auto& b : blocks_)
        for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i)
            all.push_back(b.eigenvalues(i));
    std::sort(all.begin(), all.end(), std::greater<>());
    std::vector<SpectrumEntry> out;
    for (double v : all) {
        if (std::abs(v) < cutoff_)
            v = 0.0;
        const double tol = std::max(cutoff_, 1e-7 * std::abs(v));
        if (!out.empty() && std::abs(out.back().value - v) <= tol) {
            // running mean keeps the representative centred
            auto& e = out.back();
            e.value = (e.value * e.multiplicity + v) / (e.multiplicity + 1);
            ++e.multiplicity;
        } else {
            out.push_back({v, 1});
        }
    }
    return out;
}

MomentOperator MomentOperator::haar(std::shared_ptr<const CasimirSpectrum> spec)
{
    MomentOperator op;
    op.kind_ = Kind::Haar;
    op.spectrum_ = std::move(spec);
    const double cut = op.spectrum_->null_cutoff();
    for (const auto& b : op.spectrum_->blocks()) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i)
            if (std::abs(b.eigenvalues(i)) < cut)
                keep.push_back(i);
        if (keep.empty())
            continue;
        Matrix v(b.eigenvectors.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j)
            v.col(static_cast<Eigen::Index>(j)) = b.eigenvectors.col(keep[j]);
        op.rank_ += static_cast<int>(keep.size());
        op.blocks_.push_back({b.index, v * v.adjoint()});
    }
    op.index_blocks();
    return op;
}

MomentOperator MomentOperator::brownian(std::shared_ptr<const CasimirSpectrum> spec, double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("brownian_moment needs t > 0");
    MomentOperator op;
    op.kind_ = Kind::Brownian;
    op.t_ = t;
    op.spectrum_ = std::move(spec);
    const double cut = op.spectrum_->null_cutoff();
    for (const auto& b : op.spectrum_->blocks()) {
        Eigen::VectorXd e(b.eigenvalues.size());
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            e(i) = std::exp(0.5 * t * b.eigenvalues(i));
            if (std::abs(b.eigenvalues(i)) < cut)
                ++op.rank_;
        }
        op.blocks_.push_back(
            {b.index, b.eigenvectors * e.cast<cplx>().asDiagonal() * b.eigenvectors.adjoint()});
    }
    op.index_blocks();
    return op;
}

void MomentOperator::index_blocks()
{
    block_of_.assign(dim(), -1);
    local_of_.assign(dim(), 0);
    for (std::size_t k = 0; k < blocks_.size(); ++k)
        for (std::size_t i = 0; i < blocks_[k].index.size(); ++i) {
            block_of_[blocks_[k].index[i]] = static_cast<int>(k);
            local_of_[blocks_[k].index[i]] = static_cast<int>(i);
        }
}

cplx MomentOperator::entry(std::size_t row, std::size_t col) const
{
    if (row >= dim() || col >= dim())
        throw ShapeError("MomentOperator::entry: index out of range");
    const int b = block_of_[row];
    if (b < 0 || block_of_[col] != b)
        return 0.0;
    return blocks_[static_cast<std::size_t>(b)].m(local_of_[row], local_of_[col]);
}

Matrix MomentOperator::dense() const
{
    const auto d = static_cast<Eigen::Index>(dim());
    Matrix out = Matrix::Zero(d, d);
    for (const auto& b : blocks_)
        for (std::size_t r = 0; r < b.index.size(); ++r)
            for (std::size_t c = 0; c < b.index.size(); ++c)
                out(static_cast<Eigen::Index>(b.index[r]), static_cast<Eigen::Index>(b.index[c])) =
                    b.m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

Vector MomentOperator::apply(const Vector& v) const
{
    if (static_cast<std::size_t>(v.size()) != dim())
        throw ShapeError("MomentOperator::apply: vector has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(dim()));
    Vector out = Vector::Zero(v.size());
    for (const auto& b : blocks_) {
        Vector x(static_cast<Eigen::Index>(b.index.size()));
        for (std::size_t i = 0; i < b.index.size(); ++i)
            x(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(b.index[i]));
        const Vector y = b.m * x;
        for (std::size_t i = 0; i < b.index.size(); ++i)
            out(static_cast<Eigen::Index>(b.index[i])) = y(static_cast<Eigen::Index>(i));
    }
    return out;
}

cplx MomentOperator::contract(const LoopContraction& a) const
{
    if (!(a.pattern() == SlotPattern{n(), n_dual()}))
        throw ShapeError("MomentOperator::contract: loop pattern (" + std::to_string(a.pattern().n) +
                         "," + std::to_string(a.pattern().n_dual) + ") does not match operator (" +
                         std::to_string(n()) + "," + std::to_string(n_dual()) + ")");
    cplx sum = 0.0;
    for (const auto& b : blocks_)
        for (std::size_t r = 0; r < b.index.size(); ++r)
            for (std::size_t c = 0; c < b.index.size(); ++c) {
                const cplx t = b.m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                if (t != 0.0)
                    sum += a.entry(b.index[r], b.index[c]) * t;
            }
    return sum;
}

MomentOperator haar_moment(const RepPtr& rep, int n, int n_dual, std::size_t budget)
{
    return MomentOperator::haar(std::make_shared<const CasimirSpectrum>(rep, n, n_dual, budget));
}

MomentOperator brownian_moment(const RepPtr& rep, int n, int n_dual, double t, std::size_t budget)
{
    return MomentOperator::brownian(std::make_shared<const CasimirSpectrum>(rep, n, n_dual, budget), t);
}

MomentEngine::MomentEngine(RepPtr rep, std::size_t budget) : rep_(std::move(rep)), budget_(budget)
{
    if (!rep_)
        throw DomainError("MomentEngine: missing representation");
}

std::shared_ptr<const CasimirSpectrum> MomentEngine::spectrum(int n, int n_dual)
{
    auto& slot = spectra_[{n, n_dual}];
    if (!slot)
        slot = std::make_shared<const CasimirSpectrum>(rep_, n, n_dual, budget_);
    return slot;
}

const MomentOperator& MomentEngine::haar(int n, int n_dual)
{
    const auto key = std::make_pair(n, n_dual);
    auto it = haar_.find(key);
    if (it == haar_.end())
        it = haar_.emplace(key, MomentOperator::haar(spectrum(n, n_dual))).first;
    return it->second;
}

MomentOperator MomentEngine::brownian(int n, int n_dual, double t)
{
    auto& cache = brownian_[{n, n_dual}];
    auto it = cache.find(t);
    if (it == cache.end())
        it = cache.emplace(t, MomentOperator::brownian(spectrum(n, n_dual), t)).first;
    return it->second;
}

cplx MomentEngine::expect(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure)
{
    for (const auto& w : loops)
        if (!(w.rep()->spec == rep_->spec))
            throw DomainError("expect: loop representation " + w.rep()->spec.name() +
                              " differs from engine representation " + rep_->spec.name());
    if (measure.kind == MeasureSpec::Kind::Wilson)
        throw DomainError("expect: the Wilson measure has no exact evaluator; use Monte Carlo");
    measure.validate();
    const LoopContraction a(loops);
    const auto& p = a.pattern();
    if (p.n + p.n_dual == 0)
        return a.constant();
    if (a.constant() == 0.0)
        return 0.0;
    if (measure.kind == MeasureSpec::Kind::Haar)
        return a.constant() * haar(p.n, p.n_dual).contract(a);
    return a.constant() * brownian(p.n, p.n_dual, measure.t).contract(a);
}

cplx MomentEngine::expect(const LoopTerm& term, const MeasureSpec& measure)
{
    if (term.coeff == 0.0)
        return 0.0;
    return term.coeff * expect(term.loops, measure);
}

cplx MomentEngine::expect(const LoopSum& sum, const MeasureSpec& measure)
{
    cplx v = 0.0;
    for (const auto& t : sum.terms())
        v += expect(t, measure);
    return v;
}

cplx expect_exact(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure, std::size_t budget)
{
    if (loops.empty())
        return 1.0;
    MomentEngine engine(loops.front().rep(), budget);
    return engine.expect(loops, measure);
}

std::string spanning_source_key(SpanningSource s)
{
    switch (s) {
    case SpanningSource::Permutations:
        return "permutations";
    case SpanningSource::Pairings:
        return "pairings";
    case SpanningSource::G2u:
        return "g2u";
    case SpanningSource::Nullspace:
        return "nullspace";
    }
    return "?";
}

SpanningSource parse_spanning_source(const std::string& key)
{
    std::string k = key;
    std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
    if (k == "permutations")
        return SpanningSource::Permutations;
    if (k == "pairings")
        return SpanningSource::Pairings;
    if (k == "g2u")
        return SpanningSource::G2u;
    if (k == "nullspace")
        return SpanningSource::Nullspace;
    throw DomainError("unknown spanning source '" + key +
                      "' (expected permutations, pairings, g2u or nullspace)");
}

std::vector<std::vector<int>> permutations(int n)
{
    std::vector<int> p(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do
        out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int cycle_count(const std::vector<int>& sigma)
{
    std::vector<char> seen(sigma.size(), 0);
    int cycles = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (seen[i])
            continue;
        ++cycles;
        for (auto j = i; !seen[j]; j = static_cast<std::size_t>(sigma[j]))
            seen[j] = 1;
    }
    return cycles;
}

std::string cycle_notation(const std::vector<int>& sigma)
{
    std::vector<char> seen(sigma.size(), 0);
    std::string out;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (seen[i] || sigma[i] == static_cast<int>(i))
            continue;
        out += '(';
        for (auto j = i; !seen[j]; j = static_cast<std::size_t>(sigma[j])) {
            seen[j] = 1;
            if (out.back() != '(')
                out += ' ';
            out += std::to_string(j + 1);
        }
        out += ')';
    }
    return out.empty() ? "e" : out;
}

namespace {

// All perfect matchings of {0..k-1}.
void matchings(std::vector<int>& rest, std::vector<std::pair<int, int>>& cur,
               std::vector<std::vector<std::pair<int, int>>>& out)
{
    if (rest.empty()) {
        out.push_back(cur);
        return;
    }
    const int a = rest.front();
    for (std::size_t i = 1; i < rest.size(); ++i) {
        const int b = rest[i];
        std::vector<int> next;
        for (std::size_t j = 1; j < rest.size(); ++j)
            if (j != i)
                next.push_back(rest[j]);
        cur.emplace_back(a, b);
        matchings(next, cur, out);
        cur.pop_back();
    }
}

std::string slot_label(int s, int n)
{
    return s < n ? std::to_string(s + 1) : std::to_string(s - n + 1) + "'";
}

} // namespace

SpanningSet spanning_set(const RepPtr& rep, int n, int n_dual, SpanningSource source, std::size_t budget)
{
    const int d = rep->dim;
    const std::size_t dim = checked_dim(d, n, n_dual, budget);
    const int k = n + n_dual;
    SpanningSet ss;
    ss.rep = rep;
    ss.n = n;
    ss.n_dual = n_dual;
    ss.source = source;
    auto digits = [&](std::size_t x) {
        std::vector<int> dg(static_cast<std::size_t>(k));
        for (int p = k - 1; p >= 0; --p) {
            dg[static_cast<std::size_t>(p)] = static_cast<int>(x % static_cast<std::size_t>(d));
            x /= static_cast<std::size_t>(d);
        }
        return dg;
    };

    switch (source) {
    case SpanningSource::Permutations: {
        if (rep->spec.family != Family::U)
            throw DomainError("permutation spanning set needs the U family, got " + rep->spec.name());
        if (n != n_dual || n < 1)
            throw DomainError("permutation spanning set needs n = n' >= 1");
        const auto perms = permutations(n);
        ss.vectors = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(perms.size()));
        for (std::size_t c = 0; c < perms.size(); ++c) {
            ss.labels.push_back(cycle_notation(perms[c]));
            for (std::size_t x = 0; x < dim; ++x) {
                const auto dg = digits(x);
                bool hit = true;
                for (int q = 0; q < n && hit; ++q)
                    hit = dg[static_cast<std::size_t>(q)] ==
                          dg[static_cast<std::size_t>(n + perms[c][static_cast<std::size_t>(q)])];
                if (hit)
                    ss.vectors(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(c)) = 1.0;
            }
        }
        break;
    }
    case SpanningSource::Pairings: {
        const bool sp = rep->spec.family == Family::Sp;
        if (rep->spec.family != Family::SO && !sp)
            throw DomainError("pairing spanning set needs the SO or Sp family, got " + rep->spec.name());
        if (k < 2 || k % 2 != 0)
            throw DomainError("pairing spanning set needs an even, positive number of slots");
        std::vector<int> slots(static_cast<std::size_t>(k));
        std::iota(slots.begin(), slots.end(), 0);
        std::vector<std::pair<int, int>> cur;
        std::vector<std::vector<std::pair<int, int>>> all;
        matchings(slots, cur, all);
        ss.vectors = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(all.size()));
        for (std::size_t c = 0; c < all.size(); ++c) {
            std::string label;
            for (auto [a, b] : all[c])
                label += "{" + slot_label(a, n) + "," + slot_label(b, n) + "}";
            ss.labels.push_back(label);
            for (std::size_t x = 0; x < dim; ++x) {
                const auto dg = digits(x);
                cplx v = 1.0;
                for (auto [a, b] : all[c]) {
                    const int ia = dg[static_cast<std::size_t>(a)], ib = dg[static_cast<std::size_t>(b)];
                    // same-type pairs of Sp use the symplectic form, everything else delta
                    const bool form = sp && ((a < n) == (b < n));
                    v *= form ? rep->j(ia, ib) : cplx(ia == ib ? 1.0 : 0.0);
                    if (v == 0.0)
                        break;
                }
                ss.vectors(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(c)) = v;
            }
        }
        break;
    }
    case SpanningSource::G2u: {
        if (rep->spec.family != Family::G2 || n != 2 || n_dual != 0)
            throw DomainError("the u spanning set needs G2 with (n, n') = (2, 0)");
        ss.labels.push_back("u");
        ss.vectors = Matrix::Zero(static_cast<Eigen::Index>(dim), 1);
        for (int i = 0; i < d; ++i)
            ss.vectors(i * d + i, 0) = 1.0;
        break;
    }
    case SpanningSource::Nullspace: {
        if (k < 1)
            throw DomainError("null-space spanning set needs n + n' >= 1");
        const CasimirSpectrum spec(rep, n, n_dual, budget);
        std::vector<Vector> cols;
        for (const auto& b : spec.blocks())
            for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i) {
                if (std::abs(b.eigenvalues(i)) >= spec.null_cutoff())
                    continue;
                Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
                for (std::size_t r = 0; r < b.index.size(); ++r)
                    v(static_cast<Eigen::Index>(b.index[r])) = b.eigenvectors(static_cast<Eigen::Index>(r), i);
                cols.push_back(std::move(v));
            }
        ss.vectors = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            ss.vectors.col(static_cast<Eigen::Index>(c)) = cols[c];
            ss.labels.push_back("v" + std::to_string(c + 1));
        }
        break;
    }
    }
    return ss;
}

Matrix WeingartenMap::projector() const
{
    return spanning.vectors * wg * spanning.vectors.adjoint();
}

std::vector<double> WeingartenMap::pseudoinverse_residuals() const
{
    const Matrix gw = gram * wg, wgg = wg * gram;
    return {(gw * gram - gram).norm(), (wgg * wg - wg).norm(), (gw.adjoint() - gw).norm(),
            (wgg.adjoint() - wgg).norm()};
}

WeingartenMap weingarten(const SpanningSet& ss)
{
    if (ss.labels.empty() || ss.vectors.cols() == 0)
        throw DomainError("weingarten: empty spanning set");
    WeingartenMap w;
    w.spanning = ss;
    w.gram = ss.vectors.adjoint() * ss.vectors;
    w.wg = pseudoinverse(w.gram, 1e-10);
    return w;
}

} // namespace lgm

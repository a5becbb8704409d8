#include "lgm/wilson_loop.hpp"

#include <algorithm>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

// A loop word as a cyclic list of atoms: coefficient matrices (sign 0) and
// group letters g^{+1}, g^{-1}.
struct Atom {
    int sign = 0;
    Matrix m;
};
using Word = std::vector<Atom>;

Atom mat(Matrix m) { return {0, std::move(m)}; }

bool exact_identity(const Matrix& m)
{
    return m.rows() == m.cols() && m == Matrix::Identity(m.rows(), m.cols());
}

bool merge_matrices(Word& w)
{
    bool changed = false;
    Word out;
    for (auto& a : w) {
        if (a.sign == 0 && !out.empty() && out.back().sign == 0) {
            out.back().m = out.back().m * a.m;
            changed = true;
        } else {
            out.push_back(std::move(a));
        }
    }
    // cyclic wrap: trailing matrix times leading matrix
    if (out.size() > 1 && out.front().sign == 0 && out.back().sign == 0) {
        out.front().m = out.back().m * out.front().m;
        out.pop_back();
        changed = true;
    }
    w = std::move(out);
    return changed;
}

bool drop_identities(Word& w)
{
    const bool has_group = std::any_of(w.begin(), w.end(), [](const Atom& a) { return a.sign != 0; });
    if (!has_group)
        return false;
    const auto before = w.size();
    std::erase_if(w, [](const Atom& a) { return a.sign == 0 && exact_identity(a.m); });
    return w.size() != before;
}

bool cancel_pairs(Word& w)
{
    bool changed = false;
    Word out;
    for (auto& a : w) {
        if (a.sign != 0 && !out.empty() && out.back().sign == -a.sign) {
            out.pop_back();
            changed = true;
        } else {
            out.push_back(std::move(a));
        }
    }
    while (out.size() > 1 && out.front().sign != 0 && out.back().sign == -out.front().sign) {
        out.pop_back();
        out.erase(out.begin());
        changed = true;
    }
    w = std::move(out);
    return changed;
}

// Canonical factor list; returns true when the loop is constant.
bool to_factors(Word w, int dim, std::vector<LoopFactor>& factors)
{
    while (true) {
        bool changed = merge_matrices(w);
        changed |= drop_identities(w);
        changed |= cancel_pairs(w);
        if (!changed)
            break;
    }
    factors.clear();
    const Matrix id = Matrix::Identity(dim, dim);
    const auto last_group = std::find_if(w.rbegin(), w.rend(), [](const Atom& a) { return a.sign != 0; });
    if (last_group == w.rend()) {
        factors.push_back({w.empty() ? id : w.front().m, 0});
        return true;
    }
    // rotate so the word ends on a group letter
    const auto shift = static_cast<std::ptrdiff_t>(w.rend() - last_group);
    std::rotate(w.begin(), w.begin() + shift, w.end());
    Matrix pending = id;
    for (auto& a : w) {
        if (a.sign == 0) {
            pending = std::move(a.m);
        } else {
            factors.push_back({std::move(pending), a.sign});
            pending = id;
        }
    }
    return false;
}

Word atoms_of(const WilsonLoop& w)
{
    Word out;
    for (const auto& f : w.factors()) {
        out.push_back(mat(f.coeff));
        if (f.sign != 0)
            out.push_back({f.sign, {}});
    }
    return out;
}

void check_slot(const WilsonLoop& w, int slot, const char* what)
{
    if (slot < 1 || slot > w.degree())
        throw DomainError(std::string(what) + ": slot " + std::to_string(slot) +
                          " out of range for a loop of degree " + std::to_string(w.degree()));
}

// Atom position (gap before atoms[p]) where xi goes for a derivative at `slot`.
std::size_t insertion_point(const WilsonLoop& w, int slot)
{
    const auto f = static_cast<std::size_t>(slot - 1);
    return w.sign_at(slot) > 0 ? 2 * f + 2 : 2 * f + 1;
}

// atoms[from..to) read cyclically.
Word cyclic_segment(const Word& atoms, std::size_t from, std::size_t to)
{
    const std::size_t n = atoms.size();
    Word out;
    from %= n;
    to %= n;
    std::size_t k = from;
    do {
        out.push_back(atoms[k]);
        k = (k + 1) % n;
    } while (k != to);
    return out;
}

// Transpose of a word, using (g^s)^T = Q g^{-s} Q^T.
Word transposed(const Word& w, const RepData& rep)
{
    if (!rep.transpose_conjugator)
        throw Error("transpose of a loop word is not available for " + rep.spec.name());
    const Matrix& q = *rep.transpose_conjugator;
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (it->sign == 0) {
            out.push_back(mat(it->m.transpose()));
        } else {
            out.push_back(mat(q));
            out.push_back({-it->sign, {}});
            out.push_back(mat(q.transpose()));
        }
    }
    return out;
}

Word concat(std::initializer_list<Word> parts)
{
    Word out;
    for (const auto& p : parts)
        out.insert(out.end(), p.begin(), p.end());
    return out;
}

WilsonLoop loop_from(const RepPtr& rep, const Word& w, cplx scale = 1.0)
{
    std::vector<LoopFactor> f;
    for (const auto& a : w) {
        if (a.sign == 0)
            f.push_back({a.m, 0});
        else
            f.push_back({Matrix::Identity(rep->dim, rep->dim), a.sign});
    }
    return WilsonLoop(rep, std::move(f), scale);
}

void require_same_rep(const RepPtr& a, const RepPtr& b, const char* what)
{
    if (a != b && !(a && b && a->spec == b->spec))
        throw DomainError(std::string(what) + ": loops live in different representations");
}

} // namespace

GroupPoint::GroupPoint(Matrix element) : g(std::move(element)), ginv(group_inverse(g)) {}

WilsonLoop::WilsonLoop(RepPtr rep, std::vector<LoopFactor> factors, cplx scale)
    : rep_(std::move(rep)), scale_(scale)
{
    if (!rep_)
        throw DomainError("WilsonLoop: missing representation");
    const int d = rep_->dim;
    Word w;
    for (auto& f : factors) {
        if (f.coeff.rows() != d || f.coeff.cols() != d)
            throw ShapeError("WilsonLoop: coefficient is " + std::to_string(f.coeff.rows()) + "x" +
                             std::to_string(f.coeff.cols()) + ", representation dimension is " +
                             std::to_string(d));
        if (f.sign < -1 || f.sign > 1)
            throw DomainError("WilsonLoop: factor sign must be -1, 0 or +1");
        w.push_back(mat(std::move(f.coeff)));
        if (f.sign != 0)
            w.push_back({f.sign, {}});
    }
    constant_ = to_factors(std::move(w), d, factors_);
}

WilsonLoop WilsonLoop::linear(RepPtr rep, Matrix coeff, int sign, cplx scale)
{
    if (sign != 1 && sign != -1)
        throw DomainError("WilsonLoop::linear: sign must be +1 or -1");
    return WilsonLoop(std::move(rep), {{std::move(coeff), sign}}, scale);
}

WilsonLoop WilsonLoop::constant(RepPtr rep, cplx value)
{
    if (!rep)
        throw DomainError("WilsonLoop: missing representation");
    const int d = rep->dim;
    return WilsonLoop(rep, {{Matrix::Identity(d, d), 0}}, value / static_cast<double>(d));
}

int WilsonLoop::sign_at(int slot) const
{
    check_slot(*this, slot, "sign_at");
    return factors_[static_cast<std::size_t>(slot - 1)].sign;
}

cplx WilsonLoop::evaluate(const GroupPoint& p) const
{
    const int d = rep_->dim;
    if (p.g.rows() != d || p.g.cols() != d)
        throw ShapeError("WilsonLoop::evaluate: group element is " + std::to_string(p.g.rows()) +
                         "x" + std::to_string(p.g.cols()) + ", expected " + std::to_string(d) +
                         "x" + std::to_string(d));
    if (constant_)
        return scale_ * factors_.front().coeff.trace();
    Matrix acc = Matrix::Identity(d, d);
    for (const auto& f : factors_)
        acc = acc * f.coeff * (f.sign > 0 ? p.g : p.ginv);
    return scale_ * acc.trace();
}

cplx WilsonLoop::value_at_identity() const
{
    const int d = rep_->dim;
    Matrix acc = Matrix::Identity(d, d);
    for (const auto& f : factors_)
        acc = acc * f.coeff;
    return scale_ * acc.trace();
}

WilsonLoop WilsonLoop::scaled(cplx s) const
{
    WilsonLoop out = *this;
    out.scale_ *= s;
    return out;
}

WilsonLoop WilsonLoop::rotated(int k) const
{
    if (constant_ || factors_.empty())
        return *this;
    const int n = static_cast<int>(factors_.size());
    const int r = ((k % n) + n) % n;
    auto f = factors_;
    std::rotate(f.begin(), f.begin() + r, f.end());
    return WilsonLoop(rep_, std::move(f), scale_);
}

cplx LoopTerm::evaluate(const GroupPoint& p) const
{
    cplx v = coeff;
    for (const auto& w : loops)
        v *= w.evaluate(p);
    return v;
}

int LoopTerm::degree() const
{
    int n = 0;
    for (const auto& w : loops)
        n += w.degree();
    return n;
}

LoopSum::LoopSum(const WilsonLoop& w) : rep_(w.rep())
{
    terms_.push_back({1.0, {w}});
}

void LoopSum::add(LoopTerm term)
{
    for (const auto& w : term.loops) {
        if (!rep_)
            rep_ = w.rep();
        require_same_rep(rep_, w.rep(), "LoopSum::add");
    }
    terms_.push_back(std::move(term));
}

LoopSum& LoopSum::operator+=(const LoopSum& other)
{
    if (!rep_)
        rep_ = other.rep_;
    else if (other.rep_)
        require_same_rep(rep_, other.rep_, "LoopSum");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

LoopSum& LoopSum::operator*=(cplx s)
{
    for (auto& t : terms_)
        t.coeff *= s;
    return *this;
}

LoopSum operator*(const LoopSum& a, const LoopSum& b)
{
    LoopSum out(a.rep_ ? a.rep_ : b.rep_);
    if (a.rep_ && b.rep_)
        require_same_rep(a.rep_, b.rep_, "LoopSum product");
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_) {
            LoopTerm t{ta.coeff * tb.coeff, ta.loops};
            t.loops.insert(t.loops.end(), tb.loops.begin(), tb.loops.end());
            out.terms_.push_back(std::move(t));
        }
    return out;
}

cplx LoopSum::evaluate(const GroupPoint& p) const
{
    cplx v = 0.0;
    for (const auto& t : terms_)
        v += t.evaluate(p);
    return v;
}

LoopSum merge_at(const WilsonLoop& w1, int slot1, const WilsonLoop& w2, int slot2, Expansion how)
{
    require_same_rep(w1.rep(), w2.rep(), "merge_at");
    check_slot(w1, slot1, "merge_at");
    check_slot(w2, slot2, "merge_at");
    const RepPtr& rep = w1.rep();
    const double sgn = w1.sign_at(slot1) * w2.sign_at(slot2);
    const cplx scale = sgn * w1.scale() * w2.scale();

    const Word a1 = atoms_of(w1), a2 = atoms_of(w2);
    const auto p1 = insertion_point(w1, slot1), p2 = insertion_point(w2, slot2);
    // tr(X xi) and tr(Y xi) with X, Y the words read from just after xi.
    const Word x = cyclic_segment(a1, p1, p1);
    const Word y = cyclic_segment(a2, p2, p2);

    LoopSum out(rep);
    if (how == Expansion::GeneratorSum) {
        for (const auto& xi : rep->generators)
            out.add(scale, {loop_from(rep, concat({x, {mat(xi)}})),
                            loop_from(rep, concat({y, {mat(xi)}}))});
        return out;
    }
    using Kind = CompletenessTerm::Kind;
    for (const auto& t : rep->completeness) {
        switch (t.kind) {
        case Kind::Cross: // tr(A^T X^T B Y)
            out.add(scale * t.coeff,
                    {loop_from(rep, concat({{mat(t.a.transpose())}, transposed(x, *rep), {mat(t.b)}, y}))});
            break;
        case Kind::Swap: // tr(XY)
            out.add(scale * t.coeff, {loop_from(rep, concat({x, y}))});
            break;
        case Kind::Trace: // tr(MX) tr(MY)
            for (const auto& m : t.ms)
                out.add(scale * t.coeff, {loop_from(rep, concat({{mat(m)}, x})),
                                          loop_from(rep, concat({{mat(m)}, y}))});
            break;
        }
    }
    return out;
}

LoopSum total_merge(const WilsonLoop& w1, const WilsonLoop& w2, Expansion how)
{
    require_same_rep(w1.rep(), w2.rep(), "total_merge");
    LoopSum out(w1.rep());
    for (int s1 = 1; s1 <= w1.degree(); ++s1)
        for (int s2 = 1; s2 <= w2.degree(); ++s2)
            out += merge_at(w1, s1, w2, s2, how);
    return out;
}

LoopSum twist_at(const WilsonLoop& w, int slot1, int slot2, Expansion how)
{
    check_slot(w, slot1, "twist_at");
    check_slot(w, slot2, "twist_at");
    if (slot1 == slot2)
        throw DomainError("twist_at: slots must differ");
    const RepPtr& rep = w.rep();
    const double sgn = w.sign_at(slot1) * w.sign_at(slot2);
    const cplx scale = sgn * w.scale();

    const Word atoms = atoms_of(w);
    const auto p1 = insertion_point(w, slot1), p2 = insertion_point(w, slot2);
    // tr(X xi Y xi): X runs from p1 to p2, Y from p2 back to p1.
    const Word x = cyclic_segment(atoms, p1, p2);
    const Word y = cyclic_segment(atoms, p2, p1);

    LoopSum out(rep);
    if (how == Expansion::GeneratorSum) {
        for (const auto& xi : rep->generators)
            out.add(scale, {loop_from(rep, concat({x, {mat(xi)}, y, {mat(xi)}}))});
        return out;
    }
    using Kind = CompletenessTerm::Kind;
    for (const auto& t : rep->completeness) {
        switch (t.kind) {
        case Kind::Cross: // tr(X A Y^T B)
            out.add(scale * t.coeff,
                    {loop_from(rep, concat({x, {mat(t.a)}, transposed(y, *rep), {mat(t.b)}}))});
            break;
        case Kind::Swap: // tr(X) tr(Y)
            out.add(scale * t.coeff, {loop_from(rep, x), loop_from(rep, y)});
            break;
        case Kind::Trace: // tr(X M Y M)
            for (const auto& m : t.ms)
                out.add(scale * t.coeff, {loop_from(rep, concat({x, {mat(m)}, y, {mat(m)}}))});
            break;
        }
    }
    return out;
}

LoopSum total_twist(const WilsonLoop& w, Expansion how)
{
    LoopSum out(w.rep());
    const int n = w.degree();
    for (int s1 = 1; s1 <= n; ++s1)
        for (int s2 = 1; s2 <= n; ++s2)
            if (s1 != s2)
                out += twist_at(w, s1, s2, how);
    return out;
}

LoopSum laplacian(const WilsonLoop& w, Expansion how)
{
    LoopSum out(w.rep());
    out.add(w.rep()->lambda * w.degree(), {w});
    out += total_twist(w, how);
    return out;
}

LoopContraction::LoopContraction(const std::vector<WilsonLoop>& loops)
{
    for (const auto& w : loops) {
        if (dim_ == 0)
            dim_ = w.rep()->dim;
        else if (w.rep()->dim != dim_)
            throw DomainError("LoopContraction: loops live in different representations");
        if (w.is_constant()) {
            constant_ *= w.value_at_identity();
            continue;
        }
        constant_ *= w.scale();
        Cycle c;
        for (const auto& f : w.factors()) {
            c.coeffs.push_back(f.coeff);
            if (f.sign > 0)
                c.slots.push_back({pattern_.n++, false});
            else
                c.slots.push_back({pattern_.n_dual++, true});
        }
        cycles_.push_back(std::move(c));
    }
}

cplx LoopContraction::entry(std::size_t row, std::size_t col) const
{
    const int n = pattern_.n, nd = pattern_.n_dual;
    const auto d = static_cast<std::size_t>(dim_);
    // digits, most significant first: (i_1..i_n, i'_1..i'_n')
    std::vector<int> r(static_cast<std::size_t>(n + nd)), c(r.size());
    for (int k = n + nd - 1; k >= 0; --k) {
        r[static_cast<std::size_t>(k)] = static_cast<int>(row % d);
        c[static_cast<std::size_t>(k)] = static_cast<int>(col % d);
        row /= d;
        col /= d;
    }
    cplx v = 1.0;
    std::vector<int> ys, xs;
    for (const auto& cy : cycles_) {
        const std::size_t m = cy.slots.size();
        ys.resize(m);
        xs.resize(m);
        for (std::size_t f = 0; f < m; ++f) {
            const auto& s = cy.slots[f];
            if (!s.dual) { // g_{i j}
                ys[f] = r[static_cast<std::size_t>(s.position)];
                xs[f] = c[static_cast<std::size_t>(s.position)];
            } else { // g^{-1}_{j' i'}
                ys[f] = c[static_cast<std::size_t>(n + s.position)];
                xs[f] = r[static_cast<std::size_t>(n + s.position)];
            }
        }
        for (std::size_t f = 0; f < m; ++f) {
            const int prev = xs[(f + m - 1) % m];
            v *= cy.coeffs[f](prev, ys[f]);
            if (v == 0.0)
                return 0.0;
        }
    }
    return v;
}

LoopTensor loops_to_tensor(const std::vector<WilsonLoop>& loops)
{
    LoopContraction lc(loops);
    LoopTensor out;
    out.pattern = lc.pattern();
    out.constant = lc.constant();
    const auto d = static_cast<std::size_t>(lc.dim());
    const std::size_t k = static_cast<std::size_t>(out.pattern.n + out.pattern.n_dual);
    std::size_t side = 1;
    for (std::size_t i = 0; i < k; ++i)
        side *= d;
    out.coeff = Tensor(std::vector<std::size_t>(2 * k, d));
    auto data = out.coeff.data();
    for (std::size_t a = 0; a < side; ++a)
        for (std::size_t b = 0; b < side; ++b)
            data[a * side + b] = lc.entry(a, b);
    return out;
}

} // namespace lgm

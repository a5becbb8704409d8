#pragma once

#include <vector>

#include "lgm/lie_catalog.hpp"
#include "lgm/tensor.hpp"

namespace lgm {

/// One `c_i g^{sign}` factor. sign is +1 or -1; 0 marks a coefficient with no
/// group slot after it and only survives in constant loops.
struct LoopFactor {
    Matrix coeff;
    int sign = 1;
};

/// A group element together with its inverse, so batches of loops can share it.
struct GroupPoint {
    Matrix g;
    Matrix ginv;
    explicit GroupPoint(Matrix element);
};

/// scale * tr(c_1 g^{s_1} c_2 g^{s_2} ... c_r g^{s_r}) in a fixed representation.
///
/// Slot positions are 1-based: slot s is the group factor between c_s and
/// c_{s+1}. On construction, sign-0 factors are folded into their neighbours
/// and adjacent g g^{-1} pairs are cancelled, so a loop is either constant
/// (a single sign-0 factor) or has a nonzero sign on every factor.
class WilsonLoop {
public:
    WilsonLoop(RepPtr rep, std::vector<LoopFactor> factors, cplx scale = 1.0);

    /// scale * tr(c g^{sign}).
    static WilsonLoop linear(RepPtr rep, Matrix coeff, int sign = 1, cplx scale = 1.0);
    /// scale * tr(c) with no group dependence.
    static WilsonLoop constant(RepPtr rep, cplx value);

    const RepPtr& rep() const { return rep_; }
    const std::vector<LoopFactor>& factors() const { return factors_; }
    cplx scale() const { return scale_; }
    bool is_constant() const { return constant_; }
    /// Number of group factors n.
    int degree() const { return constant_ ? 0 : static_cast<int>(factors_.size()); }
    int sign_at(int slot) const;

    cplx evaluate(const GroupPoint& p) const;
    cplx evaluate(const Matrix& g) const { return evaluate(GroupPoint(g)); }
    cplx value_at_identity() const;

    WilsonLoop scaled(cplx s) const;
    /// Same loop with the factor sequence rotated left by `k` positions.
    WilsonLoop rotated(int k) const;

private:
    RepPtr rep_;
    std::vector<LoopFactor> factors_;
    cplx scale_;
    bool constant_ = false;
};

/// coeff * product of loops.
struct LoopTerm {
    cplx coeff = 1.0;
    std::vector<WilsonLoop> loops;

    cplx evaluate(const GroupPoint& p) const;
    int degree() const;
};

/// Formal linear combination of loop products over one representation.
class LoopSum {
public:
    LoopSum() = default;
    explicit LoopSum(RepPtr rep) : rep_(std::move(rep)) {}
    LoopSum(const WilsonLoop& w);

    const RepPtr& rep() const { return rep_; }
    const std::vector<LoopTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add(LoopTerm term);
    void add(cplx coeff, std::vector<WilsonLoop> loops) { add(LoopTerm{coeff, std::move(loops)}); }
    LoopSum& operator+=(const LoopSum& other);
    LoopSum& operator*=(cplx s);
    friend LoopSum operator+(LoopSum a, const LoopSum& b) { return a += b; }
    friend LoopSum operator*(cplx s, LoopSum a) { return a *= s; }
    /// Distributes the product over both sums.
    friend LoopSum operator*(const LoopSum& a, const LoopSum& b);

    cplx evaluate(const GroupPoint& p) const;
    cplx evaluate(const Matrix& g) const { return evaluate(GroupPoint(g)); }

private:
    RepPtr rep_;
    std::vector<LoopTerm> terms_;
};

/// How merging and twisting results are expressed: as explicit sums over the
/// Lie-algebra basis with xi^a inserted into the coefficients, or through the
/// family's completeness relation.
enum class Expansion { GeneratorSum, ClosedForm };

LoopSum merge_at(const WilsonLoop& w1, int slot1, const WilsonLoop& w2, int slot2,
                 Expansion how = Expansion::GeneratorSum);
LoopSum total_merge(const WilsonLoop& w1, const WilsonLoop& w2,
                    Expansion how = Expansion::GeneratorSum);
LoopSum twist_at(const WilsonLoop& w, int slot1, int slot2,
                 Expansion how = Expansion::GeneratorSum);
/// Sum of twist_at over ordered slot pairs with slot1 != slot2.
LoopSum total_twist(const WilsonLoop& w, Expansion how = Expansion::GeneratorSum);
/// lambda * n * w + total_twist(w).
LoopSum laplacian(const WilsonLoop& w, Expansion how = Expansion::GeneratorSum);

/// Signature of a product of loops as seen by the tensor representation:
/// the V slots (sign +1) and the dual slots (sign -1), in order of appearance.
struct SlotPattern {
    int n = 0;      // number of g factors
    int n_dual = 0; // number of g^{-1} factors
    bool operator==(const SlotPattern&) const = default;
};

/// Coefficient tensor A with prod_r W_r(g) = constant * sum A_{IJ} rho(g)_{IJ},
/// where rho is the (n, n_dual) tensor representation, I = (i_1..i_n; i'_1..i'_n'),
/// J likewise, and the axes of A are ordered (I, J).
struct LoopTensor {
    SlotPattern pattern;
    cplx constant = 1.0;
    Tensor coeff;
};

LoopTensor loops_to_tensor(const std::vector<WilsonLoop>& loops);

/// Lazy form of the same coefficient tensor, evaluated one entry at a time.
class LoopContraction {
public:
    explicit LoopContraction(const std::vector<WilsonLoop>& loops);

    const SlotPattern& pattern() const { return pattern_; }
    cplx constant() const { return constant_; }
    int dim() const { return dim_; }
    /// A_{IJ} for flattened row-major multi-indices of length n + n_dual.
    cplx entry(std::size_t row, std::size_t col) const;

private:
    struct Slot {
        int position; // index into the V or dual multi-index
        bool dual;
    };
    struct Cycle {
        std::vector<Matrix> coeffs;
        std::vector<Slot> slots;
    };
    SlotPattern pattern_;
    cplx constant_ = 1.0;
    int dim_ = 0;
    std::vector<Cycle> cycles_;
};

} // namespace lgm

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lgm/tensor.hpp"

namespace lgm {

enum class Family { SO, Sp, U, SU, G2, U1Power };

/// A compact group together with the concrete representation used for it:
/// the defining representation for SO/Sp/U/SU, the 7-dimensional one for G2,
/// and the character z -> z^n for U1Power (there `n` is the exponent).
struct GroupSpec {
    Family family = Family::U;
    int n = 1;

    /// Throws DomainError when the size parameter is out of range.
    void validate() const;
    std::string name() const;
    bool operator==(const GroupSpec&) const = default;
};

std::string family_key(Family f);
/// Accepts so, sp, u, su, g2, u1 (case-insensitive).
Family parse_family(const std::string& key);

/// One term of a completeness relation, i.e. of the split Casimir written in
/// elementary tensors:
///   Cross:  coeff * A_ik B_jl
///   Swap:   coeff * delta_il delta_jk
///   Trace:  coeff * sum_r (M_r)_ij (M_r)_kl
struct CompletenessTerm {
    enum class Kind { Cross, Swap, Trace };
    Kind kind = Kind::Swap;
    double coeff = 0.0;
    Matrix a, b;
    std::vector<Matrix> ms;
};

struct RepData {
    GroupSpec spec;
    int dim = 0;
    std::vector<Matrix> generators; // orthonormal basis of the Lie algebra, skew-Hermitian
    Matrix casimir;                 // sum_a xi^a xi^a
    double lambda = 0.0;            // Casimir eigenvalue
    /// kappa(X, Y) = -kappa_scale * tr(XY) on representation matrices.
    double kappa_scale = 1.0;
    Matrix j;                       // symplectic form (Sp only)
    std::vector<Matrix> psi;        // Psi_r = (psi_rij) (G2 only)
    std::vector<CompletenessTerm> completeness;

    /// For the real and symplectic families, (g^s)^T = Q g^{-s} Q^T; this is Q.
    /// Empty for families where the transpose leaves the group (U, SU, U1Power).
    std::optional<Matrix> transpose_conjugator;

    int algebra_dim() const { return static_cast<int>(generators.size()); }
    double kappa(const Matrix& x, const Matrix& y) const;
};

using RepPtr = std::shared_ptr<const RepData>;

/// Builds the orthonormal generator set and all derived constants.
RepData build_representation(const GroupSpec& spec);
RepPtr make_rep(const GroupSpec& spec);

/// K_ijkl = xi^a_ij xi^a_kl from the generators.
Tensor split_casimir(const RepData& rep);
/// The same tensor from the family's closed-form completeness relation.
Tensor closed_form_completeness(const GroupSpec& spec);
/// Evaluates a completeness-term list into a (d,d,d,d) tensor.
Tensor completeness_tensor(const std::vector<CompletenessTerm>& terms, int dim);
double casimir_eigenvalue(const GroupSpec& spec);

/// Totally antisymmetric octonion structure constants psi_ijk, 0-based indices.
double octonion_psi(int i, int j, int k);

/// Largest violation of the group's defining constraints by g.
double group_residual(const RepData& rep, const Matrix& g);

/// Inverse of a group element in the representation (g* for unitary reps).
inline Matrix group_inverse(const Matrix& g) { return g.adjoint(); }

} // namespace lgm

#pragma once

#include <optional>
#include <vector>

#include "lgm/moments.hpp"
#include "lgm/sampling.hpp"
#include "lgm/wilson_loop.hpp"

namespace lgm {

/// 2 sum_{r<s} M(W_r, W_s) prod_{rest} + sum_r T(W_r) prod_{rest}: the part of
/// Delta(prod W_r) beyond lambda * sum n_r * prod W_r.
LoopSum merge_twist_terms(const std::vector<WilsonLoop>& loops, Expansion how = Expansion::ClosedForm);
/// Delta(prod_r W_r) as a loop sum.
LoopSum laplacian_of_product(const std::vector<WilsonLoop>& loops, Expansion how = Expansion::ClosedForm);

/// Re W_p written as (W_p + conj W_p)/2, both halves linear loops.
std::vector<WilsonLoop> hermitized(const std::vector<WilsonLoop>& plaquettes);

struct TheoremAOptions {
    Expansion expansion = Expansion::ClosedForm;
    std::size_t budget = default_budget;
    /// Central-difference step in t for the Brownian check.
    double fd_step = 1e-4;
    /// Wilson measure only.
    MCOptions mc;
};

struct TheoremAReport {
    MeasureSpec::Kind kind = MeasureSpec::Kind::Haar;
    bool exact = true;
    cplx lhs = 0.0;
    cplx rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    // Monte Carlo (Wilson) only
    double stderr_ = 0.0;
    double z_score = 0.0;
    long samples = 0;
    double effective_samples = 0.0;
    double discarded_imag = 0.0;
    /// Wilson at beta = 0: the exact Haar residual of the same loops.
    std::optional<double> haar_residual;
    std::optional<double> haar_tolerance;

    bool passed() const;
};

/// Evaluates both sides of the Laplacian identity for E[prod loops]:
///   Haar:     lambda sum n_r E[F] = -E[MT]
///   Brownian: dE_t[F]/dt = (lambda sum n_r E_t[F] + E_t[MT]) / 2 (central differences)
///   Wilson:   lambda sum n_r E[F] = -E[MT] + E[F (beta lambda sum_q W_q + beta^2 sum_{q,q'} M(W_q,W_q'))]
/// where F = prod loops and MT = merge_twist_terms(loops).
TheoremAReport verify_theorem_a(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure,
                                const TheoremAOptions& opts = {});

} // namespace lgm

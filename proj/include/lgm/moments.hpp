#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lgm/lie_catalog.hpp"
#include "lgm/wilson_loop.hpp"

namespace lgm {

/// Largest tensor-representation dimension d^{n+n'} handled by default.
inline constexpr std::size_t default_budget = 4096;

struct MeasureSpec {
    enum class Kind { Haar, Brownian, Wilson };
    Kind kind = Kind::Haar;
    double t = 0.0;    // Brownian
    double beta = 0.0; // Wilson
    std::vector<WilsonLoop> plaquettes;

    static MeasureSpec haar() { return {}; }
    static MeasureSpec brownian(double t);
    static MeasureSpec wilson(double beta, std::vector<WilsonLoop> plaquettes);

    void validate() const;
    std::string describe() const;
};

/// A connected block of the tensor Casimir: C restricted to the listed basis
/// indices (C has no entries coupling different blocks).
struct CasimirBlock {
    std::vector<std::size_t> index;
    Matrix c;
};

struct CasimirBlocks {
    int n = 0, n_dual = 0;
    std::size_t dim = 0;
    std::vector<CasimirBlock> blocks;

    Tensor dense() const;
};

/// Sparse assembly of the tensor Casimir on V^{(x)n} (x) V*^{(x)n'}, split into blocks.
CasimirBlocks casimir_blocks(const RepData& rep, int n, int n_dual,
                             std::size_t budget = default_budget);
/// Dense (D, D) tensor Casimir, D = d^{n+n'}.
Tensor tensor_casimir(const RepData& rep, int n, int n_dual, std::size_t budget = default_budget);

struct SpectrumEntry {
    double value;
    int multiplicity;
};

/// Eigendecomposition of the tensor Casimir, block by block. Shared by the
/// Haar and Brownian moment operators of one slot pattern.
class CasimirSpectrum {
public:
    CasimirSpectrum(RepPtr rep, int n, int n_dual, std::size_t budget = default_budget);

    struct Block {
        std::vector<std::size_t> index;
        Eigen::VectorXd eigenvalues;
        Matrix eigenvectors;
    };

    const RepPtr& rep() const { return rep_; }
    int n() const { return n_; }
    int n_dual() const { return n_dual_; }
    std::size_t dim() const { return dim_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    /// |eigenvalue| below this counts as zero.
    double null_cutoff() const { return cutoff_; }
    /// Distinct eigenvalues (grouped within the cutoff), descending.
    std::vector<SpectrumEntry> spectrum() const;

private:
    RepPtr rep_;
    int n_ = 0, n_dual_ = 0;
    std::size_t dim_ = 0;
    double cutoff_ = 0.0;
    std::vector<Block> blocks_;
};

/// T(nu) on a tensor representation, stored block-diagonally.
class MomentOperator {
public:
    enum class Kind { Haar, Brownian };

    struct Block {
        std::vector<std::size_t> index;
        Matrix m;
    };

    static MomentOperator haar(std::shared_ptr<const CasimirSpectrum> spec);
    static MomentOperator brownian(std::shared_ptr<const CasimirSpectrum> spec, double t);

    Kind kind() const { return kind_; }
    double t() const { return t_; }
    const RepPtr& rep() const { return spectrum_->rep(); }
    int n() const { return spectrum_->n(); }
    int n_dual() const { return spectrum_->n_dual(); }
    std::size_t dim() const { return spectrum_->dim(); }
    const std::vector<Block>& blocks() const { return blocks_; }
    /// Dimension of the invariant subspace (the Haar projector's rank).
    int rank() const { return rank_; }
    std::vector<SpectrumEntry> spectrum() const { return spectrum_->spectrum(); }

    cplx entry(std::size_t row, std::size_t col) const;
    Matrix dense() const;
    /// Rank-2 tensor of shape (D, D).
    Tensor matrix() const { return Tensor::from_matrix(dense()); }
    Vector apply(const Vector& v) const;

    /// sum_{IJ} A_{IJ} T_{IJ} with A given lazily.
    cplx contract(const LoopContraction& a) const;

private:
    MomentOperator() = default;
    void index_blocks();

    Kind kind_ = Kind::Haar;
    double t_ = 0.0;
    int rank_ = 0;
    std::shared_ptr<const CasimirSpectrum> spectrum_;
    std::vector<Block> blocks_;
    std::vector<int> block_of_, local_of_;
};

MomentOperator haar_moment(const RepPtr& rep, int n, int n_dual, std::size_t budget = default_budget);
MomentOperator brownian_moment(const RepPtr& rep, int n, int n_dual, double t,
                               std::size_t budget = default_budget);

/// Exact expectations for one representation; caches the Casimir spectra per slot pattern.
class MomentEngine {
public:
    explicit MomentEngine(RepPtr rep, std::size_t budget = default_budget);

    const RepPtr& rep() const { return rep_; }
    std::size_t budget() const { return budget_; }

    std::shared_ptr<const CasimirSpectrum> spectrum(int n, int n_dual);
    const MomentOperator& haar(int n, int n_dual);
    MomentOperator brownian(int n, int n_dual, double t);

    /// E[prod loops] under a Haar or Brownian measure.
    cplx expect(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure);
    cplx expect(std::initializer_list<WilsonLoop> loops, const MeasureSpec& measure)
    {
        return expect(std::vector<WilsonLoop>(loops), measure);
    }
    cplx expect(const LoopTerm& term, const MeasureSpec& measure);
    cplx expect(const LoopSum& sum, const MeasureSpec& measure);

private:
    RepPtr rep_;
    std::size_t budget_;
    std::map<std::pair<int, int>, std::shared_ptr<const CasimirSpectrum>> spectra_;
    std::map<std::pair<int, int>, MomentOperator> haar_;
    std::map<std::pair<int, int>, std::map<double, MomentOperator>> brownian_;
};

/// One-shot exact expectation (Haar or Brownian).
cplx expect_exact(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure,
                  std::size_t budget = default_budget);

enum class SpanningSource { Permutations, Pairings, G2u, Nullspace };

std::string spanning_source_key(SpanningSource s);
SpanningSource parse_spanning_source(const std::string& key);

struct SpanningSet {
    RepPtr rep;
    int n = 0, n_dual = 0;
    SpanningSource source = SpanningSource::Nullspace;
    std::vector<std::string> labels;
    Matrix vectors; // (D, |labels|), column k = tau(a_k)
};

SpanningSet spanning_set(const RepPtr& rep, int n, int n_dual, SpanningSource source,
                         std::size_t budget = default_budget);

/// Permutations of {0..n-1} in lexicographic order; sigma[k] is the image of k.
std::vector<std::vector<int>> permutations(int n);
int cycle_count(const std::vector<int>& sigma);
std::string cycle_notation(const std::vector<int>& sigma);

struct WeingartenMap {
    SpanningSet spanning;
    Matrix gram; // tau* tau
    Matrix wg;   // pseudoinverse of gram

    /// tau o Wg o tau*, a (D, D) matrix.
    Matrix projector() const;
    /// Residuals of the four Moore-Penrose conditions
    /// G Wg G = G, Wg G Wg = Wg, (G Wg)* = G Wg, (Wg G)* = Wg G.
    std::vector<double> pseudoinverse_residuals() const;
};

WeingartenMap weingarten(const SpanningSet& ss);

} // namespace lgm

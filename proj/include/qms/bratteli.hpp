#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <optional>
#include <string>
#include <vector>

#include "qms/algebra.hpp"

namespace qms {

/// Edge multiplicities m(i, j) of source block i inside target block j.
/// Construction enforces unitality: Σᵢ m(i, j)·kᵢ = lⱼ for every target block.
class MultiplicityMatrix {
 public:
  MultiplicityMatrix(BlockAlgebra source, BlockAlgebra target, Eigen::MatrixXi mult);

  const BlockAlgebra& source() const { return source_; }
  const BlockAlgebra& target() const { return target_; }
  const Eigen::MatrixXi& mult() const { return mult_; }
  int operator()(int i, int j) const { return mult_(i, j); }

  /// Multiplicities of `next ∘ this`.
  MultiplicityMatrix then(const MultiplicityMatrix& next) const;

  friend bool operator==(const MultiplicityMatrix& a, const MultiplicityMatrix& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.mult_ == b.mult_;
  }

 private:
  BlockAlgebra source_;
  BlockAlgebra target_;
  Eigen::MatrixXi mult_;
};

/// One diagonal copy of a source block inside a target block.
struct Placement {
  int source_block;
  int offset;  // row/column where the copy starts inside the target block
  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Concrete unital *-monomorphism between block algebras: every target block
/// is tiled along its diagonal by copies of source blocks.
class Embedding {
 public:
  Embedding(BlockAlgebra source, BlockAlgebra target, std::vector<std::vector<Placement>> placements);

  /// Canonical realization: target block j holds m(i, j) copies of block i,
  /// ordered by i ascending then copy index ascending.
  static Embedding realize(const MultiplicityMatrix& m);
  static Embedding identity(const BlockAlgebra& algebra);

  const BlockAlgebra& source() const { return source_; }
  const BlockAlgebra& target() const { return target_; }
  const std::vector<std::vector<Placement>>& placements() const { return placements_; }

  Element apply(const Element& x) const;

  /// `next ∘ this`.
  Embedding then(const Embedding& next) const;

  MultiplicityMatrix multiplicities() const;

  /// Coordinate matrix (target.dimension() × source.dimension()), entries 0/1.
  Eigen::SparseMatrix<std::complex<double>> coordinate_matrix() const;

  friend bool operator==(const Embedding& a, const Embedding& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.placements_ == b.placements_;
  }

 private:
  BlockAlgebra source_;
  BlockAlgebra target_;
  std::vector<std::vector<Placement>> placements_;
};

/// Summable weights β(0)…β(N−1) with a certified bound on what lies beyond.
class BetaSchedule {
 public:
  BetaSchedule() = default;
  /// `remainder` must bound Σ_{j≥N} β(j) from above.
  BetaSchedule(std::vector<double> values, double remainder);

  int size() const { return static_cast<int>(values_.size()); }
  double operator()(int j) const { return values_.at(static_cast<std::size_t>(j)); }
  const std::vector<double>& values() const { return values_; }
  double remainder() const { return remainder_; }

  /// Certified upper bound for Σ_{j≥n} β(j), 0 ≤ n ≤ N.
  double tail(int n) const;

  /// 1/β(j) with β(−1) = ∞ read as 1/∞ = 0.
  double inverse(int j) const;

 private:
  std::vector<double> values_;
  double remainder_ = 0.0;
};

/// How a family derives its β schedule.
struct BetaSpec {
  enum class Kind { DimPower, Geometric, Explicit };
  Kind kind = Kind::DimPower;
  double exponent = 2.0;               // DimPower: β(j) = 1/dim(Aⱼ)^k, k > 1
  double scale = 1.0 / 32.0;           // Geometric: β(j) = scale·ratio^j
  double ratio = 0.5;
  std::vector<double> values;          // Explicit
  std::optional<double> tail_after;    // Explicit (and DimPower on custom diagrams)

  static BetaSpec dim_power(double k) {
    BetaSpec s;
    s.kind = Kind::DimPower;
    s.exponent = k;
    return s;
  }
  static BetaSpec geometric(double scale, double ratio) {
    BetaSpec s;
    s.kind = Kind::Geometric;
    s.scale = scale;
    s.ratio = ratio;
    return s;
  }
  static BetaSpec explicit_values(std::vector<double> values, double tail_after) {
    BetaSpec s;
    s.kind = Kind::Explicit;
    s.values = std::move(values);
    s.tail_after = tail_after;
    return s;
  }
};

struct SequenceLimits {
  int max_depth = 12;
  int max_dimension = kDefaultMaxDimension;
};

/// A₀ = ℂ ⊆ A₁ ⊆ … ⊆ A_N with concrete embeddings and a β schedule.
class InductiveSequence {
 public:
  InductiveSequence(std::string family, std::vector<BlockAlgebra> algebras, std::vector<Embedding> embeddings,
                    BetaSchedule beta);

  const std::string& family() const { return family_; }
  int depth() const { return static_cast<int>(algebras_.size()) - 1; }
  const BlockAlgebra& algebra(int n) const { return algebras_.at(static_cast<std::size_t>(n)); }
  const std::vector<BlockAlgebra>& algebras() const { return algebras_; }
  /// Aₙ → Aₙ₊₁.
  const Embedding& embedding(int n) const { return embeddings_.at(static_cast<std::size_t>(n)); }
  /// Aₘ → Aₙ for m ≤ n (identity when m = n).
  const Embedding& embedding(int m, int n) const;
  const BetaSchedule& beta() const { return beta_; }
  double beta(int j) const { return beta_(j); }
  double beta_tail(int n) const { return beta_.tail(n); }

  /// Same diagram, different schedule.
  InductiveSequence with_beta(BetaSchedule beta) const;

 private:
  std::string family_;
  std::vector<BlockAlgebra> algebras_;
  std::vector<Embedding> embeddings_;
  BetaSchedule beta_;
  std::vector<std::vector<Embedding>> composed_;  // composed_[n][m] : Aₘ → Aₙ
};

/// UHF: Aₙ = M_{rateⁿ} with multiplicity `rate` embeddings (rate 2 is CAR).
InductiveSequence family_uhf(int rate, int depth, const BetaSpec& beta = BetaSpec::dim_power(2.0),
                             const SequenceLimits& limits = {});

/// Effros–Shen: Aₙ = M_{qₙ} ⊕ M_{qₙ₋₁} from continued-fraction terms a₁, a₂, …
/// with multiplicities [[aₙ₊₁, 1], [1, 0]]; A₀ = ℂ.
InductiveSequence family_effros_shen(const std::vector<int>& cf_terms, int depth,
                                     const BetaSpec& beta = BetaSpec::dim_power(2.0),
                                     const SequenceLimits& limits = {});

/// Aₙ = ℂⁿ⁺¹, embedding duplicates the last coordinate.
InductiveSequence family_commutative(int depth, const BetaSpec& beta = BetaSpec::dim_power(2.0),
                                     const SequenceLimits& limits = {});

/// Aₙ = Mₙ ⊕ ℂ (n ≥ 1), (x, λ) ↦ (diag(x, λ), λ); the unitized compacts.
InductiveSequence family_compacts(int depth, const BetaSpec& beta = BetaSpec::dim_power(2.0),
                                  const SequenceLimits& limits = {});

/// User-supplied diagram.  `multiplicities[n]` has rows for blocks of level n
/// and columns for blocks of level n+1.
InductiveSequence family_custom(const std::vector<std::vector<int>>& block_sizes,
                                const std::vector<Eigen::MatrixXi>& multiplicities, const BetaSpec& beta,
                                const SequenceLimits& limits = {});

/// Continued-fraction denominators q₀ = 1, q₁ = a₁, qₙ = aₙqₙ₋₁ + qₙ₋₂.
std::vector<long long> continued_fraction_denominators(const std::vector<int>& cf_terms, int count);

}  // namespace qms

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qms/algebra.hpp"
#include "qms/bratteli.hpp"
#include "qms/lipnorms.hpp"
#include "qms/propinquity.hpp"

namespace qms {

/// {i : every edge out of block i of Aₙ lands in `upper`}, for `upper` ⊆ blocks of Aₙ₊₁.
std::vector<int> intersect_down(const InductiveSequence& seq, int n, const std::vector<int>& upper);

/// Ideal of the limit truncated at A_N, stored as the block sets of I ∩ Aₙ.
class IdealSpec {
 public:
  /// Sorts and deduplicates each level, then checks coherence against the diagram.
  IdealSpec(const InductiveSequence& seq, std::vector<std::vector<int>> levels);

  /// Coherent spec generated by its top level.
  static IdealSpec from_top(const InductiveSequence& seq, std::vector<int> top);

  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const std::vector<int>& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  const std::vector<std::vector<int>>& levels() const { return levels_; }
  bool contains(int n, int block) const;
  /// Block sizes of the diagram the spec was validated against.
  const std::vector<std::vector<int>>& shape() const { return shape_; }

  friend bool operator==(const IdealSpec& a, const IdealSpec& b) {
    return a.shape_ == b.shape_ && a.levels_ == b.levels_;
  }

 private:
  std::vector<std::vector<int>> shape_;
  std::vector<std::vector<int>> levels_;
};

/// Top level chosen uniformly among subsets, lower levels by intersection.
template <typename URBG>
IdealSpec random_ideal(const InductiveSequence& seq, URBG& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<int> top;
  for (int j = 0; j < seq.algebra(seq.depth()).num_blocks(); ++j) {
    if (coin(rng)) top.push_back(j);
  }
  return IdealSpec::from_top(seq, std::move(top));
}

struct FellDistance {
  double value = 0.0;   // 2^{−n} at the first disagreement, 0 when unresolved
  bool resolved = false;
  int level = -1;       // first disagreement level, −1 when unresolved
  double bound = 0.0;   // certified upper bound (= value when resolved)
};

FellDistance fell_metric(const IdealSpec& i, const IdealSpec& j);

/// (I ∩ Aₙ)~ realized as the block algebra ⊕_{i∈Sₙ} M_{kᵢ} ⊕ ℂ.  Level 0 is ℂ.
///
/// A pair (b, λ) with b ∈ Aₙ supported on Sₙ corresponds to the blocks
/// (bᵢ + λ·1 for i ∈ Sₙ; λ).
class UnitizedStage {
 public:
  UnitizedStage(const InductiveSequence& seq, const IdealSpec& ideal, int n);

  int level() const { return level_; }
  const BlockAlgebra& ambient() const { return ambient_; }
  const BlockAlgebra& algebra() const { return algebra_; }
  const std::vector<int>& blocks() const { return blocks_; }
  int scalar_block() const { return algebra_.num_blocks() - 1; }

  /// Zero outside Sₙ.
  Element restrict(const Element& b) const;
  /// max{‖b + λpₙ‖, |λ|}.
  double pair_norm(const Element& b, std::complex<double> lambda) const;
  /// sup over the unit ball of I ∩ Aₙ of ‖(b + λpₙ)c‖ (largest singular value of
  /// left multiplication on the Hilbert–Schmidt space), then max with |λ|.
  double multiplier_norm(const Element& b, std::complex<double> lambda) const;

  Element to_block(const Element& b, std::complex<double> lambda) const;
  std::pair<Element, std::complex<double>> from_block(const Element& x) const;

 private:
  int level_;
  BlockAlgebra ambient_;
  std::vector<int> blocks_;
  BlockAlgebra algebra_;
};

/// (b, λ) ↦ (ι(b), λ) between consecutive unitized stages, written in block form.
Embedding unitized_embedding(const InductiveSequence& seq, const IdealSpec& ideal, int n);

struct IdealChain {
  std::vector<UnitizedStage> stages;
  LipNormChain chain;  // over Ĩ₀ = ℂ ⊆ Ĩ₁ ⊆ … with canonical traces
};

/// Unitized stages, trace-preserving expectations and β-Lip-norms of an ideal.
IdealChain ideal_to_cqms(const InductiveSequence& seq, const IdealSpec& ideal, const BetaSchedule& beta);
inline IdealChain ideal_to_cqms(const InductiveSequence& seq, const IdealSpec& ideal) {
  return ideal_to_cqms(seq, ideal, seq.beta());
}

/// True when the two chains have bit-identical algebras, embeddings,
/// expectations and Lip-norm data on levels 0…n.
bool stages_identical(const IdealChain& a, const IdealChain& b, int n);

struct LipschitzCertificate {
  double bound = 0.0;       // certified propinquity upper bound
  FellDistance fell;
  int agreement_level = 0;  // N used in the comparison
  bool stages_identical = false;
};

/// Propinquity bound between the quantum metric spaces of two ideals, for β(j) ≤ 2^{−j−5}.
/// Throws DomainError ("certificate refused") when β violates the cap.
LipschitzCertificate lipschitz_certificate(const InductiveSequence& seq, const IdealSpec& i, const IdealSpec& j,
                                           const BetaSchedule& beta);

}  // namespace qms

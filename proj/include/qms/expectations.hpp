#pragma once

#include <Eigen/Dense>

#include <vector>

#include "qms/algebra.hpp"
#include "qms/bratteli.hpp"

namespace qms {

/// Faithful tracial state τ(x) = Σᵢ wᵢ Tr(xᵢ).
class TraceState {
 public:
  TraceState(BlockAlgebra algebra, std::vector<double> weights);

  /// Weights proportional to block size, normalized: the unique trace on a full matrix algebra.
  static TraceState canonical(const BlockAlgebra& algebra);
  /// Positive weights rescaled so that τ(1) = 1.
  static TraceState normalized(const BlockAlgebra& algebra, std::vector<double> raw_weights);

  const BlockAlgebra& algebra() const { return algebra_; }
  const std::vector<double>& weights() const { return weights_; }

  std::complex<double> operator()(const Element& x) const;

  /// τ∘ι on the source of an embedding into this trace's algebra.
  TraceState restrict_to(const Embedding& embedding) const;

 private:
  BlockAlgebra algebra_;
  std::vector<double> weights_;
};

/// Dense linear map between block algebras in coordinate form.  An empty
/// matrix stands for the identity so that E_{n,n} costs nothing to store.
struct LinearMap {
  BlockAlgebra source;
  BlockAlgebra target;
  Eigen::MatrixXcd matrix;  // target.dimension() × source.dimension(), or empty

  bool is_identity() const { return matrix.size() == 0; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return is_identity() ? v : Eigen::VectorXcd(matrix * v); }
  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& v) const {
    return is_identity() ? v : Eigen::VectorXcd(matrix.adjoint() * v);
  }
  Eigen::MatrixXcd dense() const;
  Element operator()(const Element& x) const;
};

/// τ-orthogonal projection of an ambient algebra onto the image of a unital
/// embedding, read back in subalgebra coordinates.
class ConditionalExpectation {
 public:
  /// Pivot tolerance of the weighted Gram–Schmidt.
  static constexpr double kPivotTol = 1e-12;

  ConditionalExpectation(Embedding sub, TraceState tau);

  const BlockAlgebra& ambient() const { return sub_.target(); }
  const BlockAlgebra& subalgebra() const { return sub_.source(); }
  const Embedding& embedding() const { return sub_; }
  const TraceState& trace() const { return tau_; }

  /// E(x) as an element of the subalgebra.
  Element operator()(const Element& x) const;
  /// ι(E(x)) inside the ambient algebra.
  Element in_ambient(const Element& x) const;

  /// Subalgebra coordinates of E(x) from ambient coordinates (sub.dim × ambient.dim).
  const Eigen::MatrixXcd& pullback() const { return pullback_; }
  /// Ambient projector ι∘E (ambient.dim × ambient.dim).
  Eigen::MatrixXcd projector() const;

 private:
  Embedding sub_;
  TraceState tau_;
  Eigen::MatrixXcd pullback_;
};

/// Stage expectations E_{n+1,n} of an inductive sequence and their compositions
/// E_{n,m} = E_{m+1,m} ∘ ⋯ ∘ E_{n,n−1}.
class ExpectationChain {
 public:
  /// `traces[n]` is the trace on Aₙ used for E_{n,n−1} (traces[0] is unused).
  ExpectationChain(const InductiveSequence& seq, std::vector<TraceState> traces);

  /// Canonical trace (weights ∝ block size) on every level.
  static ExpectationChain canonical(const InductiveSequence& seq);
  /// Every E_{n+1,n} induced by restricting one trace μ on A_N.
  static ExpectationChain from_top_trace(const InductiveSequence& seq, const TraceState& mu);

  int depth() const { return static_cast<int>(steps_.size()); }
  /// E_{n+1,n}.
  const ConditionalExpectation& step(int n) const { return steps_.at(static_cast<std::size_t>(n)); }
  const std::vector<ConditionalExpectation>& steps() const { return steps_; }
  const TraceState& trace(int n) const { return traces_.at(static_cast<std::size_t>(n)); }

  /// E_{n,m} : Aₙ → Aₘ (identity when n = m).
  const LinearMap& composed(int n, int m) const;

 private:
  std::vector<TraceState> traces_;
  std::vector<ConditionalExpectation> steps_;
  std::vector<std::vector<LinearMap>> composed_;  // composed_[n][m]
};

/// Trace-preserving conditional expectation onto an embedded subalgebra.
inline ConditionalExpectation trace_preserving_ce(const Embedding& sub, const TraceState& tau) {
  return ConditionalExpectation(sub, tau);
}

/// E_{n,m} built from a list of stage expectations (`ces[k]` = E_{k+1,k}).
LinearMap compose_ce(const InductiveSequence& seq, const std::vector<ConditionalExpectation>& ces, int n, int m);

}  // namespace qms

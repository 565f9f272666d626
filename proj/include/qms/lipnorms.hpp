#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qms/algebra.hpp"
#include "qms/bratteli.hpp"
#include "qms/expectations.hpp"

namespace qms {

using LipEvaluator = std::function<double(const Element&)>;
using SparseMatrixXcd = Eigen::SparseMatrix<std::complex<double>>;

/// a ↦ lift(a) − back(project(a)), measured in `out`, weighted by 1/β.
struct ResidualTerm {
  double beta;
  BlockAlgebra out;
  std::optional<SparseMatrixXcd> lift;  // identity when absent
  SparseMatrixXcd project;             // subalgebra coordinates of the projected part
  SparseMatrixXcd back;                // subalgebra → out

  Eigen::VectorXcd apply(const Eigen::VectorXcd& a) const;
  /// Adjoint for the pairing ⟨y, x⟩ = Σ Tr(y* x).
  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& y) const;
  /// True when `project` lands in the scalars (the m = 0 term).
  bool projects_to_scalars() const { return project.rows() == 1; }
};

/// Sparse copy of a dense map, dropping entries below `rel`·max|entry|
/// (rounding residue of the Gram–Schmidt projections).
SparseMatrixXcd prune_to_sparse(const Eigen::MatrixXcd& dense, double rel = 1e-14);

/// L(a) = max_m ‖D_m a‖ / β(m) over a list of residual terms, each of which
/// must vanish on scalars.
///
/// Both the stagewise chain Lip-norms and the faithful-trace Lip-norm have this
/// shape; the MK solver and the bridge maximizer only see this interface.
class ResidualLipNorm {
 public:
  ResidualLipNorm(BlockAlgebra domain, std::vector<ResidualTerm> terms);

  const BlockAlgebra& domain() const { return domain_; }
  const std::vector<ResidualTerm>& terms() const { return terms_; }
  int size() const { return static_cast<int>(terms_.size()); }

  /// Symmetrizes `a`, then evaluates.  Zero seminorm when there are no terms.
  double operator()(const Element& a) const;
  /// ‖D_m a‖ for every term (no symmetrization, no weights).
  std::vector<double> residual_norms(const Element& a) const;
  Element residual(int m, const Element& a) const;
  Element residual_adjoint(int m, const Element& y) const;

 private:
  BlockAlgebra domain_;
  std::vector<ResidualTerm> terms_;
};

/// β-weighted Lip-norms L_n(a) = max_{m<n} ‖a − E_{n,m}(a)‖/β(m) on every stage.
class LipNormChain {
 public:
  LipNormChain(InductiveSequence seq, ExpectationChain expectations);
  /// Canonical traces on every level.
  explicit LipNormChain(const InductiveSequence& seq);

  const InductiveSequence& sequence() const { return seq_; }
  const ExpectationChain& expectations() const { return ex_; }
  int depth() const { return seq_.depth(); }
  double beta(int j) const { return seq_.beta(j); }

  double operator()(int n, const Element& a) const { return at(n)(a); }
  const ResidualLipNorm& at(int n) const;
  LipEvaluator evaluator(int n) const;

 private:
  InductiveSequence seq_;
  ExpectationChain ex_;
  std::vector<ResidualLipNorm> levels_;
};

inline double chain_lipnorm(const LipNormChain& chain, int n, const Element& a) { return chain(n, a); }

/// L_μ(a) = max_{m<n} ‖a − E_m(a)‖/β(m) for a ∈ Aₙ, with E_m the one-shot
/// μ-preserving projection of A_N onto Aₘ.
class TraceLipNorm {
 public:
  TraceLipNorm(InductiveSequence seq, TraceState mu);

  const InductiveSequence& sequence() const { return seq_; }
  const TraceState& trace() const { return mu_; }
  double operator()(int n, const Element& a) const { return at(n)(a); }
  const ResidualLipNorm& at(int n) const;
  /// E_m : A_N → Aₘ.
  const ConditionalExpectation& projection(int m) const { return projections_.at(static_cast<std::size_t>(m)); }

 private:
  InductiveSequence seq_;
  TraceState mu_;
  std::vector<ConditionalExpectation> projections_;
  std::vector<ResidualLipNorm> levels_;
};

inline double trace_lipnorm(const TraceLipNorm& lip, int n, const Element& a) { return lip(n, a); }

/// dim(M_{2ⁿ})·‖a − τ(a)1‖ on the n-th CAR stage, τ the normalized trace.
double car_counterexample_lipnorm(int n, const Element& a);

/// max{L(a∘b), L({a,b})} − [C(‖a‖L(b) + ‖b‖L(a)) + D·L(a)L(b)]; ≤ 0 certifies the pair.
double quasi_leibniz_residual(const LipEvaluator& lip, const Element& a, const Element& b, double c = 2.0,
                              double d = 0.0);

struct DiameterEstimate {
  double empirical_lower = 0.0;
  double certified_upper = 0.0;
};

struct MkOptions;

/// certified_upper = 2β(0); empirical_lower = best MK lower bound over sampled
/// state pairs (vertex states when the level is commutative, pure states otherwise).
DiameterEstimate diameter_estimate(const LipNormChain& chain, int n, int sample_count, std::uint64_t seed,
                                   const MkOptions& options);
DiameterEstimate diameter_estimate(const LipNormChain& chain, int n, int sample_count, std::uint64_t seed);

}  // namespace qms

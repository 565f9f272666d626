#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qms/algebra.hpp"
#include "qms/bratteli.hpp"
#include "qms/lipnorms.hpp"

namespace qms {

struct BridgeReport {
  int level = 0;
  double certified_upper = 0.0;
  double empirical_lower = 0.0;
  Element witness_element;  // b in the level-(n+1) Lip-ball
  Element witness_partner;  // its partner in the level-n Lip-ball
  int iterations = 0;
};

struct BridgeOptions {
  int budget = 2000;  // total ascent iterations, shared by the restarts
  int restarts = 32;
  std::uint64_t seed = 0;
};

/// Length of the evident bridge Aₙ ⊆ Aₙ₊₁: certified β(n); the empirical side
/// maximizes ‖b − E_{n+1,n}(b)‖ over L_{n+1}(b) ≤ 1 by projected gradient ascent.
BridgeReport evident_bridge_length(const LipNormChain& chain, int n, const BridgeOptions& options = {});

/// E_{n+1,n}(b) read in Aₙ: the partner of b across the evident bridge.
Element bridge_partner(const LipNormChain& chain, int n, const Element& b);

/// Bridge ℂ ⊆ M_{2ⁿ} under the CAR counterexample Lip-norm: certified 4⁻ⁿ.
BridgeReport car_bridge_report(int n, int samples = 64, std::uint64_t seed = 0);

/// 4·(bridge length bound) for the CAR counterexample at level n.
inline double car_propinquity_bound(int n) { return 4.0 * std::ldexp(1.0, -2 * n); }

/// ⊕ of the blocks of a and b, in that order.
BlockAlgebra direct_sum(const BlockAlgebra& a, const BlockAlgebra& b);
Element join(const BlockAlgebra& sum, const Element& a, const Element& b);
std::pair<Element, Element> split(const Element& x, const BlockAlgebra& a, const BlockAlgebra& b);

/// max{Lₙ(a), Lₙ₊₁(b), ‖ι(a) − b‖/r} on sa(Aₙ ⊕ Aₙ₊₁).
double tunnel_lipnorm(const LipNormChain& chain, int n, double r, const Element& a, const Element& b);
/// The same seminorm as an evaluator on the direct-sum algebra.
LipEvaluator tunnel_evaluator(const LipNormChain& chain, int n, double r);

/// 4 Σ_{j=n}^{m−1} β(j).
double propinquity_upper(const InductiveSequence& seq, int n, int m);
/// 4·(certified tail Σ_{j≥n} β(j)).
double propinquity_upper_to_limit(const InductiveSequence& seq, int n);

/// Finite truncation of a coherent sequence: entries[k] = (x_k ∈ A_{start+k}, y_k ∈ A_{start+k+1})
/// with y_k = x_{k+1}.
struct CoherenceWindow {
  int start = 0;
  std::vector<std::pair<Element, Element>> entries;
};

/// Throws DomainError when consecutive entries disagree beyond 1e−12 (relative).
void check_coherent(const LipNormChain& chain, const CoherenceWindow& w);

/// max over entries of max{L(x_k), ‖ι(x_k) − y_k‖/(2β(start+k))}.
double s0_seminorm(const LipNormChain& chain, const CoherenceWindow& w);

/// Window of ψₙ(a) on levels 0…W: (0,0) below n−1, then (0,a), then (a,a) pushed up.
/// Needs n < W ≤ N so that the first (a,a) entry is inside the window.
CoherenceWindow psi_window(const LipNormChain& chain, int n, const Element& a, int window);

/// min over real λ of S₀(ψₙ(a − λ1)).  Only the ‖a − λ1‖ entry depends on λ,
/// so the spectral midpoint is the exact minimizer.
double s0_min_shift(const LipNormChain& chain, int n, const Element& a, int window);

struct SequenceComparison {
  double bound = 0.0;
  int level = 0;  // the N attaining the minimum
};

/// min over N of 4·tail_a(N) + cross(N) + 4·tail_b(N).  `cross[N]` bounds the
/// propinquity between the two level-N truncations (infinite when unknown).
SequenceComparison compare_sequences_bound(const InductiveSequence& a, const InductiveSequence& b,
                                           const std::vector<double>& cross);

}  // namespace qms

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qms/bratteli.hpp"
#include "qms/expectations.hpp"
#include "qms/ideals.hpp"
#include "qms/lab/report.hpp"
#include "qms/lipnorms.hpp"
#include "qms/propinquity.hpp"
#include "qms/state_metrics.hpp"

namespace qms::lab {

/// Sample sizes and solver settings shared by every suite.  Each suite derives
/// its own generator from `seed` and a fixed salt, so suites are independent of
/// the order in which they run.
struct SuiteContext {
  std::string experiment;
  std::uint64_t seed = 0;
  int elements = 50;
  int pairs = 100;
  int states = 6;
  int lip_ball = 100;
  int ideals = 10;
  MkOptions solver;
  BridgeOptions bridge;
};

using Rows = std::vector<ReportRow>;

/// C*-identity, submultiplicativity and Jordan/Lie decomposition on every level.
Rows algebra_suite(const InductiveSequence& seq, const SuiteContext& ctx);

/// Embeddings are unital, multiplicative, *-preserving and isometric.
Rows embedding_suite(const InductiveSequence& seq, const SuiteContext& ctx);

/// Idempotence, subalgebra fixing, bimodule identity, positivity, contractivity
/// and trace preservation of every E_{n+1,n}.
Rows expectation_suite(const InductiveSequence& seq, const ExpectationChain& ex, const SuiteContext& ctx,
                       const std::string& tag = "expectation");

/// |L_{n+1}(ι a) − Lₙ(a)| on random self-adjoint a.
Rows stage_equality_suite(const LipNormChain& chain, const SuiteContext& ctx);

/// (2,0)-quasi-Leibniz residuals on random pairs.
Rows quasi_leibniz_suite(const LipNormChain& chain, const SuiteContext& ctx);

/// L vanishes on scalars, is homogeneous and subadditive.
Rows seminorm_suite(const LipNormChain& chain, const SuiteContext& ctx);

/// Trace Lip-norm from a faithful trace μ on A_N against the chain built from
/// restrictions of μ, and composed E_{n,m} against one-shot projections.
Rows trace_compare_suite(const InductiveSequence& seq, const TraceState& mu, const SuiteContext& ctx);

/// Empirical MK diameter lower bounds against 2β(0).
Rows diameter_suite(const LipNormChain& chain, const SuiteContext& ctx);

/// MK brackets on random mixed states; on commutative levels the lower end
/// against the LP oracle, plus symmetry and triangle inequality.
Rows mk_suite(const LipNormChain& chain, const SuiteContext& ctx);

/// Evident bridge lengths against β(n), with witness checks on sampled Lip-ball points.
Rows bridge_suite(const LipNormChain& chain, const SuiteContext& ctx);

/// CAR counterexample: bridge bound 4⁻ⁿ, propinquity bound 4·4⁻ⁿ, empirical ≤ 4⁻ⁿ.
Rows car_suite(int depth, const SuiteContext& ctx);

/// minₗ S₀(ψₙ(a − λ1)) ≤ max{1, 2β(0)/β(n−1)}·Lₙ(a) on windows of length `window`.
Rows s0_suite(const LipNormChain& chain, int window, const SuiteContext& ctx);

/// Propinquity tables: 4Σβ, monotone in both ends, finite ≤ limit bound.
Rows bound_suite(const InductiveSequence& seq, const SuiteContext& ctx);

/// Pair-formula norm against the multiplier norm, block realization and
/// isometric unitized embeddings, for the given ideals.
Rows unitization_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals, const SuiteContext& ctx);

/// Expectation axioms on the unitized chains of the given ideals.
Rows ideal_expectation_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals,
                             const SuiteContext& ctx);

/// Fell metric axioms on every triple drawn from `ideals` plus random ones.
Rows fell_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals, const SuiteContext& ctx);

/// β(j) = 2^{−j−5} with tail 2^{−N−4}: the schedule the Lipschitz certificate accepts.
BetaSchedule certificate_schedule(int depth);

/// Certified propinquity bound ≤ Fell distance on `ctx.ideals` random pairs plus
/// all pairs of `ideals`.
Rows certificate_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals, const BetaSchedule& beta,
                       const SuiteContext& ctx);

/// True when every row holds.
bool all_hold(const Rows& rows);

}  // namespace qms::lab

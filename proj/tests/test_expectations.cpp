#include <doctest.h>

#include <cmath>
#include <random>

#include "qms/expectations.hpp"
#include "support.hpp"

using namespace qms;
using namespace qms::test;

namespace {

Eigen::MatrixXi mat(int rows, int cols, std::initializer_list<int> v) {
  Eigen::MatrixXi m(rows, cols);
  int k = 0;
  for (int x : v) m(k / cols, k % cols) = x, ++k;
  return m;
}

double min_eigenvalue(const Element& x) {
  double lo = 1e300;
  const Element h = x.real_part();
  for (const auto& b : h.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

void check_axioms(const ConditionalExpectation& e, std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  const auto& amb = e.ambient();
  const auto& sub = e.subalgebra();
  const Eigen::MatrixXcd p = e.projector();
  CHECK((p * p - p).norm() <= 1e-9);
  for (int s = 0; s < samples; ++s) {
    const Element x = random_element(amb, rng);
    const Element b = random_element(sub, rng);
    const Element c = random_element(sub, rng);
    const Element ib = e.embedding().apply(b), ic = e.embedding().apply(c);
    CHECK(max_diff(e(ib), b) <= 1e-9);
    CHECK(max_diff(e(ib * x * ic), b * e(x) * c) <= 1e-9 * std::max(1.0, op_norm(b) * op_norm(x) * op_norm(c)));
    CHECK(op_norm(e(x)) <= op_norm(x) + 1e-9);
    CHECK(min_eigenvalue(e(x.adjoint() * x)) >= -1e-9);
    CHECK(std::abs(e.trace()(e.in_ambient(x)) - e.trace()(x)) <= 1e-10 * std::max(1.0, op_norm(x)));
    const Element h = x.real_part();
    CHECK(e(h).self_adjoint_defect() <= 1e-12);
  }
}

}  // namespace

TEST_CASE("trace states") {
  const BlockAlgebra alg({2, 1});
  const auto tau = TraceState::canonical(alg);
  CHECK(tau.weights()[0] == doctest::Approx(0.4));
  CHECK(tau.weights()[1] == doctest::Approx(0.2));
  CHECK(std::abs(tau(Element::identity(alg)) - 1.0) <= 1e-15);
  CHECK_THROWS_AS(TraceState(alg, {0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(TraceState(alg, {0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(TraceState::normalized(alg, {1.0, -1.0}), DomainError);

  const auto seq = family_effros_shen({1, 1}, 2);
  const auto mu = TraceState::canonical(seq.algebra(2));
  const auto r = mu.restrict_to(seq.embedding(1));
  std::mt19937_64 rng(1);
  const Element x = random_element(seq.algebra(1), rng);
  CHECK(std::abs(r(x) - mu(seq.embedding(1).apply(x))) <= 1e-14);
}

TEST_CASE("expectation onto the diagonal of M2") {
  const BlockAlgebra m2({2}), c2({1, 1});
  const auto e = trace_preserving_ce(Embedding::realize(MultiplicityMatrix(c2, m2, mat(2, 1, {1, 1}))),
                                     TraceState::canonical(m2));
  const Element x = single(mat2(1.5, 2.0, -3.0, 4.0));
  // Orthonormal basis of the diagonal for ⟨x,y⟩ = Tr(x*y)/2 is √2·e₁₁, √2·e₂₂;
  // the projection reads off (⟨e₁₁,x⟩/⟨e₁₁,e₁₁⟩, ⟨e₂₂,x⟩/⟨e₂₂,e₂₂⟩) = (x₁₁, x₂₂).
  CHECK(max_diff(e(x), diag(c2, {1.5, 4.0})) <= 1e-15);
  CHECK(max_diff(e.in_ambient(x), single(mat2(1.5, 0, 0, 4.0))) <= 1e-15);
}

TEST_CASE("expectation onto the identity embedding") {
  std::mt19937_64 rng(2);
  const BlockAlgebra alg({2, 3});
  const auto e = trace_preserving_ce(Embedding::identity(alg), TraceState::canonical(alg));
  const Element x = random_element(alg, rng);
  CHECK(max_diff(e(x), x) <= 1e-14);
}

TEST_CASE("expectation onto the scalars is the trace") {
  std::mt19937_64 rng(3);
  const BlockAlgebra c({1}), m2({2});
  const auto tau = TraceState::canonical(m2);
  const auto e = trace_preserving_ce(Embedding::realize(MultiplicityMatrix(c, m2, mat(1, 1, {2}))), tau);
  for (int s = 0; s < 20; ++s) {
    const Element x = random_element(m2, rng);
    const std::complex<double> oracle = tau(x) / tau(Element::identity(m2));  // ⟨1,x⟩/⟨1,1⟩
    CHECK(std::abs(e(x).block(0)(0, 0) - oracle) <= 1e-14);
  }
}

TEST_CASE("composed expectations") {
  const auto seq = family_commutative(2);
  const auto chain = ExpectationChain::canonical(seq);
  std::mt19937_64 rng(4);
  const Element x = random_element(seq.algebra(2), rng);
  CHECK(chain.composed(2, 2).is_identity());
  CHECK(max_diff(chain.composed(2, 2)(x), x) == 0.0);
  CHECK_THROWS_AS(chain.composed(1, 2), DomainError);

  const Element abc = diag(seq.algebra(2), {3.0, 5.0, 11.0});
  // Iterated averaging with the uniform trace on each level:
  // ℂ³ → ℂ²: (a, (b+c)/2); ℂ² → ℂ: mean of the two.
  const double stagewise = 0.5 * (3.0 + 0.5 * (5.0 + 11.0));
  CHECK(std::abs(chain.composed(2, 0)(abc).block(0)(0, 0) - stagewise) <= 1e-14);

  // Restricting the uniform trace of ℂ³ gives ℂ² the weights (1/3, 2/3), and
  // the composite is the plain mean.
  const auto compat = ExpectationChain::from_top_trace(seq, TraceState::canonical(seq.algebra(2)));
  CHECK(std::abs(compat.composed(2, 0)(abc).block(0)(0, 0) - 19.0 / 3.0) <= 1e-14);

  for (int n = 0; n <= 2; ++n) {
    const Element one = chain.composed(n, 0)(Element::identity(seq.algebra(n)));
    CHECK(std::abs(one.block(0)(0, 0) - 1.0) <= 1e-14);
  }

  const auto free = compose_ce(seq, chain.steps(), 2, 0);
  CHECK((free.dense() - chain.composed(2, 0).dense()).norm() <= 1e-15);
  CHECK(compose_ce(seq, chain.steps(), 1, 1).is_identity());
  CHECK_THROWS_AS(compose_ce(seq, chain.steps(), 3, 0), DomainError);
}

TEST_CASE("expectation axioms across families") {
  const InductiveSequence families[] = {family_uhf(2, 3), family_effros_shen({1, 1, 1, 1}, 4),
                                        family_commutative(4), family_compacts(4),
                                        family_effros_shen({2, 1, 3}, 3)};
  std::uint64_t seed = 50;
  for (const auto& s : families) {
    const auto chain = ExpectationChain::canonical(s);
    for (const auto& e : chain.steps()) check_axioms(e, seed++, 60);
  }
  // Non-canonical weights.
  const auto s = family_effros_shen({1, 1, 1}, 3);
  std::vector<TraceState> traces;
  for (const auto& a : s.algebras()) {
    std::vector<double> w;
    for (int i = 0; i < a.num_blocks(); ++i) w.push_back(1.0 + 0.7 * i);
    traces.push_back(TraceState::normalized(a, w));
  }
  const ExpectationChain weighted(s, traces);
  for (const auto& e : weighted.steps()) check_axioms(e, seed++, 60);
}

TEST_CASE("compatible chains match one-shot projections") {
  const auto seq = family_effros_shen({1, 2, 1}, 3);
  const auto mu = TraceState::normalized(seq.algebra(3), {1.0, 3.0});
  const auto chain = ExpectationChain::from_top_trace(seq, mu);
  const int top = seq.depth();
  for (int m = 0; m < top; ++m) {
    const ConditionalExpectation oneshot(seq.embedding(m, top), mu);
    CHECK((chain.composed(top, m).dense() - oneshot.pullback()).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

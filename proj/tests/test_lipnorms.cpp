#include <doctest.h>

#include <cmath>
#include <random>

#include "qms/lipnorms.hpp"
#include "qms/state_metrics.hpp"
#include "support.hpp"

using namespace qms;
using namespace qms::test;

namespace {

std::vector<InductiveSequence> families() {
  return {family_uhf(2, 3), family_effros_shen({1, 1, 1, 1}, 4), family_commutative(5), family_compacts(4)};
}

// E onto diag(b, b) ⊆ M₄: average of the two diagonal 2×2 blocks.
Matrix pinch_m2(const Matrix& a) {
  const Matrix b = 0.5 * (a.block(0, 0, 2, 2) + a.block(2, 2, 2, 2));
  Matrix out = Matrix::Zero(4, 4);
  out.block(0, 0, 2, 2) = b;
  out.block(2, 2, 2, 2) = b;
  return out;
}

}  // namespace

TEST_CASE("chain Lip-norm examples") {
  const auto seq = family_commutative(2);
  const LipNormChain chain(seq);
  std::mt19937_64 rng(1);
  CHECK(chain(0, Element::scalar(seq.algebra(0), 3.0)) == 0.0);
  for (int n = 0; n <= 2; ++n) CHECK(chain(n, Element::scalar(seq.algebra(n), -2.5)) <= 1e-15);

  // E_{1,0}(a) = ((a₁+a₂)/2)·1, so ‖(0,1) − ½·1‖∞/β(0) = 1/2.
  REQUIRE(seq.beta(0) == 1.0);
  const Element a = diag(seq.algebra(1), {0.0, 1.0});
  const double mean = 0.5 * (0.0 + 1.0);
  const double oracle = std::max(std::abs(0.0 - mean), std::abs(1.0 - mean)) / seq.beta(0);
  REQUIRE(oracle == 0.5);
  CHECK(std::abs(chain(1, a) - 0.5) <= 1e-15);

  const Element up = seq.embedding(1).apply(a);
  CHECK(std::abs(chain(2, up) - chain(1, a)) <= 1e-12);
  CHECK_THROWS_AS(chain(2, a), DomainError);
  CHECK_THROWS_AS(chain(3, up), DomainError);
}

TEST_CASE("trace Lip-norm examples") {
  const auto seq = family_uhf(2, 2);
  const TraceLipNorm lip(seq, TraceState::canonical(seq.algebra(2)));
  CHECK(lip(0, Element::scalar(seq.algebra(0), 2.0)) == 0.0);

  // σz ⊗ 1 = diag(1, 1, −1, −1): both pinchings vanish.
  Matrix z = Matrix::Zero(4, 4);
  z.diagonal() << 1.0, 1.0, -1.0, -1.0;
  const Element a = single(z);
  const double r0 = op_norm(single(z - (z.trace() / 4.0) * Matrix::Identity(4, 4)));
  const double r1 = op_norm(single(z - pinch_m2(z)));
  const double oracle = std::max(r0 / seq.beta(0), r1 / seq.beta(1));
  REQUIRE(oracle == 16.0);
  CHECK(std::abs(lip(2, a) - 16.0) <= 1e-12);

  std::mt19937_64 rng(2);
  for (int s = 0; s < 20; ++s) {
    const Element x = random_self_adjoint(seq.algebra(2), rng);
    const Matrix& m = x.block(0);
    const double o0 = op_norm(single(m - (m.trace() / 4.0) * Matrix::Identity(4, 4))) / seq.beta(0);
    const double o1 = op_norm(single(m - pinch_m2(m))) / seq.beta(1);
    CHECK(std::abs(lip(2, x) - std::max(o0, o1)) <= 1e-9);
  }
  CHECK_THROWS_AS(TraceLipNorm(seq, TraceState::canonical(seq.algebra(1))), DomainError);
}

TEST_CASE("trace Lip-norm equals the chain under compatible restrictions") {
  for (const auto& seq : {family_uhf(2, 3), family_effros_shen({1, 2, 1}, 3)}) {
    const auto mu = TraceState::canonical(seq.algebra(seq.depth()));
    const TraceLipNorm tl(seq, mu);
    const LipNormChain chain(seq, ExpectationChain::from_top_trace(seq, mu));
    std::mt19937_64 rng(3);
    for (int n = 0; n <= seq.depth(); ++n) {
      for (int s = 0; s < 30; ++s) {
        const Element a = random_self_adjoint(seq.algebra(n), rng);
        CHECK(std::abs(tl(n, a) - chain(n, a)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("CAR counterexample Lip-norm") {
  CHECK(car_counterexample_lipnorm(2, Element::identity(BlockAlgebra({4}))) == 0.0);
  // σz is traceless with norm one and dim M₂ = 4.
  CHECK(std::abs(car_counterexample_lipnorm(1, single(sigma_z())) - 4.0) <= 1e-15);
  CHECK_THROWS_AS(car_counterexample_lipnorm(1, Element::identity(BlockAlgebra({1, 1}))), DomainError);

  std::mt19937_64 rng(4);
  for (int n = 1; n <= 3; ++n) {
    const BlockAlgebra alg({1 << n});
    for (int s = 0; s < 50; ++s) {
      Element b = random_self_adjoint(alg, rng);
      b *= 1.0 / car_counterexample_lipnorm(n, b);
      const double tau = b.block(0).trace().real() / (1 << n);
      CHECK(op_norm(b.shifted(-tau)) <= std::pow(4.0, -n) + 1e-15);
    }
  }
}

TEST_CASE("quasi-Leibniz residual") {
  const auto seq = family_commutative(1);
  const LipNormChain chain(seq);
  const auto lip = chain.evaluator(1);
  const Element a = diag(seq.algebra(1), {0.0, 1.0});
  const Element b = diag(seq.algebra(1), {1.0, 0.0});
  // a∘b = {a,b} = 0 in ℂ², L(a) = L(b) = 1/2, ‖a‖ = ‖b‖ = 1.
  const double oracle = 0.0 - 2.0 * (1.0 * 0.5 + 1.0 * 0.5);
  CHECK(std::abs(quasi_leibniz_residual(lip, a, b) - oracle) <= 1e-15);
  CHECK(quasi_leibniz_residual(lip, Element::scalar(seq.algebra(1), 2.0), a) <= 0.0);

  std::mt19937_64 rng(5);
  for (const auto& s : families()) {
    const LipNormChain c(s);
    for (int n = 1; n <= s.depth(); ++n) {
      const auto l = c.evaluator(n);
      double worst = -1e300;
      for (int k = 0; k < 200; ++k) {
        worst = std::max(worst, quasi_leibniz_residual(l, random_self_adjoint(s.algebra(n), rng),
                                                       random_self_adjoint(s.algebra(n), rng)));
      }
      CHECK(worst <= 1e-9);
    }
  }
}

TEST_CASE("seminorm axioms, null space and stage equality") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> t(-3.0, 3.0);
  for (const auto& s : families()) {
    const LipNormChain c(s);
    CHECK(c(0, random_element(s.algebra(0), rng)) == 0.0);
    for (int n = 1; n <= s.depth(); ++n) {
      const auto& alg = s.algebra(n);
      for (int k = 0; k < 40; ++k) {
        const Element a = random_self_adjoint(alg, rng);
        const Element b = random_self_adjoint(alg, rng);
        const double la = c(n, a), lb = c(n, b), r = t(rng);
        CHECK(std::abs(c(n, a * r) - std::abs(r) * la) <= 1e-9 * std::max(1.0, la));
        CHECK(c(n, a + b) <= la + lb + 1e-9);
        CHECK(c(n, Element::scalar(alg, r)) == 0.0);
        const double eps = 1e-8 * la;
        CHECK(std::abs(c(n, a + random_self_adjoint(alg, rng) * 1e-8) - la) <= 1e-8 / s.beta(n - 1) + eps);
        if (n < s.depth()) {
          CHECK(std::abs(c(n + 1, s.embedding(n).apply(a)) - la) <= 1e-9);
        }
        // Lip value controls the distance to scalars through the m = 0 term.
        CHECK(dist_to_scalars(a) <= s.beta(0) * la + 1e-12);
      }
      // Near-scalars have small values; small values force near-scalars.
      const Element near = Element::scalar(alg, 0.3) + random_self_adjoint(alg, rng) * 1e-13;
      const double ln = c(n, near);
      if (ln <= 1e-10) CHECK(dist_to_scalars(near) <= 1e-8);
    }
  }
}

TEST_CASE("Lip-norm symmetrizes its input") {
  const auto s = family_uhf(2, 2);
  const LipNormChain c(s);
  std::mt19937_64 rng(7);
  const Element x = random_element(s.algebra(2), rng);
  CHECK(c(2, x) == c(2, x.real_part()));
}

TEST_CASE("diameter estimates") {
  const auto s = family_commutative(1);
  const LipNormChain c(s);
  const auto d = diameter_estimate(c, 1, 2, 1);
  // sup{|a₁ − a₂| : |a₁ − a₂|/2 ≤ 1} = 2.
  CHECK(d.certified_upper == 2.0);
  CHECK(std::abs(d.empirical_lower - 2.0) <= 1e-6);
  const auto z = diameter_estimate(c, 0, 4, 1);
  CHECK(z.empirical_lower == 0.0);
  CHECK(z.certified_upper == 0.0);

  const auto car = family_uhf(2, 2);
  const LipNormChain cc(car);
  const auto e = diameter_estimate(cc, 1, 6, 2);
  CHECK(e.empirical_lower <= 2.0 * car.beta(0) + 1e-6);
  CHECK(e.empirical_lower > 0.0);
  // Cross-check on the diagonal: the commutative restriction ℂ² ⊆ M₂ with the
  // induced Lip-norm has the same δ₁/δ₂ distance, which the LP computes.
  const auto diag_seq = family_commutative(1);
  const LipNormChain dc(diag_seq);
  const double lp = commutative_mk_oracle(dc, 1, QuantumState::point_mass(diag_seq.algebra(1), 0),
                                          QuantumState::point_mass(diag_seq.algebra(1), 1));
  CHECK(e.empirical_lower <= lp + 1e-6);
}

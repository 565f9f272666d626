#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qms/propinquity.hpp"
#include "support.hpp"

using namespace qms;
using namespace qms::test;

namespace {

Element normalized(const ResidualLipNorm& lip, Element a) {
  const double l = lip(a);
  return l > 0.0 ? a * std::complex<double>(1.0 / l) : a;
}

}  // namespace

TEST_CASE("evident bridge on ℂ ⊆ ℂ²") {
  const auto seq = family_commutative(1);
  const LipNormChain chain(seq);
  const auto rep = evident_bridge_length(chain, 0);
  CHECK(rep.certified_upper == 1.0);
  // Lip-ball of ℂ²: |b₁ − b₂|/2 ≤ 1, so sup ‖b − mean(b)‖ = 1.
  CHECK(rep.empirical_lower <= 1.0 + 1e-6);
  CHECK(rep.empirical_lower >= 1.0 - 1e-6);
  CHECK(chain(1, rep.witness_element) <= 1.0 + 1e-9);
  CHECK_THROWS_AS(evident_bridge_length(chain, 1), DomainError);
}

TEST_CASE("evident bridges stay below β(n)") {
  const InductiveSequence families[] = {family_uhf(2, 3), family_effros_shen({1, 1, 1, 1}, 4), family_commutative(4),
                                        family_compacts(4)};
  std::mt19937_64 rng(3);
  for (const auto& s : families) {
    const LipNormChain chain(s);
    for (int n = 0; n < s.depth(); ++n) {
      BridgeOptions opts;
      opts.budget = 400;
      opts.restarts = 8;
      opts.seed = static_cast<std::uint64_t>(n);
      const auto rep = evident_bridge_length(chain, n, opts);
      CHECK(rep.certified_upper == s.beta(n));
      CHECK(rep.empirical_lower <= s.beta(n) + 1e-6);
      CHECK(rep.empirical_lower > 0.0);
      CHECK(chain(n + 1, rep.witness_element) <= 1.0 + 1e-9);
      CHECK(chain(n, rep.witness_partner) <= 1.0 + 1e-9);

      for (int k = 0; k < 40; ++k) {
        const Element b = normalized(chain.at(n + 1), random_self_adjoint(s.algebra(n + 1), rng));
        const Element e = bridge_partner(chain, n, b);
        CHECK(chain(n, e) <= 1.0 + 1e-9);
        CHECK(op_norm(b - s.embedding(n).apply(e)) <= s.beta(n) + 1e-9);
        // The inclusion side matches a ∈ Aₙ with itself.
        const Element a = normalized(chain.at(n), random_self_adjoint(s.algebra(n), rng));
        CHECK(max_diff(bridge_partner(chain, n, s.embedding(n).apply(a)), a) <= 1e-12);
      }
    }
  }
}

TEST_CASE("CAR counterexample bridges") {
  for (int n = 1; n <= 3; ++n) {
    const auto rep = car_bridge_report(n, 64, 7);
    CHECK(rep.certified_upper == std::pow(4.0, -n));
    CHECK(rep.empirical_lower <= std::pow(4.0, -n) + 1e-6);
    CHECK(rep.empirical_lower > 0.0);
    CHECK(car_propinquity_bound(n) == 4.0 / std::pow(4.0, n));
  }
}

TEST_CASE("tunnel Lip-norm") {
  const auto seq = family_commutative(2);
  const LipNormChain chain(seq);
  std::mt19937_64 rng(4);
  const Element a = random_self_adjoint(seq.algebra(1), rng);
  CHECK(std::abs(tunnel_lipnorm(chain, 1, 0.5, a, seq.embedding(1).apply(a)) - chain(1, a)) <= 1e-12);

  const Element one = Element::identity(seq.algebra(0));
  const Element zero = Element::zero(seq.algebra(1));
  const double r = 2.0 * seq.beta(0);
  CHECK(std::abs(tunnel_lipnorm(chain, 0, r, one, zero) - 1.0 / r) <= 1e-15);
  CHECK_THROWS_AS(tunnel_lipnorm(chain, 0, 0.0, one, zero), DomainError);

  // Quotient property: b = ι(a) attains the infimum Lₙ(a); any other b does no better.
  for (int k = 0; k < 30; ++k) {
    const Element x = random_self_adjoint(seq.algebra(1), rng);
    const double la = chain(1, x);
    const Element ix = seq.embedding(1).apply(x);
    CHECK(std::abs(tunnel_lipnorm(chain, 1, 2.0 * seq.beta(1), x, ix) - la) <= 1e-12);
    const Element other = ix + random_self_adjoint(seq.algebra(2), rng) * 0.01;
    CHECK(tunnel_lipnorm(chain, 1, 2.0 * seq.beta(1), x, other) >= la - 1e-12);
  }
}

TEST_CASE("tunnel Lip-norm is (2,0)-quasi-Leibniz") {
  for (const auto& s : {family_effros_shen({1, 2}, 2), family_compacts(3)}) {
    const LipNormChain chain(s);
    std::mt19937_64 rng(5);
    for (int n = 0; n < s.depth(); ++n) {
      const auto lip = tunnel_evaluator(chain, n, 2.0 * s.beta(n));
      const BlockAlgebra sum = direct_sum(s.algebra(n), s.algebra(n + 1));
      for (int k = 0; k < 100; ++k) {
        const Element x = join(sum, random_self_adjoint(s.algebra(n), rng), random_self_adjoint(s.algebra(n + 1), rng));
        const Element y = join(sum, random_self_adjoint(s.algebra(n), rng), random_self_adjoint(s.algebra(n + 1), rng));
        CHECK(quasi_leibniz_residual(lip, x, y) <= 1e-9);
      }
      const auto [p, q] = split(join(sum, Element::identity(s.algebra(n)), Element::zero(s.algebra(n + 1))),
                                s.algebra(n), s.algebra(n + 1));
      CHECK(max_diff(p, Element::identity(s.algebra(n))) == 0.0);
      CHECK(q.max_abs_entry() == 0.0);
    }
  }
}

TEST_CASE("propinquity upper bounds") {
  const auto g = family_commutative(6, BetaSpec::geometric(1.0 / 32.0, 0.5));
  for (int n = 0; n <= 6; ++n) {
    CHECK(propinquity_upper(g, n, n) == 0.0);
    // 4 Σ_{j≥n} 2^{−j−5} = 4·2^{−n−4}.
    CHECK(std::abs(propinquity_upper_to_limit(g, n) - 4.0 * std::ldexp(1.0, -n - 4)) <= 1e-15);
    for (int m = n; m <= 6; ++m) {
      CHECK(propinquity_upper_to_limit(g, n) <=
            propinquity_upper(g, n, m) + propinquity_upper_to_limit(g, m) + 1e-12);
    }
  }
  CHECK_THROWS_AS(propinquity_upper(g, 3, 2), DomainError);
}

TEST_CASE("comparison of sequences") {
  const auto g = family_commutative(6, BetaSpec::geometric(1.0 / 32.0, 0.5));
  const double inf = std::numeric_limits<double>::infinity();
  const auto same = compare_sequences_bound(g, g, std::vector<double>(7, 0.0));
  CHECK(same.level == 6);
  CHECK(std::abs(same.bound - 8.0 * g.beta_tail(6)) <= 1e-15);

  for (int m = 0; m <= 6; ++m) {
    std::vector<double> cross(7, inf);
    for (int k = 0; k <= m; ++k) cross[static_cast<std::size_t>(k)] = 0.0;
    const auto c = compare_sequences_bound(g, g, cross);
    CHECK(c.level == m);
    CHECK(std::abs(c.bound - 8.0 * g.beta_tail(m)) <= 1e-15);
    // Agreement through level n − 1 gives 2^{−n}.
    CHECK(std::abs(c.bound - std::ldexp(1.0, -(m + 1))) <= 1e-15);
  }
  const auto none = compare_sequences_bound(g, g, std::vector<double>(7, inf));
  CHECK(std::isinf(none.bound));
}

TEST_CASE("S0 on windows") {
  const auto seq = family_effros_shen({1, 1, 1, 1, 1}, 5);
  const LipNormChain chain(seq);
  std::mt19937_64 rng(6);
  const Element a = random_self_adjoint(seq.algebra(2), rng);

  // Constant window from level 2.
  CoherenceWindow w;
  w.start = 2;
  for (int k = 2; k < 5; ++k) w.entries.emplace_back(seq.embedding(2, k).apply(a), seq.embedding(2, k + 1).apply(a));
  CHECK(std::abs(s0_seminorm(chain, w) - chain(2, a)) <= 1e-9);

  CoherenceWindow zero;
  for (int k = 0; k < 3; ++k) zero.entries.emplace_back(Element::zero(seq.algebra(k)), Element::zero(seq.algebra(k + 1)));
  CHECK(s0_seminorm(chain, zero) == 0.0);

  CoherenceWindow broken = w;
  broken.entries[1].first = broken.entries[1].first * std::complex<double>(2.0);
  CHECK_THROWS_AS(s0_seminorm(chain, broken), DomainError);

  const auto psi = psi_window(chain, 2, a, 4);
  check_coherent(chain, psi);
  REQUIRE(psi.entries.size() == 4);
  CHECK(psi.entries[0].second.max_abs_entry() == 0.0);
  CHECK(max_diff(psi.entries[1].second, a) == 0.0);
  const double expect = std::max(chain(2, a), op_norm(a) / (2.0 * seq.beta(1)));
  CHECK(std::abs(s0_seminorm(chain, psi) - expect) <= 1e-9);

  const Element scalar_a = random_self_adjoint(seq.algebra(0), rng);
  const auto psi0 = psi_window(chain, 0, scalar_a, 3);
  for (std::size_t k = 0; k < psi0.entries.size(); ++k) {
    CHECK(max_diff(psi0.entries[k].first, seq.embedding(0, static_cast<int>(k)).apply(scalar_a)) == 0.0);
  }
  CHECK_THROWS_AS(psi_window(chain, 3, random_self_adjoint(seq.algebra(3), rng), 3), DomainError);
  CHECK_THROWS_AS(psi_window(chain, 2, a, 6), DomainError);

  for (int n = 1; n < seq.depth(); ++n) {
    for (int k = 0; k < 30; ++k) {
      Element x = random_self_adjoint(seq.algebra(n), rng);
      x *= 1.0 / chain(n, x);
      const double bound = std::max(1.0, 2.0 * seq.beta(0) / seq.beta(n - 1));
      CHECK(s0_min_shift(chain, n, x, seq.depth()) <= bound + 1e-8);
      const auto win = psi_window(chain, n, x, seq.depth());
      const double s0 = s0_seminorm(chain, win);
      for (std::size_t e = 0; e < win.entries.size(); ++e) {
        CHECK(s0 >= chain(win.start + static_cast<int>(e), win.entries[e].first) - 1e-12);
      }
    }
  }
}

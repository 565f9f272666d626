#include <doctest.h>

#include <cmath>
#include <random>

#include "qms/state_metrics.hpp"
#include "support.hpp"

using namespace qms;
using namespace qms::test;

namespace {

QuantumState diag_state(const BlockAlgebra& alg, std::initializer_list<double> p) { return QuantumState(diag(alg, p)); }

// Max of c·x over {x ∈ ℝ² : gᵢ·x ≤ hᵢ} by enumerating pairwise line intersections.
double vertex_max(const std::vector<Eigen::Vector2d>& g, const std::vector<double>& h, const Eigen::Vector2d& c) {
  double best = -1e300;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      Eigen::Matrix2d m;
      m << g[i].transpose(), g[j].transpose();
      if (std::abs(m.determinant()) < 1e-14) continue;
      const Eigen::Vector2d x = m.inverse() * Eigen::Vector2d(h[i], h[j]);
      bool ok = true;
      for (std::size_t k = 0; k < g.size() && ok; ++k) ok = g[k].dot(x) <= h[k] + 1e-12;
      if (ok) best = std::max(best, c.dot(x));
    }
  }
  return best;
}

// ℂ³ at level 2 of the commutative family with canonical traces, a₁ pinned to 0:
// E_{2,0}(a) = a₁/2 + a₂/4 + a₃/4 and E_{2,1}(a) = (a₁, (a₂+a₃)/2).
double c3_oracle(const Eigen::Vector3d& rho, double beta0, double beta1) {
  std::vector<Eigen::Vector2d> g;
  std::vector<double> h;
  auto both = [&](Eigen::Vector2d v, double bound) {
    g.push_back(v), h.push_back(bound);
    g.push_back(-v), h.push_back(bound);
  };
  const Eigen::Vector2d mean(0.25, 0.25);
  both(-mean, beta0);
  both(Eigen::Vector2d(1, 0) - mean, beta0);
  both(Eigen::Vector2d(0, 1) - mean, beta0);
  both(Eigen::Vector2d(0.5, -0.5), beta1);
  return vertex_max(g, h, Eigen::Vector2d(rho(1), rho(2)));
}

}  // namespace

TEST_CASE("quantum states validate") {
  const BlockAlgebra alg({2, 1});
  Element rho(alg);
  rho.block(0) = mat2(0.5, 0, 0, 0.25);
  rho.block(1)(0, 0) = 0.25;
  const QuantumState phi(rho);
  CHECK(phi(Element::identity(alg)) == doctest::Approx(1.0));
  rho.block(1)(0, 0) = 0.3;
  CHECK_THROWS_AS(QuantumState{rho}, DomainError);
  rho.block(1)(0, 0) = 0.25;
  rho.block(0) = mat2(1.0, 0, 0, -0.25);
  CHECK_THROWS_AS(QuantumState{rho}, DomainError);
  rho.block(0) = mat2(0.5, 1, 0, 0.25);
  CHECK_THROWS_AS(QuantumState{rho}, DomainError);

  const auto delta = QuantumState::point_mass(BlockAlgebra({1, 1, 1}), 2);
  CHECK(delta(diag(BlockAlgebra({1, 1, 1}), {4.0, 5.0, 6.0})) == 6.0);
}

TEST_CASE("sample_states") {
  const BlockAlgebra m2({2});
  for (const auto& s : sample_states(m2, 5, StateKind::Pure, 1)) {
    const Matrix& r = s.density().block(0);
    CHECK(std::abs(r.trace() - 1.0) <= 1e-12);
    CHECK((r * r - r).cwiseAbs().maxCoeff() <= 1e-12);  // rank-one projection
  }
  const auto v = sample_states(BlockAlgebra({1, 1, 1}), 3, StateKind::Vertex, 9);
  REQUIRE(v.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(v[static_cast<std::size_t>(i)].density().block(i)(0, 0) == 1.0);
  CHECK_THROWS_AS(sample_states(m2, 2, StateKind::Vertex, 1), DomainError);

  const auto a = sample_states(BlockAlgebra({2, 3}), 4, StateKind::Mixed, 77);
  const auto b = sample_states(BlockAlgebra({2, 3}), 4, StateKind::Mixed, 77);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(max_diff(a[i].density(), b[i].density()) == 0.0);
}

TEST_CASE("simplex") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 2, 3, 2;
  const auto lp = simplex_max(a, Eigen::Vector3d(4, 12, 18), Eigen::Vector2d(3, 5));
  REQUIRE(lp.status == LpResult::Status::Optimal);
  CHECK(lp.value == doctest::Approx(36.0));
  CHECK(lp.x(0) == doctest::Approx(2.0));
  CHECK(lp.x(1) == doctest::Approx(6.0));

  Eigen::MatrixXd u(1, 2);
  u << 1, -1;
  CHECK(simplex_max(u, Eigen::VectorXd::Ones(1), Eigen::Vector2d(0, 1)).status == LpResult::Status::Unbounded);
}

TEST_CASE("MK distance on ℂ²") {
  const auto seq = family_commutative(1);
  const LipNormChain chain(seq);
  const auto d1 = QuantumState::point_mass(seq.algebra(1), 0);
  const auto d2 = QuantumState::point_mass(seq.algebra(1), 1);
  // Vertex enumeration of |a₁ − a₂| ≤ 2β(0) with a₂ pinned: the optimum is 2.
  const double oracle = vertex_max({Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, 1),
                                    Eigen::Vector2d(0, -1)},
                                   {2.0, 2.0, 0.0, 0.0}, Eigen::Vector2d(1, 0));
  REQUIRE(oracle == 2.0);
  CHECK(std::abs(commutative_mk_oracle(chain, 1, d1, d2) - 2.0) <= 1e-9);
  const auto r = mk_distance(chain, 1, d1, d2);
  CHECK(r.lower <= 2.0 + 1e-12);
  CHECK(r.lower >= 2.0 - 1e-6);
  CHECK(r.upper >= 2.0 - 1e-12);
  CHECK(r.upper - r.lower <= 1e-4);

  const auto same = mk_distance(chain, 1, d1, d1);
  CHECK(same.lower == 0.0);
  CHECK(same.upper == 0.0);
  CHECK(commutative_mk_oracle(chain, 1, d1, d1) == 0.0);

  const auto lvl0 = QuantumState::point_mass(seq.algebra(0), 0);
  const auto z = mk_distance(chain, 0, lvl0, lvl0);
  CHECK(z.upper == 0.0);
}

TEST_CASE("MK distance on ℂ³ against vertex enumeration") {
  const auto seq = family_commutative(2);
  const LipNormChain chain(seq);
  const auto& alg = seq.algebra(2);
  const auto phi = diag_state(alg, {0.5, 0.3, 0.2});
  const auto psi = diag_state(alg, {0.1, 0.1, 0.8});
  const double oracle = c3_oracle(Eigen::Vector3d(0.4, 0.2, -0.6), seq.beta(0), seq.beta(1));
  CHECK(std::abs(commutative_mk_oracle(chain, 2, phi, psi) - oracle) <= 1e-9);
  const auto r = mk_distance(chain, 2, phi, psi);
  CHECK(r.lower <= oracle + 1e-9);
  CHECK(r.upper >= oracle - 1e-9);
  CHECK(std::abs(r.lower - oracle) <= 1e-4);
}

TEST_CASE("MK brackets: witness, oracle agreement and metric axioms") {
  for (int depth : {3, 6}) {
    const auto seq = family_commutative(depth);
    const LipNormChain chain(seq);
    const auto& alg = seq.algebra(depth);
    const auto states = sample_states(alg, 6, StateKind::Mixed, 100 + depth);
    const MkOptions opts;
    std::vector<std::vector<double>> lower(states.size(), std::vector<double>(states.size(), 0.0));
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        if (i == j) continue;
        const auto r = mk_distance(chain, depth, states[i], states[j], opts);
        lower[i][j] = r.lower;
        CHECK(r.lower <= r.upper + 1e-12);
        CHECK(r.upper <= 2.0 * seq.beta(0) + 1e-9);
        CHECK(chain(depth, r.witness) <= 1.0 + 1e-9);
        CHECK(std::abs(std::abs(states[i](r.witness) - states[j](r.witness)) - r.lower) <= 1e-10);
        const double exact = commutative_mk_oracle(chain, depth, states[i], states[j]);
        CHECK(r.lower <= exact + 1e-9);
        CHECK(r.upper >= exact - 1e-9);
        CHECK(std::abs(r.lower - exact) <= opts.tol + 1e-6);
      }
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        CHECK(std::abs(lower[i][j] - lower[j][i]) <= 2 * opts.tol);
        for (std::size_t k = 0; k < states.size(); ++k) {
          CHECK(lower[i][k] <= lower[i][j] + lower[j][k] + 3 * opts.tol);
        }
      }
    }
  }
}

TEST_CASE("MK brackets on noncommutative levels") {
  const auto seq = family_effros_shen({1, 1, 1}, 3);
  const LipNormChain chain(seq);
  const auto states = sample_states(seq.algebra(3), 4, StateKind::Pure, 5);
  MkOptions opts;
  opts.max_iterations = 3000;
  for (std::size_t i = 1; i < states.size(); ++i) {
    const auto r = mk_distance(chain, 3, states[0], states[i], opts);
    CHECK(r.lower <= r.upper + 1e-12);
    CHECK(r.lower > 0.0);
    CHECK(r.upper <= 2.0 * seq.beta(0) + 1e-9);
    CHECK(chain(3, r.witness) <= 1.0 + 1e-9);
    CHECK(std::abs(std::abs(states[0](r.witness) - states[i](r.witness)) - r.lower) <= 1e-10);
  }
}

TEST_CASE("oracle refuses noncommutative levels") {
  const auto seq = family_uhf(2, 1);
  const LipNormChain chain(seq);
  const auto s = sample_states(seq.algebra(1), 2, StateKind::Pure, 1);
  CHECK_THROWS_AS(commutative_mk_oracle(chain, 1, s[0], s[1]), DomainError);
}

#include "qms/state_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace qms {

// ---------------------------------------------------------------------------
// QuantumState

QuantumState::QuantumState(Element density) : density_(std::move(density)) {
  if (density_.self_adjoint_defect() > kTol) throw DomainError("state: density is not self-adjoint");
  density_ = density_.real_part();
  double total = 0.0;
  for (const auto& b : density_.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTol) throw DomainError("state: density is not positive");
    total += b.trace().real();
  }
  if (std::abs(total - 1.0) > kTol) throw DomainError("state: total trace " + std::to_string(total) + " != 1");
}

QuantumState QuantumState::point_mass(const BlockAlgebra& algebra, int block) {
  if (block < 0 || block >= algebra.num_blocks()) throw DomainError("point mass: block out of range");
  Element rho(algebra);
  rho.block(block).diagonal().setConstant(1.0 / algebra.block_size(block));
  return QuantumState(std::move(rho));
}

double QuantumState::operator()(const Element& a) const {
  density_.check_same(a);
  return density_.coordinates().dot(a.coordinates()).real();
}

std::vector<QuantumState> sample_states(const BlockAlgebra& algebra, int count, StateKind kind, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_states: count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<QuantumState> out;

  if (kind == StateKind::Vertex) {
    if (!algebra.is_commutative()) throw DomainError("vertex states need a commutative algebra");
    std::vector<int> idx(static_cast<std::size_t>(algebra.num_blocks()));
    std::iota(idx.begin(), idx.end(), 0);
    if (count < algebra.num_blocks()) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(static_cast<std::size_t>(count));
      std::sort(idx.begin(), idx.end());
    }
    for (int i : idx) out.push_back(QuantumState::point_mass(algebra, i));
    return out;
  }

  std::uniform_int_distribution<int> pick(0, algebra.num_blocks() - 1);
  for (int s = 0; s < count; ++s) {
    Element rho(algebra);
    if (kind == StateKind::Pure) {
      const int i = pick(rng);
      const int k = algebra.block_size(i);
      Vector v(k);
      for (int r = 0; r < k; ++r) v(r) = {g(rng), g(rng)};
      v.normalize();
      rho.block(i) = v * v.adjoint();
    } else {
      double total = 0.0;
      for (int i = 0; i < algebra.num_blocks(); ++i) {
        const int k = algebra.block_size(i);
        Matrix w(k, k);
        for (int c = 0; c < k; ++c) {
          for (int r = 0; r < k; ++r) w(r, c) = {g(rng), g(rng)};
        }
        rho.block(i) = w * w.adjoint();
        total += rho.block(i).trace().real();
      }
      rho *= 1.0 / total;
    }
    out.emplace_back(rho.real_part());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monge–Kantorovich bracket

namespace {

double real_dot(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) { return x.dot(y).real(); }

Eigen::VectorXcd hermitize(const BlockAlgebra& alg, const Eigen::VectorXcd& v) {
  return Element::from_coordinates(alg, v).real_part().coordinates();
}

// Prox of t·‖·‖₁ (trace norm): soft-threshold the spectrum blockwise.
Eigen::VectorXcd soft_threshold(const BlockAlgebra& alg, const Eigen::VectorXcd& v, double t) {
  Element x = Element::from_coordinates(alg, v).real_part();
  for (int i = 0; i < alg.num_blocks(); ++i) {
    auto& b = x.block(i);
    if (b.rows() == 1) {
      const double z = b(0, 0).real();
      b(0, 0) = std::copysign(std::max(std::abs(z) - t, 0.0), z);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(b);
    Eigen::VectorXd lam = es.eigenvalues();
    for (Eigen::Index k = 0; k < lam.size(); ++k) lam(k) = std::copysign(std::max(std::abs(lam(k)) - t, 0.0), lam(k));
    b = es.eigenvectors() * lam.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
  }
  return x.real_part().coordinates();
}

double trace_norm(const BlockAlgebra& alg, const Eigen::VectorXcd& v) {
  const Element x = Element::from_coordinates(alg, v).real_part();
  double s = 0.0;
  for (const auto& b : x.blocks()) {
    if (b.rows() == 1) {
      s += std::abs(b(0, 0).real());
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    s += es.eigenvalues().cwiseAbs().sum();
  }
  return s;
}

// min over real c of ‖r + c·w‖₁ for a density w; convex in c, and the
// minimizer satisfies |c| ≤ 2‖r‖₁.
double shifted_trace_norm(const BlockAlgebra& alg, const Eigen::VectorXcd& r, const Eigen::VectorXcd& w) {
  double lo = -2.0 * trace_norm(alg, r);
  double hi = -lo;
  if (alg.is_commutative()) {
    // Weighted median of −rᵢ/wᵢ.
    std::vector<std::pair<double, double>> pts;
    for (Eigen::Index i = 0; i < r.size(); ++i) pts.emplace_back(-r(i).real() / w(i).real(), w(i).real());
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (const auto& [c, wt] : pts) {
      acc += wt;
      if (acc >= 0.5) return trace_norm(alg, r + c * w);
    }
    return trace_norm(alg, r);
  }
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = trace_norm(alg, r + x1 * w), f2 = trace_norm(alg, r + x2 * w);
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = trace_norm(alg, r + x1 * w);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = trace_norm(alg, r + x2 * w);
    }
  }
  return std::min({f1, f2, trace_norm(alg, r)});
}

// ‖K‖² for K a = (D_m a)_m, by power iteration on Σ D_m†D_m.
double operator_norm_squared(const ResidualLipNorm& lip) {
  const auto& alg = lip.domain();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  Eigen::VectorXcd v = random_self_adjoint(alg, rng).coordinates();
  double est = 0.0;
  for (int it = 0; it < 300; ++it) {
    const double nv = v.norm();
    if (nv == 0.0) return 1.0;
    v /= nv;
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(v.size());
    for (const auto& t : lip.terms()) w += t.apply_adjoint(t.apply(v));
    w = hermitize(alg, w);
    const double next = real_dot(v, w);
    if (it > 20 && std::abs(next - est) <= 1e-10 * next) {
      est = next;
      break;
    }
    est = next;
    v = w;
  }
  return est;
}

}  // namespace

MkResult mk_distance(const ResidualLipNorm& lip, const QuantumState& phi, const QuantumState& psi,
                     const MkOptions& options) {
  const auto& alg = lip.domain();
  if (phi.algebra() != alg || psi.algebra() != alg) throw DomainError("mk_distance: states live on another level");
  if (!(options.tol > 0.0)) throw DomainError("mk_distance: tolerance must be positive");

  MkResult res;
  res.witness = Element::zero(alg);
  const Eigen::VectorXcd rho = (phi.density() - psi.density()).coordinates();
  if (lip.size() == 0 || rho.cwiseAbs().maxCoeff() == 0.0) {
    res.converged = true;
    return res;
  }

  const auto& terms = lip.terms();
  const int m_count = lip.size();
  int scalar_term = -1;
  for (int m = 0; m < m_count; ++m) {
    if (terms[static_cast<std::size_t>(m)].projects_to_scalars()) {
      scalar_term = m;
      break;
    }
  }
  if (scalar_term < 0) throw DomainError("mk_distance: Lip-norm has no term onto the scalars");

  const Element unit = Element::identity(alg);
  const Eigen::VectorXcd unit_v = unit.coordinates();
  const double unit_trace = alg.matrix_size();

  // The scalar term reads ‖a − ω(a)1‖ for the state ω with this density, so its
  // dual variable is only determined up to multiples of the density.
  const Eigen::VectorXcd omega_density = 
      terms[static_cast<std::size_t>(scalar_term)].project.adjoint() * Eigen::VectorXcd::Ones(1);

  // Initial certificate: y = 0 except the scalar term, which absorbs ρ.
  res.upper = terms[static_cast<std::size_t>(scalar_term)].beta * trace_norm(alg, rho);

  // Chambolle–Pock steps with τσ‖K‖² < 1.
  const double step = 0.95 / std::sqrt(1.02 * operator_norm_squared(lip));

  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(rho.size());
  Eigen::VectorXcd abar = a;
  std::vector<Eigen::VectorXcd> y;
  for (const auto& t : terms) y.push_back(Eigen::VectorXcd::Zero(t.out.dimension()));

  auto try_lower = [&](const Eigen::VectorXcd& v) {
    const Element x = Element::from_coordinates(alg, v).real_part();
    const double l = lip(x);
    if (!(l > 0.0)) return;
    Element w = x * std::complex<double>(1.0 / l);
    double val = real_dot(rho, w.coordinates());
    if (val < 0) {
      w = -w;
      val = -val;
    }
    // Guard the feasibility of the rescaled witness against rounding.
    const double lw = lip(w);
    if (lw > 1.0) {
      w *= std::complex<double>(1.0 / lw);
      val /= lw;
    }
    if (val > res.lower) {
      res.lower = val;
      res.witness = w;
    }
  };

  auto try_upper = [&](const std::vector<Eigen::VectorXcd>& y) {
    Eigen::VectorXcd r = rho;
    double bound = 0.0;
    for (int m = 0; m < m_count; ++m) {
      if (m == scalar_term) continue;
      const auto& t = terms[static_cast<std::size_t>(m)];
      r -= t.apply_adjoint(y[static_cast<std::size_t>(m)]);
      bound += t.beta * trace_norm(t.out, y[static_cast<std::size_t>(m)]);
    }
    // r is traceless in exact arithmetic; drop the rounding residue.
    r -= (unit_v.dot(r) / unit_trace) * unit_v;
    bound += terms[static_cast<std::size_t>(scalar_term)].beta * shifted_trace_norm(alg, r, omega_density);
    res.upper = std::min(res.upper, bound);
  };

  for (int it = 1; it <= options.max_iterations; ++it) {
    for (int m = 0; m < m_count; ++m) {
      const auto& t = terms[static_cast<std::size_t>(m)];
      auto& ym = y[static_cast<std::size_t>(m)];
      ym = soft_threshold(t.out, ym + step * t.apply(abar), step * t.beta);
    }
    Eigen::VectorXcd grad = rho;
    for (int m = 0; m < m_count; ++m) grad -= terms[static_cast<std::size_t>(m)].apply_adjoint(y[static_cast<std::size_t>(m)]);
    Eigen::VectorXcd next = hermitize(alg, a + step * grad);
    // The objective and every constraint ignore the scalar direction; pin it.
    next -= (unit_v.dot(next) / unit_trace) * unit_v;
    abar = 2.0 * next - a;
    a = std::move(next);
    res.iterations = it;

    if (it % options.check_every == 0 || it == options.max_iterations) {
      try_lower(a);
      try_upper(y);

      if (res.upper - res.lower <= options.tol) {
        res.converged = true;
        break;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Simplex oracle

LpResult simplex_max(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index vars = a.cols();
  if (b.size() != rows || c.size() != vars) throw StructuralError("simplex: shape mismatch");
  if (rows > 0 && b.minCoeff() < 0.0) throw DomainError("simplex: origin must be feasible (b >= 0)");
  constexpr double eps = 1e-12;

  // Tableau [A I | b] with objective row [−c 0 | 0].
  const Eigen::Index cols = vars + rows;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, cols + 1);
  t.topLeftCorner(rows, vars) = a;
  t.block(0, vars, rows, rows).setIdentity();
  t.topRightCorner(rows, 1) = b;
  t.bottomLeftCorner(1, vars) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  std::iota(basis.begin(), basis.end(), vars);

  LpResult res;
  for (long guard = 0; guard < 1000000; ++guard) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (t(rows, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (t(i, enter) > eps) best = std::min(best, t(i, cols) / t(i, enter));
    }
    Eigen::Index leave = -1;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (t(i, enter) > eps && t(i, cols) / t(i, enter) <= best + eps &&
          (leave < 0 || basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        leave = i;
      }
    }
    if (leave < 0) {
      res.status = LpResult::Status::Unbounded;
      return res;
    }
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= rows; ++i) {
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  res.x = Eigen::VectorXd::Zero(vars);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (basis[static_cast<std::size_t>(i)] < vars) res.x(basis[static_cast<std::size_t>(i)]) = t(i, cols);
  }
  res.value = c.dot(res.x);
  return res;
}

double commutative_mk_oracle(const ResidualLipNorm& lip, const QuantumState& phi, const QuantumState& psi) {
  const auto& alg = lip.domain();
  if (!alg.is_commutative()) throw DomainError("commutative oracle needs a commutative level");
  if (phi.algebra() != alg || psi.algebra() != alg) throw DomainError("oracle: states live on another level");
  const Eigen::Index d = alg.dimension();
  const Eigen::VectorXd rho = (phi.density() - psi.density()).coordinates().real();
  if (lip.size() == 0 || rho.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  std::vector<Eigen::MatrixXd> rows;
  std::vector<double> bounds;
  for (const auto& t : lip.terms()) {
    if (!t.out.is_commutative()) throw DomainError("commutative oracle needs commutative residual spaces");
    Eigen::MatrixXcd dm(t.out.dimension(), d);
    for (Eigen::Index k = 0; k < d; ++k) dm.col(k) = t.apply(Eigen::VectorXcd::Unit(d, k));
    rows.push_back(dm.real());
    bounds.push_back(t.beta);
  }
  Eigen::Index total = 0;
  for (const auto& r : rows) total += 2 * r.rows();

  // a = u − v with u, v ≥ 0; constraints ±(D_m a)_k ≤ β(m).
  Eigen::MatrixXd a(total, 2 * d);
  Eigen::VectorXd b(total);
  Eigen::Index at = 0;
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const auto& r = rows[m];
    for (Eigen::Index k = 0; k < r.rows(); ++k) {
      a.row(at) << r.row(k), -r.row(k);
      b(at++) = bounds[m];
      a.row(at) << -r.row(k), r.row(k);
      b(at++) = bounds[m];
    }
  }
  Eigen::VectorXd c(2 * d);
  c << rho, -rho;
  const auto lp = simplex_max(a, b, c);
  if (lp.status != LpResult::Status::Optimal) throw NumericError("commutative oracle: LP did not reach an optimum");
  return lp.value;
}

// ---------------------------------------------------------------------------
// Diameter

DiameterEstimate diameter_estimate(const LipNormChain& chain, int n, int sample_count, std::uint64_t seed) {
  return diameter_estimate(chain, n, sample_count, seed, MkOptions{});
}

DiameterEstimate diameter_estimate(const LipNormChain& chain, int n, int sample_count, std::uint64_t seed,
                                   const MkOptions& options) {
  if (n < 0 || n > chain.depth()) throw DomainError("diameter: level out of range");
  DiameterEstimate est;
  if (n == 0) return est;  // A₀ = ℂ has a single state
  est.certified_upper = 2.0 * chain.beta(0);
  const auto& alg = chain.sequence().algebra(n);
  const auto kind = alg.is_commutative() ? StateKind::Vertex : StateKind::Pure;
  const auto states = sample_states(alg, std::max(sample_count, 2), kind, seed);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      est.empirical_lower = std::max(est.empirical_lower, mk_distance(chain.at(n), states[i], states[j], options).lower);
    }
  }
  return est;
}

}  // namespace qms

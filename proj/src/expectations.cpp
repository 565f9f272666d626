#include "qms/expectations.hpp"

#include <cmath>
#include <string>

namespace qms {

// ---------------------------------------------------------------------------
// TraceState

TraceState::TraceState(BlockAlgebra algebra, std::vector<double> weights)
    : algebra_(std::move(algebra)), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != algebra_.num_blocks()) {
    throw StructuralError("trace: one weight per block required");
  }
  double total = 0.0;
  for (int i = 0; i < algebra_.num_blocks(); ++i) {
    const double w = weights_[static_cast<std::size_t>(i)];
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("trace is not faithful: weights must be positive");
    total += w * algebra_.block_size(i);
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("trace is not normalized: tau(1) = " + std::to_string(total));
}

TraceState TraceState::canonical(const BlockAlgebra& algebra) {
  std::vector<double> w;
  for (int k : algebra.sizes()) w.push_back(static_cast<double>(k));
  return normalized(algebra, std::move(w));
}

TraceState TraceState::normalized(const BlockAlgebra& algebra, std::vector<double> raw_weights) {
  if (static_cast<int>(raw_weights.size()) != algebra.num_blocks()) {
    throw StructuralError("trace: one weight per block required");
  }
  double total = 0.0;
  for (int i = 0; i < algebra.num_blocks(); ++i) {
    if (!(raw_weights[static_cast<std::size_t>(i)] > 0.0)) throw DomainError("trace is not faithful");
    total += raw_weights[static_cast<std::size_t>(i)] * algebra.block_size(i);
  }
  for (double& w : raw_weights) w /= total;
  return TraceState(algebra, std::move(raw_weights));
}

std::complex<double> TraceState::operator()(const Element& x) const {
  if (x.algebra() != algebra_) throw StructuralError("trace applied to an element of another algebra");
  return weighted_trace(x, weights_);
}

TraceState TraceState::restrict_to(const Embedding& embedding) const {
  if (embedding.target() != algebra_) throw StructuralError("restriction: embedding does not land in this algebra");
  const auto m = embedding.multiplicities();
  std::vector<double> w(static_cast<std::size_t>(embedding.source().num_blocks()), 0.0);
  for (int i = 0; i < embedding.source().num_blocks(); ++i) {
    for (int j = 0; j < algebra_.num_blocks(); ++j) w[static_cast<std::size_t>(i)] += m(i, j) * weights_[static_cast<std::size_t>(j)];
  }
  return normalized(embedding.source(), std::move(w));
}

// ---------------------------------------------------------------------------
// LinearMap

Element LinearMap::operator()(const Element& x) const {
  if (x.algebra() != source) throw StructuralError("linear map applied to an element of another algebra");
  return Element::from_coordinates(target, apply(x.coordinates()));
}

Eigen::MatrixXcd LinearMap::dense() const {
  if (is_identity()) return Eigen::MatrixXcd::Identity(source.dimension(), source.dimension());
  return matrix;
}

// ---------------------------------------------------------------------------
// ConditionalExpectation

namespace {

// Per-coordinate √w for the inner product ⟨x, y⟩ = τ(x*y).
Eigen::VectorXd sqrt_weights(const TraceState& tau) {
  const auto& alg = tau.algebra();
  Eigen::VectorXd s(alg.dimension());
  for (int i = 0; i < alg.num_blocks(); ++i) {
    const auto k2 = static_cast<Eigen::Index>(alg.block_size(i)) * alg.block_size(i);
    s.segment(alg.offset(i), k2).setConstant(std::sqrt(tau.weights()[static_cast<std::size_t>(i)]));
  }
  return s;
}

}  // namespace

ConditionalExpectation::ConditionalExpectation(Embedding sub, TraceState tau)
    : sub_(std::move(sub)), tau_(std::move(tau)) {
  if (tau_.algebra() != sub_.target()) throw StructuralError("expectation: trace lives on a different algebra");

  // Columns of W^{1/2}J span the embedded subalgebra in the Euclidean picture.
  const Eigen::VectorXd sw = sqrt_weights(tau_);
  const Eigen::MatrixXcd basis = sw.asDiagonal() * Eigen::MatrixXcd(sub_.coordinate_matrix());
  const Eigen::Index d = basis.cols();

  // Classical Gram–Schmidt with one full reorthogonalization pass.
  Eigen::MatrixXcd q(basis.rows(), d);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXcd v = basis.col(k);
    const double original = v.norm();
    for (int pass = 0; pass < 2 && k > 0; ++pass) {
      const Eigen::VectorXcd h = q.leftCols(k).adjoint() * v;
      v.noalias() -= q.leftCols(k) * h;
      r.col(k).head(k) += h;
    }
    const double pivot = v.norm();
    if (!(pivot > kPivotTol * std::max(1.0, original))) {
      throw NumericError("expectation: singular Gram matrix at basis vector " + std::to_string(k));
    }
    r(k, k) = pivot;
    q.col(k) = v / pivot;
  }
  // ι⁻¹ ∘ P = R⁻¹ Qᴴ W^{1/2}.
  const Eigen::MatrixXcd rhs = q.adjoint() * sw.asDiagonal();
  pullback_ = r.triangularView<Eigen::Upper>().solve(rhs);
}

Element ConditionalExpectation::operator()(const Element& x) const {
  if (x.algebra() != ambient()) throw StructuralError("expectation applied to an element of another algebra");
  return Element::from_coordinates(subalgebra(), pullback_ * x.coordinates());
}

Element ConditionalExpectation::in_ambient(const Element& x) const { return sub_.apply((*this)(x)); }

Eigen::MatrixXcd ConditionalExpectation::projector() const { return sub_.coordinate_matrix() * pullback_; }

// ---------------------------------------------------------------------------
// ExpectationChain

ExpectationChain::ExpectationChain(const InductiveSequence& seq, std::vector<TraceState> traces)
    : traces_(std::move(traces)) {
  if (static_cast<int>(traces_.size()) != seq.depth() + 1) throw StructuralError("need one trace per level");
  for (int n = 0; n < seq.depth(); ++n) {
    steps_.emplace_back(seq.embedding(n), traces_[static_cast<std::size_t>(n + 1)]);
  }
  composed_.resize(static_cast<std::size_t>(seq.depth()) + 1);
  for (int n = 0; n <= seq.depth(); ++n) {
    auto& row = composed_[static_cast<std::size_t>(n)];
    row.resize(static_cast<std::size_t>(n) + 1);
    const auto& an = seq.algebra(n);
    row[static_cast<std::size_t>(n)] = LinearMap{an, an, {}};
    for (int m = n - 1; m >= 0; --m) {
      const auto& above = row[static_cast<std::size_t>(m) + 1];
      const auto& step = steps_[static_cast<std::size_t>(m)].pullback();
      row[static_cast<std::size_t>(m)] =
          LinearMap{an, seq.algebra(m), above.is_identity() ? step : Eigen::MatrixXcd(step * above.matrix)};
    }
  }
}

ExpectationChain ExpectationChain::canonical(const InductiveSequence& seq) {
  std::vector<TraceState> traces;
  for (const auto& a : seq.algebras()) traces.push_back(TraceState::canonical(a));
  return ExpectationChain(seq, std::move(traces));
}

ExpectationChain ExpectationChain::from_top_trace(const InductiveSequence& seq, const TraceState& mu) {
  if (mu.algebra() != seq.algebra(seq.depth())) throw StructuralError("top trace must live on A_N");
  std::vector<TraceState> traces;
  for (int n = 0; n <= seq.depth(); ++n) traces.push_back(mu.restrict_to(seq.embedding(n, seq.depth())));
  return ExpectationChain(seq, std::move(traces));
}

const LinearMap& ExpectationChain::composed(int n, int m) const {
  if (n < 0 || n > depth() || m < 0 || m > n) throw DomainError("E_{n,m}: levels out of range");
  return composed_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

LinearMap compose_ce(const InductiveSequence& seq, const std::vector<ConditionalExpectation>& ces, int n, int m) {
  if (n < 0 || n > seq.depth() || m < 0 || m > n) throw DomainError("compose_ce: levels out of range");
  if (static_cast<int>(ces.size()) < n) throw DomainError("compose_ce: missing stage expectations");
  const auto& an = seq.algebra(n);
  Eigen::MatrixXcd mat;
  for (int k = n - 1; k >= m; --k) {
    const auto& e = ces[static_cast<std::size_t>(k)];
    if (e.ambient() != seq.algebra(k + 1) || e.subalgebra() != seq.algebra(k)) {
      throw StructuralError("compose_ce: expectation " + std::to_string(k) + " does not match the sequence");
    }
    mat = k == n - 1 ? e.pullback() : Eigen::MatrixXcd(e.pullback() * mat);
  }
  return LinearMap{an, seq.algebra(m), std::move(mat)};
}

}  // namespace qms

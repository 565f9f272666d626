#include "qms/bratteli.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace qms {

// ---------------------------------------------------------------------------
// MultiplicityMatrix

MultiplicityMatrix::MultiplicityMatrix(BlockAlgebra source, BlockAlgebra target, Eigen::MatrixXi mult)
    : source_(std::move(source)), target_(std::move(target)), mult_(std::move(mult)) {
  if (mult_.rows() != source_.num_blocks() || mult_.cols() != target_.num_blocks()) {
    throw DiagramError("multiplicity matrix shape " + std::to_string(mult_.rows()) + "x" +
                       std::to_string(mult_.cols()) + " does not match block counts");
  }
  if (mult_.size() > 0 && mult_.minCoeff() < 0) throw DiagramError("negative multiplicity");
  for (int j = 0; j < target_.num_blocks(); ++j) {
    long long filled = 0;
    for (int i = 0; i < source_.num_blocks(); ++i) filled += static_cast<long long>(mult_(i, j)) * source_.block_size(i);
    if (filled != target_.block_size(j)) {
      throw DiagramError("embedding is not unital at target block " + std::to_string(j) + ": " +
                         std::to_string(filled) + " != " + std::to_string(target_.block_size(j)));
    }
  }
}

MultiplicityMatrix MultiplicityMatrix::then(const MultiplicityMatrix& next) const {
  if (next.source_ != target_) throw DiagramError("cannot compose: algebras do not chain");
  return MultiplicityMatrix(source_, next.target_, mult_ * next.mult_);
}

// ---------------------------------------------------------------------------
// Embedding

Embedding::Embedding(BlockAlgebra source, BlockAlgebra target, std::vector<std::vector<Placement>> placements)
    : source_(std::move(source)), target_(std::move(target)), placements_(std::move(placements)) {
  if (static_cast<int>(placements_.size()) != target_.num_blocks()) {
    throw DiagramError("embedding: one placement list per target block required");
  }
  for (int j = 0; j < target_.num_blocks(); ++j) {
    int cursor = 0;
    for (const auto& p : placements_[static_cast<std::size_t>(j)]) {
      if (p.source_block < 0 || p.source_block >= source_.num_blocks()) {
        throw DiagramError("embedding: placement refers to a missing source block");
      }
      if (p.offset != cursor) throw DiagramError("embedding: placements must tile the diagonal in order");
      cursor += source_.block_size(p.source_block);
    }
    if (cursor != target_.block_size(j)) {
      throw DiagramError("embedding is not unital at target block " + std::to_string(j));
    }
  }
}

Embedding Embedding::realize(const MultiplicityMatrix& m) {
  const auto& src = m.source();
  const auto& tgt = m.target();
  std::vector<std::vector<Placement>> placements(static_cast<std::size_t>(tgt.num_blocks()));
  for (int j = 0; j < tgt.num_blocks(); ++j) {
    int offset = 0;
    for (int i = 0; i < src.num_blocks(); ++i) {
      for (int c = 0; c < m(i, j); ++c) {
        placements[static_cast<std::size_t>(j)].push_back({i, offset});
        offset += src.block_size(i);
      }
    }
  }
  return Embedding(src, tgt, std::move(placements));
}

Embedding Embedding::identity(const BlockAlgebra& algebra) {
  std::vector<std::vector<Placement>> placements;
  for (int i = 0; i < algebra.num_blocks(); ++i) placements.push_back({{i, 0}});
  return Embedding(algebra, algebra, std::move(placements));
}

Element Embedding::apply(const Element& x) const {
  if (x.algebra() != source_) throw StructuralError("embedding applied to an element of another algebra");
  Element y(target_);
  for (int j = 0; j < target_.num_blocks(); ++j) {
    auto& out = y.block(j);
    for (const auto& p : placements_[static_cast<std::size_t>(j)]) {
      const int k = source_.block_size(p.source_block);
      out.block(p.offset, p.offset, k, k) = x.block(p.source_block);
    }
  }
  return y;
}

Embedding Embedding::then(const Embedding& next) const {
  if (next.source_ != target_) throw DiagramError("cannot compose embeddings: algebras do not chain");
  std::vector<std::vector<Placement>> placements(static_cast<std::size_t>(next.target_.num_blocks()));
  for (int l = 0; l < next.target_.num_blocks(); ++l) {
    for (const auto& q : next.placements_[static_cast<std::size_t>(l)]) {
      for (const auto& p : placements_[static_cast<std::size_t>(q.source_block)]) {
        placements[static_cast<std::size_t>(l)].push_back({p.source_block, q.offset + p.offset});
      }
    }
  }
  return Embedding(source_, next.target_, std::move(placements));
}

MultiplicityMatrix Embedding::multiplicities() const {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(source_.num_blocks(), target_.num_blocks());
  for (int j = 0; j < target_.num_blocks(); ++j) {
    for (const auto& p : placements_[static_cast<std::size_t>(j)]) ++m(p.source_block, j);
  }
  return MultiplicityMatrix(source_, target_, m);
}

Eigen::SparseMatrix<std::complex<double>> Embedding::coordinate_matrix() const {
  using Triplet = Eigen::Triplet<std::complex<double>>;
  std::vector<Triplet> entries;
  for (int j = 0; j < target_.num_blocks(); ++j) {
    const int l = target_.block_size(j);
    const auto tgt0 = target_.offset(j);
    for (const auto& p : placements_[static_cast<std::size_t>(j)]) {
      const int k = source_.block_size(p.source_block);
      const auto src0 = source_.offset(p.source_block);
      for (int c = 0; c < k; ++c) {
        for (int r = 0; r < k; ++r) {
          entries.emplace_back(tgt0 + static_cast<Eigen::Index>(p.offset + c) * l + (p.offset + r),
                               src0 + static_cast<Eigen::Index>(c) * k + r, 1.0);
        }
      }
    }
  }
  Eigen::SparseMatrix<std::complex<double>> j(target_.dimension(), source_.dimension());
  j.setFromTriplets(entries.begin(), entries.end());
  return j;
}

// ---------------------------------------------------------------------------
// BetaSchedule

BetaSchedule::BetaSchedule(std::vector<double> values, double remainder)
    : values_(std::move(values)), remainder_(remainder) {
  for (double b : values_) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("beta values must be positive and finite");
  }
  if (!(remainder_ >= 0.0) || !std::isfinite(remainder_)) throw DomainError("beta remainder must be finite");
}

double BetaSchedule::tail(int n) const {
  if (n < 0 || n > size()) throw DomainError("beta tail index out of range");
  double s = remainder_;
  for (int j = size() - 1; j >= n; --j) s += values_[static_cast<std::size_t>(j)];
  return s;
}

double BetaSchedule::inverse(int j) const {
  if (j == -1) return 0.0;
  return 1.0 / (*this)(j);
}

// ---------------------------------------------------------------------------
// InductiveSequence

InductiveSequence::InductiveSequence(std::string family, std::vector<BlockAlgebra> algebras,
                                     std::vector<Embedding> embeddings, BetaSchedule beta)
    : family_(std::move(family)),
      algebras_(std::move(algebras)),
      embeddings_(std::move(embeddings)),
      beta_(std::move(beta)) {
  if (algebras_.empty()) throw DiagramError("sequence needs at least A0");
  if (algebras_[0].sizes() != std::vector<int>{1}) throw DiagramError("A0 must be the scalars");
  if (embeddings_.size() + 1 != algebras_.size()) throw DiagramError("need one embedding per step");
  for (std::size_t n = 0; n < embeddings_.size(); ++n) {
    if (embeddings_[n].source() != algebras_[n] || embeddings_[n].target() != algebras_[n + 1]) {
      throw DiagramError("embedding " + std::to_string(n) + " does not connect consecutive levels");
    }
  }
  if (beta_.size() != depth()) {
    throw DomainError("beta schedule needs exactly " + std::to_string(depth()) + " values");
  }
  composed_.resize(algebras_.size());
  for (std::size_t n = 0; n < algebras_.size(); ++n) {
    for (std::size_t m = 0; m < n; ++m) composed_[n].push_back(composed_[n - 1][m].then(embeddings_[n - 1]));
    composed_[n].push_back(Embedding::identity(algebras_[n]));
  }
}

const Embedding& InductiveSequence::embedding(int m, int n) const {
  if (m < 0 || n > depth() || m > n) throw DomainError("embedding levels out of range");
  return composed_[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

InductiveSequence InductiveSequence::with_beta(BetaSchedule beta) const {
  return InductiveSequence(family_, algebras_, embeddings_, std::move(beta));
}

// ---------------------------------------------------------------------------
// Families

namespace {

void check_depth(int depth, const SequenceLimits& limits) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  if (depth > limits.max_depth) {
    throw CapacityError("depth " + std::to_string(depth) + " exceeds cap " + std::to_string(limits.max_depth));
  }
}

// `power_remainder(k)` bounds Σ_{j≥N} 1/dim(Aⱼ)^k for the family's continuation.
BetaSchedule make_beta(const BetaSpec& spec, const std::vector<BlockAlgebra>& algebras,
                       const std::function<double(double)>& power_remainder) {
  const int depth = static_cast<int>(algebras.size()) - 1;
  std::vector<double> values;
  switch (spec.kind) {
    case BetaSpec::Kind::DimPower: {
      if (!(spec.exponent > 1.0)) throw DomainError("dim_power exponent must exceed 1 for summability");
      for (int j = 0; j < depth; ++j) {
        values.push_back(std::pow(static_cast<double>(algebras[static_cast<std::size_t>(j)].dimension()), -spec.exponent));
      }
      double rem = 0.0;
      if (power_remainder) {
        rem = power_remainder(spec.exponent);
      } else if (spec.tail_after) {
        rem = *spec.tail_after;
      } else {
        throw DomainError("dim_power schedule on a custom diagram needs a tail_after certificate");
      }
      return BetaSchedule(std::move(values), rem);
    }
    case BetaSpec::Kind::Geometric: {
      if (!(spec.ratio > 0.0 && spec.ratio < 1.0) || !(spec.scale > 0.0)) {
        throw DomainError("geometric schedule needs scale > 0 and 0 < ratio < 1");
      }
      for (int j = 0; j < depth; ++j) values.push_back(spec.scale * std::pow(spec.ratio, j));
      return BetaSchedule(std::move(values), spec.scale * std::pow(spec.ratio, depth) / (1.0 - spec.ratio));
    }
    case BetaSpec::Kind::Explicit: {
      if (static_cast<int>(spec.values.size()) < depth) throw DomainError("explicit beta needs one value per step");
      if (!spec.tail_after) throw DomainError("explicit beta needs a tail_after certificate");
      double rem = *spec.tail_after;
      for (std::size_t j = static_cast<std::size_t>(depth); j < spec.values.size(); ++j) rem += spec.values[j];
      values.assign(spec.values.begin(), spec.values.begin() + depth);
      return BetaSchedule(std::move(values), rem);
    }
  }
  throw DomainError("unknown beta kind");
}

}  // namespace

std::vector<long long> continued_fraction_denominators(const std::vector<int>& cf_terms, int count) {
  std::vector<long long> q;
  q.push_back(1);
  long long prev = 0;  // q₋₁
  for (int n = 1; n < count; ++n) {
    const long long a = n <= static_cast<int>(cf_terms.size()) ? cf_terms[static_cast<std::size_t>(n - 1)] : 1;
    const long long next = a * q.back() + prev;
    prev = q.back();
    q.push_back(next);
  }
  return q;
}

InductiveSequence family_uhf(int rate, int depth, const BetaSpec& beta, const SequenceLimits& limits) {
  if (rate < 2) throw DomainError("uhf rate must be at least 2");
  check_depth(depth, limits);
  std::vector<BlockAlgebra> algebras;
  std::vector<Embedding> embeddings;
  long long side = 1;
  for (int n = 0; n <= depth; ++n) {
    algebras.emplace_back(std::vector<int>{static_cast<int>(side)}, "M" + std::to_string(side), limits.max_dimension);
    side *= rate;
  }
  for (int n = 0; n < depth; ++n) {
    Eigen::MatrixXi m(1, 1);
    m(0, 0) = rate;
    embeddings.push_back(Embedding::realize(MultiplicityMatrix(algebras[n], algebras[n + 1], m)));
  }
  auto remainder = [rate, depth](double k) {
    const double r = std::pow(static_cast<double>(rate), -2.0 * k);
    return std::pow(r, depth) / (1.0 - r);
  };
  return InductiveSequence("uhf", algebras, std::move(embeddings), make_beta(beta, algebras, remainder));
}

InductiveSequence family_effros_shen(const std::vector<int>& cf_terms, int depth, const BetaSpec& beta,
                                     const SequenceLimits& limits) {
  if (cf_terms.empty()) throw DomainError("effros_shen: empty continued fraction");
  for (int a : cf_terms) {
    if (a < 1) throw DomainError("effros_shen: continued-fraction terms must be positive");
  }
  check_depth(depth, limits);
  if (depth > static_cast<int>(cf_terms.size())) {
    throw DomainError("effros_shen: depth exceeds the number of continued-fraction terms");
  }
  const auto q = continued_fraction_denominators(cf_terms, depth + 1);
  std::vector<BlockAlgebra> algebras;
  algebras.emplace_back(std::vector<int>{1}, "C", limits.max_dimension);
  for (int n = 1; n <= depth; ++n) {
    algebras.emplace_back(std::vector<int>{static_cast<int>(q[n]), static_cast<int>(q[n - 1])},
                          "M" + std::to_string(q[n]) + "+M" + std::to_string(q[n - 1]), limits.max_dimension);
  }
  std::vector<Embedding> embeddings;
  {
    Eigen::MatrixXi m(1, 2);
    m << cf_terms[0], 1;
    embeddings.push_back(Embedding::realize(MultiplicityMatrix(algebras[0], algebras[1], m)));
  }
  for (int n = 1; n < depth; ++n) {
    Eigen::MatrixXi m(2, 2);
    m << cf_terms[static_cast<std::size_t>(n)], 1, 1, 0;
    embeddings.push_back(Embedding::realize(MultiplicityMatrix(algebras[n], algebras[n + 1], m)));
  }
  // Continue the denominators with the known terms, then with aⱼ = 1 (a lower
  // bound on growth).  dim(A_{j+2}) ≥ 4·dim(Aⱼ) bounds everything past the
  // explicit window geometrically.
  auto remainder = [cf_terms, depth](double k) {
    constexpr int kExplicit = 64;
    const auto qq = continued_fraction_denominators(cf_terms, depth + kExplicit + 3);
    auto term = [&](int j) {
      const double a = static_cast<double>(qq[static_cast<std::size_t>(j)]);
      const double b = static_cast<double>(qq[static_cast<std::size_t>(j - 1)]);
      return std::pow(a * a + b * b, -k);
    };
    double s = 0.0;
    for (int j = depth; j < depth + kExplicit; ++j) s += term(std::max(j, 1));
    const int last = depth + kExplicit;
    s += (term(last) + term(last + 1)) / (1.0 - std::pow(4.0, -k));
    return s;
  };
  return InductiveSequence("effros_shen", algebras, std::move(embeddings), make_beta(beta, algebras, remainder));
}

InductiveSequence family_commutative(int depth, const BetaSpec& beta, const SequenceLimits& limits) {
  check_depth(depth, limits);
  std::vector<BlockAlgebra> algebras;
  for (int n = 0; n <= depth; ++n) {
    algebras.emplace_back(std::vector<int>(static_cast<std::size_t>(n + 1), 1), "C^" + std::to_string(n + 1),
                          limits.max_dimension);
  }
  std::vector<Embedding> embeddings;
  for (int n = 0; n < depth; ++n) {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n + 1, n + 2);
    for (int i = 0; i <= n; ++i) m(i, i) = 1;
    m(n, n + 1) = 1;
    embeddings.push_back(Embedding::realize(MultiplicityMatrix(algebras[n], algebras[n + 1], m)));
  }
  // Σ_{i≥N+1} i^{−k} ≤ (N+1)^{−k} + (N+1)^{1−k}/(k−1).
  auto remainder = [depth](double k) {
    const double first = depth + 1.0;
    return std::pow(first, -k) + std::pow(first, 1.0 - k) / (k - 1.0);
  };
  return InductiveSequence("commutative", algebras, std::move(embeddings), make_beta(beta, algebras, remainder));
}

InductiveSequence family_compacts(int depth, const BetaSpec& beta, const SequenceLimits& limits) {
  check_depth(depth, limits);
  std::vector<BlockAlgebra> algebras;
  algebras.emplace_back(std::vector<int>{1}, "C", limits.max_dimension);
  for (int n = 1; n <= depth; ++n) {
    algebras.emplace_back(std::vector<int>{n, 1}, "M" + std::to_string(n) + "+C", limits.max_dimension);
  }
  std::vector<Embedding> embeddings;
  {
    Eigen::MatrixXi m(1, 2);
    m << 1, 1;
    embeddings.push_back(Embedding::realize(MultiplicityMatrix(algebras[0], algebras[1], m)));
  }
  for (int n = 1; n < depth; ++n) {
    Eigen::MatrixXi m(2, 2);
    m << 1, 0, 1, 1;
    embeddings.push_back(Embedding::realize(MultiplicityMatrix(algebras[n], algebras[n + 1], m)));
  }
  // dim(Aⱼ) = j² + 1 ≥ j², so Σ_{j≥N} ≤ N^{−2k} + N^{1−2k}/(2k−1).
  auto remainder = [depth](double k) {
    const double first = depth;
    return std::pow(first, -2.0 * k) + std::pow(first, 1.0 - 2.0 * k) / (2.0 * k - 1.0);
  };
  return InductiveSequence("compacts", algebras, std::move(embeddings), make_beta(beta, algebras, remainder));
}

InductiveSequence family_custom(const std::vector<std::vector<int>>& block_sizes,
                                const std::vector<Eigen::MatrixXi>& multiplicities, const BetaSpec& beta,
                                const SequenceLimits& limits) {
  const int depth = static_cast<int>(block_sizes.size()) - 1;
  check_depth(depth, limits);
  if (static_cast<int>(multiplicities.size()) != depth) {
    throw DiagramError("custom diagram needs one multiplicity matrix per step");
  }
  std::vector<BlockAlgebra> algebras;
  for (int n = 0; n <= depth; ++n) {
    algebras.emplace_back(block_sizes[static_cast<std::size_t>(n)], "level" + std::to_string(n), limits.max_dimension);
  }
  std::vector<Embedding> embeddings;
  for (int n = 0; n < depth; ++n) {
    embeddings.push_back(Embedding::realize(
        MultiplicityMatrix(algebras[n], algebras[n + 1], multiplicities[static_cast<std::size_t>(n)])));
  }
  return InductiveSequence("custom", algebras, std::move(embeddings), make_beta(beta, algebras, nullptr));
}

}  // namespace qms

#include "qms/ideals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qms {

std::vector<int> intersect_down(const InductiveSequence& seq, int n, const std::vector<int>& upper) {
  if (n < 0 || n >= seq.depth()) throw DomainError("intersect_down: level out of range");
  const auto m = seq.embedding(n).multiplicities();
  const int targets = seq.algebra(n + 1).num_blocks();
  std::vector<char> in(static_cast<std::size_t>(targets), 0);
  for (int j : upper) {
    if (j < 0 || j >= targets) throw DomainError("intersect_down: block index out of range");
    in[static_cast<std::size_t>(j)] = 1;
  }
  std::vector<int> lower;
  for (int i = 0; i < seq.algebra(n).num_blocks(); ++i) {
    bool all = true;
    for (int j = 0; j < targets && all; ++j) all = m(i, j) == 0 || in[static_cast<std::size_t>(j)];
    if (all) lower.push_back(i);
  }
  return lower;
}

// ---------------------------------------------------------------------------
// IdealSpec

IdealSpec::IdealSpec(const InductiveSequence& seq, std::vector<std::vector<int>> levels) : levels_(std::move(levels)) {
  for (const auto& a : seq.algebras()) shape_.push_back(a.sizes());
  if (static_cast<int>(levels_.size()) != seq.depth() + 1) {
    throw DomainError("ideal descriptor needs " + std::to_string(seq.depth() + 1) + " levels");
  }
  for (int n = 0; n <= seq.depth(); ++n) {
    auto& s = levels_[static_cast<std::size_t>(n)];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int i : s) {
      if (i < 0 || i >= seq.algebra(n).num_blocks()) {
        throw DomainError("ideal descriptor: block " + std::to_string(i) + " missing at level " + std::to_string(n));
      }
    }
  }
  for (int n = 0; n < seq.depth(); ++n) {
    if (intersect_down(seq, n, levels_[static_cast<std::size_t>(n) + 1]) != levels_[static_cast<std::size_t>(n)]) {
      throw DomainError("ideal descriptor is not coherent at level " + std::to_string(n));
    }
  }
}

IdealSpec IdealSpec::from_top(const InductiveSequence& seq, std::vector<int> top) {
  std::sort(top.begin(), top.end());
  top.erase(std::unique(top.begin(), top.end()), top.end());
  std::vector<std::vector<int>> levels(static_cast<std::size_t>(seq.depth()) + 1);
  levels.back() = std::move(top);
  for (int n = seq.depth() - 1; n >= 0; --n) {
    levels[static_cast<std::size_t>(n)] = intersect_down(seq, n, levels[static_cast<std::size_t>(n) + 1]);
  }
  return IdealSpec(seq, std::move(levels));
}

bool IdealSpec::contains(int n, int block) const {
  const auto& s = level(n);
  return std::binary_search(s.begin(), s.end(), block);
}

FellDistance fell_metric(const IdealSpec& i, const IdealSpec& j) {
  if (i.shape() != j.shape()) throw DomainError("fell_metric: ideals of different diagrams");
  FellDistance d;
  for (int n = 0; n <= i.depth(); ++n) {
    if (i.level(n) != j.level(n)) {
      d.value = std::ldexp(1.0, -n);
      d.bound = d.value;
      d.resolved = true;
      d.level = n;
      return d;
    }
  }
  d.bound = std::ldexp(1.0, -i.depth());
  return d;
}

// ---------------------------------------------------------------------------
// Unitized stages

namespace {

BlockAlgebra unitized_algebra(const BlockAlgebra& ambient, const std::vector<int>& blocks) {
  std::vector<int> sizes;
  for (int i : blocks) sizes.push_back(ambient.block_size(i));
  sizes.push_back(1);
  return BlockAlgebra(std::move(sizes), "unitized");
}

std::vector<int> stage_blocks(const IdealSpec& ideal, int n) { return n == 0 ? std::vector<int>{} : ideal.level(n); }

}  // namespace

UnitizedStage::UnitizedStage(const InductiveSequence& seq, const IdealSpec& ideal, int n)
    : level_(n),
      ambient_(seq.algebra(n)),
      blocks_(stage_blocks(ideal, n)),
      algebra_(unitized_algebra(ambient_, blocks_)) {
  if (ideal.depth() != seq.depth()) throw DomainError("unitized stage: ideal and sequence depths differ");
}

Element UnitizedStage::restrict(const Element& b) const {
  if (b.algebra() != ambient_) throw StructuralError("unitized stage: element of another level");
  Element out(ambient_);
  for (int i : blocks_) out.block(i) = b.block(i);
  return out;
}

double UnitizedStage::pair_norm(const Element& b, std::complex<double> lambda) const {
  Element x = restrict(b);
  for (int i : blocks_) x.block(i).diagonal().array() += lambda;
  return std::max(op_norm(x), std::abs(lambda));
}

double UnitizedStage::multiplier_norm(const Element& b, std::complex<double> lambda) const {
  const Element x = restrict(b);
  double s = 0.0;
  for (int i : blocks_) {
    const int k = ambient_.block_size(i);
    const Matrix xi = x.block(i) + lambda * Matrix::Identity(k, k);
    // vec(x c) = (I ⊗ x) vec(c) for column-major vec.
    Matrix left = Matrix::Zero(k * k, k * k);
    for (int c = 0; c < k; ++c) left.block(c * k, c * k, k, k) = xi;
    Eigen::JacobiSVD<Matrix> svd(left);
    s = std::max(s, svd.singularValues()(0));
  }
  return std::max(s, std::abs(lambda));
}

Element UnitizedStage::to_block(const Element& b, std::complex<double> lambda) const {
  const Element x = restrict(b);
  Element out(algebra_);
  for (std::size_t q = 0; q < blocks_.size(); ++q) {
    const int i = blocks_[q];
    out.block(static_cast<int>(q)) = x.block(i);
    out.block(static_cast<int>(q)).diagonal().array() += lambda;
  }
  out.block(scalar_block())(0, 0) = lambda;
  return out;
}

std::pair<Element, std::complex<double>> UnitizedStage::from_block(const Element& x) const {
  if (x.algebra() != algebra_) throw StructuralError("unitized stage: element of another algebra");
  const std::complex<double> lambda = x.block(scalar_block())(0, 0);
  Element b(ambient_);
  for (std::size_t q = 0; q < blocks_.size(); ++q) {
    b.block(blocks_[q]) = x.block(static_cast<int>(q));
    b.block(blocks_[q]).diagonal().array() -= lambda;
  }
  return {b, lambda};
}

Embedding unitized_embedding(const InductiveSequence& seq, const IdealSpec& ideal, int n) {
  if (n < 0 || n >= seq.depth()) throw DomainError("unitized embedding: level out of range");
  const UnitizedStage lo(seq, ideal, n);
  const UnitizedStage hi(seq, ideal, n + 1);
  const auto& src = seq.algebra(n);
  std::vector<int> position(static_cast<std::size_t>(src.num_blocks()), -1);
  for (std::size_t q = 0; q < lo.blocks().size(); ++q) position[static_cast<std::size_t>(lo.blocks()[q])] = static_cast<int>(q);
  const int scalar = lo.scalar_block();

  // Copies of ideal blocks stay where ι puts them; copies of blocks outside
  // the ideal only carry λ and become runs of the 1×1 scalar block.
  std::vector<std::vector<Placement>> placements;
  for (int j : hi.blocks()) {
    std::vector<Placement> row;
    for (const auto& p : seq.embedding(n).placements()[static_cast<std::size_t>(j)]) {
      const int q = position[static_cast<std::size_t>(p.source_block)];
      if (q >= 0) {
        row.push_back({q, p.offset});
      } else {
        for (int t = 0; t < src.block_size(p.source_block); ++t) row.push_back({scalar, p.offset + t});
      }
    }
    placements.push_back(std::move(row));
  }
  placements.push_back({{scalar, 0}});
  return Embedding(lo.algebra(), hi.algebra(), std::move(placements));
}

IdealChain ideal_to_cqms(const InductiveSequence& seq, const IdealSpec& ideal, const BetaSchedule& beta) {
  if (ideal.shape().size() != seq.algebras().size()) throw DomainError("ideal does not match the sequence");
  std::vector<UnitizedStage> stages;
  std::vector<BlockAlgebra> algebras;
  std::vector<Embedding> embeddings;
  for (int n = 0; n <= seq.depth(); ++n) {
    stages.emplace_back(seq, ideal, n);
    algebras.push_back(stages.back().algebra());
  }
  for (int n = 0; n < seq.depth(); ++n) embeddings.push_back(unitized_embedding(seq, ideal, n));
  InductiveSequence useq("ideal", std::move(algebras), std::move(embeddings), beta);
  return IdealChain{std::move(stages), LipNormChain(useq)};
}

bool stages_identical(const IdealChain& a, const IdealChain& b, int n) {
  const auto& sa = a.chain.sequence();
  const auto& sb = b.chain.sequence();
  if (n > sa.depth() || n > sb.depth()) return false;
  for (int k = 0; k <= n; ++k) {
    if (sa.algebra(k) != sb.algebra(k)) return false;
    if (k < n) {
      if (!(sa.embedding(k) == sb.embedding(k))) return false;
      const auto& pa = a.chain.expectations().step(k).pullback();
      const auto& pb = b.chain.expectations().step(k).pullback();
      if (pa.rows() != pb.rows() || pa.cols() != pb.cols() || pa != pb) return false;
    }
    const auto& ta = a.chain.at(k).terms();
    const auto& tb = b.chain.at(k).terms();
    if (ta.size() != tb.size()) return false;
    for (std::size_t m = 0; m < ta.size(); ++m) {
      if (ta[m].beta != tb[m].beta) return false;
      if (Eigen::MatrixXcd(ta[m].project) != Eigen::MatrixXcd(tb[m].project)) return false;
      if (Eigen::MatrixXcd(ta[m].back) != Eigen::MatrixXcd(tb[m].back)) return false;
    }
  }
  return true;
}

LipschitzCertificate lipschitz_certificate(const InductiveSequence& seq, const IdealSpec& i, const IdealSpec& j,
                                           const BetaSchedule& beta) {
  const int depth = seq.depth();
  if (beta.size() != depth) throw DomainError("certificate refused: beta schedule has the wrong length");
  for (int k = 0; k < depth; ++k) {
    if (beta(k) > std::ldexp(1.0, -k - 5) * (1.0 + 1e-12)) {
      throw DomainError("certificate refused: beta(" + std::to_string(k) + ") exceeds 2^-" + std::to_string(k + 5));
    }
  }
  if (beta.remainder() > std::ldexp(1.0, -depth - 4) * (1.0 + 1e-12)) {
    throw DomainError("certificate refused: beta tail exceeds the geometric cap");
  }

  LipschitzCertificate cert;
  cert.fell = fell_metric(i, j);
  cert.agreement_level = cert.fell.resolved ? std::max(cert.fell.level - 1, 0) : depth;

  const IdealChain ci = ideal_to_cqms(seq, i, beta);
  const IdealChain cj = ideal_to_cqms(seq, j, beta);
  cert.stages_identical = stages_identical(ci, cj, cert.agreement_level);
  if (!cert.stages_identical) {
    throw NumericError("certificate: unitized stages below the disagreement level are not identical");
  }
  // Identical truncations are at propinquity zero; nothing is known beyond.
  std::vector<double> cross(static_cast<std::size_t>(depth) + 1, std::numeric_limits<double>::infinity());
  for (int k = 0; k <= cert.agreement_level; ++k) cross[static_cast<std::size_t>(k)] = 0.0;
  const auto cmp = compare_sequences_bound(ci.chain.sequence(), cj.chain.sequence(), cross);
  cert.bound = cmp.bound;
  cert.agreement_level = cmp.level;
  return cert;
}

}  // namespace qms

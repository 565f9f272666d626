#pragma once

// Finite-dimensional C*-algebras as direct sums of full matrix blocks.
//
// Elements are dense per block and templated on the complex scalar type so the
// same free functions work for double and long double builds.  Coordinates
// concatenate the column-major vectorization of each block, which is the
// layout every linear map in the library (embeddings, expectations) acts on.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qms/errors.hpp"

namespace qms {

inline constexpr int kDefaultMaxDimension = 4096;

/// Entrywise tolerance for self-adjointness, relative to max(1, max |x_ij|).
inline constexpr double kSelfAdjointTol = 1e-12;

/// ⊕ᵢ M_{kᵢ}, identified by its list of block sizes.
class BlockAlgebra {
 public:
  BlockAlgebra() : BlockAlgebra(std::vector<int>{1}) {}

  explicit BlockAlgebra(std::vector<int> block_sizes, std::string label = {},
                        int max_dimension = kDefaultMaxDimension)
      : sizes_(std::move(block_sizes)), label_(std::move(label)) {
    if (sizes_.empty()) throw StructuralError("BlockAlgebra: no blocks");
    offsets_.reserve(sizes_.size() + 1);
    offsets_.push_back(0);
    for (int k : sizes_) {
      if (k < 1) throw StructuralError("BlockAlgebra: block size must be >= 1");
      offsets_.push_back(offsets_.back() + static_cast<Eigen::Index>(k) * k);
    }
    if (offsets_.back() > max_dimension) {
      throw CapacityError("BlockAlgebra: dimension " + std::to_string(offsets_.back()) +
                          " exceeds cap " + std::to_string(max_dimension));
    }
  }

  const std::vector<int>& sizes() const { return sizes_; }
  int num_blocks() const { return static_cast<int>(sizes_.size()); }
  int block_size(int i) const { return sizes_.at(static_cast<std::size_t>(i)); }
  const std::string& label() const { return label_; }

  /// Σ kᵢ², the complex dimension (and the real dimension of the self-adjoint part).
  Eigen::Index dimension() const { return offsets_.back(); }
  /// Σ kᵢ, the side length of the block-diagonal realization.
  int matrix_size() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }
  /// Start of block i in the coordinate vector.
  Eigen::Index offset(int i) const { return offsets_.at(static_cast<std::size_t>(i)); }

  bool is_commutative() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [](int k) { return k == 1; });
  }

  friend bool operator==(const BlockAlgebra& a, const BlockAlgebra& b) { return a.sizes_ == b.sizes_; }
  friend bool operator!=(const BlockAlgebra& a, const BlockAlgebra& b) { return !(a == b); }

 private:
  std::vector<int> sizes_;
  std::string label_;
  std::vector<Eigen::Index> offsets_;
};

template <typename Scalar>
class BasicElement {
 public:
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicElement() = default;

  explicit BasicElement(const BlockAlgebra& algebra) : algebra_(algebra) {
    blocks_.reserve(static_cast<std::size_t>(algebra.num_blocks()));
    for (int k : algebra.sizes()) blocks_.push_back(Matrix::Zero(k, k));
  }

  BasicElement(const BlockAlgebra& algebra, std::vector<Matrix> blocks)
      : algebra_(algebra), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != algebra_.num_blocks()) {
      throw StructuralError("element: block count does not match algebra");
    }
    for (int i = 0; i < algebra_.num_blocks(); ++i) {
      const auto& b = blocks_[static_cast<std::size_t>(i)];
      if (b.rows() != algebra_.block_size(i) || b.cols() != algebra_.block_size(i)) {
        throw StructuralError("element: block " + std::to_string(i) + " has wrong shape");
      }
    }
  }

  static BasicElement zero(const BlockAlgebra& algebra) { return BasicElement(algebra); }

  static BasicElement scalar(const BlockAlgebra& algebra, Scalar lambda) {
    BasicElement x(algebra);
    for (auto& b : x.blocks_) b.diagonal().setConstant(lambda);
    return x;
  }

  static BasicElement identity(const BlockAlgebra& algebra) { return scalar(algebra, Scalar(1)); }

  /// Inverse of coordinates(): column-major blocks concatenated.
  static BasicElement from_coordinates(const BlockAlgebra& algebra, const Vector& v) {
    if (v.size() != algebra.dimension()) throw StructuralError("from_coordinates: length mismatch");
    BasicElement x(algebra);
    for (int i = 0; i < algebra.num_blocks(); ++i) {
      const int k = algebra.block_size(i);
      x.blocks_[static_cast<std::size_t>(i)] =
          Eigen::Map<const Matrix>(v.data() + algebra.offset(i), k, k);
    }
    return x;
  }

  Vector coordinates() const {
    Vector v(algebra_.dimension());
    for (int i = 0; i < algebra_.num_blocks(); ++i) {
      const int k = algebra_.block_size(i);
      Eigen::Map<Matrix>(v.data() + algebra_.offset(i), k, k) = blocks_[static_cast<std::size_t>(i)];
    }
    return v;
  }

  const BlockAlgebra& algebra() const { return algebra_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Matrix& block(int i) const { return blocks_.at(static_cast<std::size_t>(i)); }
  Matrix& block(int i) { return blocks_.at(static_cast<std::size_t>(i)); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  BasicElement adjoint() const {
    BasicElement y(*this);
    for (auto& b : y.blocks_) b.adjointInPlace();
    return y;
  }

  /// Largest entrywise deviation |x − x*|.
  RealScalar self_adjoint_defect() const {
    RealScalar d(0);
    for (const auto& b : blocks_) {
      if (b.size() > 0) d = std::max(d, (b - b.adjoint()).cwiseAbs().maxCoeff());
    }
    return d;
  }

  RealScalar max_abs_entry() const {
    RealScalar m(0);
    for (const auto& b : blocks_) {
      if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
    }
    return m;
  }

  bool is_self_adjoint(RealScalar tol = RealScalar(kSelfAdjointTol)) const {
    return self_adjoint_defect() <= tol * std::max(RealScalar(1), max_abs_entry());
  }

  /// Re(x) = (x + x*)/2; exactly Hermitian in floating point.
  BasicElement real_part() const {
    BasicElement y(*this);
    for (auto& b : y.blocks_) b = (b + b.adjoint().eval()) * RealScalar(0.5);
    return y;
  }

  /// Im(x) = (x − x*)/(2i).
  BasicElement imag_part() const {
    BasicElement y(*this);
    const Scalar half_over_i = Scalar(0, -0.5);
    for (auto& b : y.blocks_) b = (b - b.adjoint().eval()) * half_over_i;
    return y;
  }

  BasicElement& operator+=(const BasicElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
    return *this;
  }
  BasicElement& operator-=(const BasicElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
    return *this;
  }
  BasicElement& operator*=(Scalar s) {
    for (auto& b : blocks_) b *= s;
    return *this;
  }

  friend BasicElement operator+(BasicElement a, const BasicElement& b) { return a += b; }
  friend BasicElement operator-(BasicElement a, const BasicElement& b) { return a -= b; }
  friend BasicElement operator-(BasicElement a) { return a *= Scalar(-1); }
  friend BasicElement operator*(BasicElement a, Scalar s) { return a *= s; }
  friend BasicElement operator*(Scalar s, BasicElement a) { return a *= s; }
  friend BasicElement operator/(BasicElement a, Scalar s) { return a *= (Scalar(1) / s); }

  friend BasicElement operator*(const BasicElement& a, const BasicElement& b) {
    a.check_same(b);
    BasicElement c(a.algebra_);
    for (std::size_t i = 0; i < a.blocks_.size(); ++i) c.blocks_[i].noalias() = a.blocks_[i] * b.blocks_[i];
    return c;
  }

  /// Shift by λ·1.
  BasicElement shifted(Scalar lambda) const {
    BasicElement y(*this);
    for (auto& b : y.blocks_) b.diagonal().array() += lambda;
    return y;
  }

  void check_same(const BasicElement& o) const {
    if (algebra_ != o.algebra_) throw StructuralError("elements live in different algebras");
  }

 private:
  BlockAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

using Element = BasicElement<std::complex<double>>;
using Matrix = Element::Matrix;
using Vector = Element::Vector;

namespace detail {

template <typename Matrix>
bool exactly_hermitian(const Matrix& b) {
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index i = j; i < b.rows(); ++i) {
      if (b(i, j) != std::conj(b(j, i))) return false;
    }
  }
  return true;
}

}  // namespace detail

/// C*-norm: max over blocks of the spectral norm, via the Hermitian
/// eigendecomposition of x*x (or of x itself when the block is Hermitian).
template <typename Scalar>
typename BasicElement<Scalar>::RealScalar op_norm(const BasicElement<Scalar>& x) {
  using Real = typename BasicElement<Scalar>::RealScalar;
  using Matrix = typename BasicElement<Scalar>::Matrix;
  Real norm(0);
  for (const auto& b : x.blocks()) {
    if (b.size() == 0) continue;
    if (b.rows() == 1) {
      norm = std::max(norm, std::abs(b(0, 0)));
      continue;
    }
    if (detail::exactly_hermitian(b)) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
      norm = std::max(norm, es.eigenvalues().cwiseAbs().maxCoeff());
    } else {
      const Matrix g = b.adjoint() * b;
      Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
      norm = std::max(norm, std::sqrt(std::max(Real(0), es.eigenvalues().maxCoeff())));
    }
  }
  return norm;
}

template <typename Scalar>
void require_self_adjoint(const BasicElement<Scalar>& a, const char* what) {
  if (!a.is_self_adjoint()) throw DomainError(std::string(what) + ": element is not self-adjoint");
}

/// Smallest and largest eigenvalue across all blocks of a self-adjoint element.
template <typename Scalar>
std::pair<typename BasicElement<Scalar>::RealScalar, typename BasicElement<Scalar>::RealScalar>
spectral_range(const BasicElement<Scalar>& a) {
  using Real = typename BasicElement<Scalar>::RealScalar;
  using Matrix = typename BasicElement<Scalar>::Matrix;
  require_self_adjoint(a, "spectral_range");
  const auto h = a.real_part();
  Real lo = std::numeric_limits<Real>::infinity();
  Real hi = -lo;
  for (const auto& b : h.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return {lo, hi};
}

/// inf over real λ of ‖a − λ1‖, attained at the spectral midpoint.
template <typename Scalar>
typename BasicElement<Scalar>::RealScalar dist_to_scalars(const BasicElement<Scalar>& a) {
  const auto [lo, hi] = spectral_range(a);
  return (hi - lo) / 2;
}

template <typename Scalar>
typename BasicElement<Scalar>::RealScalar spectral_midpoint(const BasicElement<Scalar>& a) {
  const auto [lo, hi] = spectral_range(a);
  return (hi + lo) / 2;
}

/// Jordan product (ab+ba)/2 and Lie product (ab−ba)/(2i) of self-adjoint elements.
template <typename Scalar>
std::pair<BasicElement<Scalar>, BasicElement<Scalar>> jordan_lie(const BasicElement<Scalar>& a,
                                                               const BasicElement<Scalar>& b) {
  require_self_adjoint(a, "jordan_lie");
  require_self_adjoint(b, "jordan_lie");
  const auto ab = a * b;
  const auto ba = b * a;
  auto jordan = (ab + ba) * Scalar(0.5);
  auto lie = (ab - ba) * Scalar(0, -0.5);
  return {jordan.real_part(), lie.real_part()};
}

/// Σᵢ wᵢ Tr(xᵢ) for per-block weights.
template <typename Scalar>
Scalar weighted_trace(const BasicElement<Scalar>& x, const std::vector<double>& weights) {
  Scalar t(0);
  for (int i = 0; i < x.num_blocks(); ++i) t += Scalar(weights.at(static_cast<std::size_t>(i))) * x.block(i).trace();
  return t;
}

/// Gaussian self-adjoint element scaled to unit operator norm.
template <typename URBG>
Element random_self_adjoint(const BlockAlgebra& algebra, URBG& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Element x(algebra);
  for (int i = 0; i < algebra.num_blocks(); ++i) {
    auto& b = x.block(i);
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = {g(rng), g(rng)};
    }
  }
  x = x.real_part();
  const double n = op_norm(x);
  if (n > 0) x *= 1.0 / n;
  return x;
}

/// Gaussian element with independent complex entries (not self-adjoint).
template <typename URBG>
Element random_element(const BlockAlgebra& algebra, URBG& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Element x(algebra);
  for (int i = 0; i < algebra.num_blocks(); ++i) {
    auto& b = x.block(i);
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = {g(rng), g(rng)};
    }
  }
  return x;
}

}  // namespace qms

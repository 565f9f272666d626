#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "qms/algebra.hpp"
#include "qms/lipnorms.hpp"

namespace qms {

/// State given by block density matrices: φ(a) = Σᵢ Tr(ρᵢ aᵢ).
class QuantumState {
 public:
  static constexpr double kTol = 1e-10;

  /// Validates PSD blocks and unit total trace.
  explicit QuantumState(Element density);

  /// δᵢ on a commutative algebra (or the normalized trace of block i in general).
  static QuantumState point_mass(const BlockAlgebra& algebra, int block);

  const BlockAlgebra& algebra() const { return density_.algebra(); }
  const Element& density() const { return density_; }
  /// Re φ(a); exact pairing on self-adjoint a.
  double operator()(const Element& a) const;

 private:
  Element density_;
};

enum class StateKind { Pure, Mixed, Vertex };

/// pure: rank one on a single block; mixed: normalized Wishart; vertex: point
/// masses on a commutative algebra (all of them when count ≥ #blocks).
std::vector<QuantumState> sample_states(const BlockAlgebra& algebra, int count, StateKind kind, std::uint64_t seed);

struct MkOptions {
  double tol = 1e-4;
  int max_iterations = 10000;
  int check_every = 10;
};

struct MkResult {
  double lower = 0.0;
  double upper = 0.0;
  Element witness;  // L(witness) ≤ 1 and |φ(w) − ψ(w)| = lower
  int iterations = 0;
  bool converged = false;
};

/// Bracket for sup{|φ(a) − ψ(a)| : L(a) ≤ 1}.
///
/// Primal–dual hybrid gradient on max ⟨ρ_φ − ρ_ψ, a⟩ subject to ‖D_m a‖ ≤ β(m).
/// The lower end is the value of a rescaled feasible iterate, the upper end the
/// value of a feasible dual point (trace-norm weighted), so the bracket holds
/// whether or not the iteration converged.
MkResult mk_distance(const ResidualLipNorm& lip, const QuantumState& phi, const QuantumState& psi,
                     const MkOptions& options = {});

inline MkResult mk_distance(const LipNormChain& chain, int n, const QuantumState& phi, const QuantumState& psi,
                            const MkOptions& options = {}) {
  return mk_distance(chain.at(n), phi, psi, options);
}

/// Exact value on a commutative level: the Lip-ball is a polytope, solved by simplex.
double commutative_mk_oracle(const ResidualLipNorm& lip, const QuantumState& phi, const QuantumState& psi);

inline double commutative_mk_oracle(const LipNormChain& chain, int n, const QuantumState& phi,
                                    const QuantumState& psi) {
  return commutative_mk_oracle(chain.at(n), phi, psi);
}

struct LpResult {
  enum class Status { Optimal, Unbounded, Infeasible };
  Status status = Status::Optimal;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// max cᵀx subject to Ax ≤ b, x ≥ 0, with b ≥ 0 (origin feasible).  Dense
/// tableau, Bland's rule.
LpResult simplex_max(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace qms

#include "qms/lipnorms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qms {

// ---------------------------------------------------------------------------
// ResidualTerm / ResidualLipNorm

Eigen::VectorXcd ResidualTerm::apply(const Eigen::VectorXcd& a) const {
  Eigen::VectorXcd out = lift ? Eigen::VectorXcd(*lift * a) : a;
  out -= back * (project * a);
  return out;
}

Eigen::VectorXcd ResidualTerm::apply_adjoint(const Eigen::VectorXcd& y) const {
  Eigen::VectorXcd out = lift ? Eigen::VectorXcd(lift->adjoint() * y) : y;
  const Eigen::VectorXcd pulled = back.adjoint() * y;
  out -= project.adjoint() * pulled;
  return out;
}

SparseMatrixXcd prune_to_sparse(const Eigen::MatrixXcd& dense, double rel) {
  const double cut = dense.size() > 0 ? rel * dense.cwiseAbs().maxCoeff() : 0.0;
  SparseMatrixXcd s = dense.sparseView(1.0, cut);
  s.makeCompressed();
  return s;
}

ResidualLipNorm::ResidualLipNorm(BlockAlgebra domain, std::vector<ResidualTerm> terms)
    : domain_(std::move(domain)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!(t.beta > 0.0)) throw DomainError("residual Lip-norm: beta must be positive");
    if (t.project.cols() != domain_.dimension() || t.back.rows() != t.out.dimension() ||
        t.back.cols() != t.project.rows()) {
      throw StructuralError("residual Lip-norm: term shapes do not match");
    }
  }
}

double ResidualLipNorm::operator()(const Element& a) const {
  if (a.algebra() != domain_) throw DomainError("Lip-norm evaluated on an element of another level");
  if (terms_.empty()) return 0.0;
  // Every term kills scalars; removing one entry's worth of 1 first makes
  // L(λ1) exactly zero instead of a rounding residue of E(1) = 1.
  const Element h = a.real_part();
  const Eigen::VectorXcd v = h.shifted(-h.block(0)(0, 0).real()).coordinates();
  double value = 0.0;
  for (const auto& t : terms_) {
    const Element r = Element::from_coordinates(t.out, t.apply(v)).real_part();
    value = std::max(value, op_norm(r) / t.beta);
  }
  return value;
}

std::vector<double> ResidualLipNorm::residual_norms(const Element& a) const {
  if (a.algebra() != domain_) throw DomainError("Lip-norm evaluated on an element of another level");
  const Eigen::VectorXcd v = a.coordinates();
  std::vector<double> out;
  for (const auto& t : terms_) out.push_back(op_norm(Element::from_coordinates(t.out, t.apply(v))));
  return out;
}

Element ResidualLipNorm::residual(int m, const Element& a) const {
  const auto& t = terms_.at(static_cast<std::size_t>(m));
  return Element::from_coordinates(t.out, t.apply(a.coordinates()));
}

Element ResidualLipNorm::residual_adjoint(int m, const Element& y) const {
  const auto& t = terms_.at(static_cast<std::size_t>(m));
  if (y.algebra() != t.out) throw StructuralError("residual adjoint: wrong algebra");
  return Element::from_coordinates(domain_, t.apply_adjoint(y.coordinates()));
}

// ---------------------------------------------------------------------------
// LipNormChain

LipNormChain::LipNormChain(InductiveSequence seq, ExpectationChain expectations)
    : seq_(std::move(seq)), ex_(std::move(expectations)) {
  if (ex_.depth() != seq_.depth()) throw StructuralError("expectation chain depth does not match the sequence");
  for (int n = 0; n <= seq_.depth(); ++n) {
    std::vector<ResidualTerm> terms;
    for (int m = 0; m < n; ++m) {
      terms.push_back(ResidualTerm{seq_.beta(m), seq_.algebra(n), std::nullopt, prune_to_sparse(ex_.composed(n, m).matrix),
                                   seq_.embedding(m, n).coordinate_matrix()});
    }
    levels_.emplace_back(seq_.algebra(n), std::move(terms));
  }
}

LipNormChain::LipNormChain(const InductiveSequence& seq) : LipNormChain(seq, ExpectationChain::canonical(seq)) {}

const ResidualLipNorm& LipNormChain::at(int n) const {
  if (n < 0 || n > depth()) throw DomainError("Lip-norm level " + std::to_string(n) + " out of range");
  return levels_[static_cast<std::size_t>(n)];
}

LipEvaluator LipNormChain::evaluator(int n) const {
  const ResidualLipNorm* level = &at(n);
  return [level](const Element& a) { return (*level)(a); };
}

// ---------------------------------------------------------------------------
// TraceLipNorm

TraceLipNorm::TraceLipNorm(InductiveSequence seq, TraceState mu) : seq_(std::move(seq)), mu_(std::move(mu)) {
  const int top = seq_.depth();
  if (mu_.algebra() != seq_.algebra(top)) throw DomainError("trace Lip-norm: mu must be a trace on A_N");
  for (int m = 0; m < top; ++m) projections_.emplace_back(seq_.embedding(m, top), mu_);
  for (int n = 0; n <= top; ++n) {
    const SparseMatrixXcd lift = seq_.embedding(n, top).coordinate_matrix();
    std::vector<ResidualTerm> terms;
    for (int m = 0; m < n; ++m) {
      const auto& e = projections_[static_cast<std::size_t>(m)];
      terms.push_back(ResidualTerm{seq_.beta(m), seq_.algebra(top), lift, prune_to_sparse(e.pullback() * lift),
                                   seq_.embedding(m, top).coordinate_matrix()});
    }
    levels_.emplace_back(seq_.algebra(n), std::move(terms));
  }
}

const ResidualLipNorm& TraceLipNorm::at(int n) const {
  if (n < 0 || n > seq_.depth()) throw DomainError("Lip-norm level " + std::to_string(n) + " out of range");
  return levels_[static_cast<std::size_t>(n)];
}

// ---------------------------------------------------------------------------
// Free functions

double car_counterexample_lipnorm(int n, const Element& a) {
  if (n < 0 || n > 30) throw DomainError("CAR level out of range");
  const int side = 1 << n;
  if (a.algebra().sizes() != std::vector<int>{side}) {
    throw DomainError("CAR Lip-norm needs an element of M_" + std::to_string(side));
  }
  const Element h = a.real_part();
  const double tau = h.block(0).trace().real() / side;
  return std::pow(4.0, n) * op_norm(h.shifted(-tau));
}

double quasi_leibniz_residual(const LipEvaluator& lip, const Element& a, const Element& b, double c, double d) {
  const auto [jordan, lie] = jordan_lie(a, b);
  const double la = lip(a);
  const double lb = lip(b);
  const double lhs = std::max(lip(jordan), lip(lie));
  return lhs - (c * (op_norm(a) * lb + op_norm(b) * la) + d * la * lb);
}

}  // namespace qms

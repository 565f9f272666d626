#include "qms/propinquity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace qms {

// ---------------------------------------------------------------------------
// Bridges

namespace {

// Subgradient of x ↦ ‖x‖ at a self-adjoint x: ±uu* for a top eigenpair.
Element norm_subgradient(const Element& x) {
  Element g(x.algebra());
  double best = -1.0;
  int best_block = 0;
  Vector best_vec;
  double best_sign = 1.0;
  for (int i = 0; i < x.num_blocks(); ++i) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.block(i));
    const auto& lam = es.eigenvalues();
    Eigen::Index k = 0;
    const double mag = lam.cwiseAbs().maxCoeff(&k);
    if (mag > best) {
      best = mag;
      best_block = i;
      best_vec = es.eigenvectors().col(k);
      best_sign = lam(k) >= 0 ? 1.0 : -1.0;
    }
  }
  g.block(best_block) = best_sign * best_vec * best_vec.adjoint();
  return g;
}

}  // namespace

Element bridge_partner(const LipNormChain& chain, int n, const Element& b) {
  if (n < 0 || n >= chain.depth()) throw DomainError("bridge level out of range");
  return chain.expectations().step(n)(b.real_part()).real_part();
}

BridgeReport evident_bridge_length(const LipNormChain& chain, int n, const BridgeOptions& options) {
  if (n < 0 || n >= chain.depth()) throw DomainError("bridge level out of range");
  if (options.budget < 1 || options.restarts < 1) throw DomainError("bridge: budget and restarts must be positive");
  const auto& lip = chain.at(n + 1);
  const auto& alg = lip.domain();
  const int last = lip.size() - 1;  // the term b − ι E_{n+1,n}(b)
  const double beta = chain.beta(n);

  BridgeReport rep;
  rep.level = n;
  rep.certified_upper = beta;
  rep.witness_element = Element::zero(alg);
  rep.witness_partner = Element::zero(chain.sequence().algebra(n));

  std::mt19937_64 rng(options.seed);
  const int per_restart = std::max(1, options.budget / options.restarts);

  auto normalize = [&](Element b) {
    const double l = lip(b);
    if (l > 1.0) b *= std::complex<double>(1.0 / l);
    if (lip(b) > 1.0) b *= std::complex<double>(1.0 / lip(b));
    return b;
  };
  auto consider = [&](const Element& b) {
    const double v = op_norm(lip.residual(last, b).real_part());
    if (v > rep.empirical_lower) {
      rep.empirical_lower = v;
      rep.witness_element = b;
    }
  };

  for (int r = 0; r < options.restarts; ++r) {
    Element b = random_self_adjoint(alg, rng);
    const double l0 = lip(b);
    if (!(l0 > 0.0)) continue;
    b = normalize(b * std::complex<double>(1.0 / l0));
    consider(b);
    for (int it = 0; it < per_restart; ++it) {
      const Element res = lip.residual(last, b).real_part();
      if (op_norm(res) == 0.0) break;
      const Element g = lip.residual_adjoint(last, norm_subgradient(res)).real_part();
      const double gn = g.coordinates().norm();
      if (gn == 0.0) break;
      const double eta = 0.5 * beta / std::sqrt(it + 1.0);
      b = normalize(b + g * std::complex<double>(eta / gn));
      consider(b);
      ++rep.iterations;
    }
  }
  rep.witness_partner = bridge_partner(chain, n, rep.witness_element);
  return rep;
}

BridgeReport car_bridge_report(int n, int samples, std::uint64_t seed) {
  if (n < 0 || n > 12) throw DomainError("CAR level out of range");
  const BlockAlgebra alg({1 << n}, "M" + std::to_string(1 << n));
  BridgeReport rep;
  rep.level = n;
  rep.certified_upper = std::ldexp(1.0, -2 * n);
  rep.witness_element = Element::zero(alg);
  rep.witness_partner = Element::zero(BlockAlgebra({1}));
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples && n > 0; ++s) {
    Element b = random_self_adjoint(alg, rng);
    const double l = car_counterexample_lipnorm(n, b);
    if (!(l > 0.0)) continue;
    b *= std::complex<double>(1.0 / l);
    const double tau = b.block(0).trace().real() / alg.block_size(0);
    const double v = op_norm(b.shifted(-tau));
    if (v > rep.empirical_lower) {
      rep.empirical_lower = v;
      rep.witness_element = b;
      rep.witness_partner = Element::scalar(BlockAlgebra({1}), tau);
    }
    ++rep.iterations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Tunnels

BlockAlgebra direct_sum(const BlockAlgebra& a, const BlockAlgebra& b) {
  std::vector<int> sizes = a.sizes();
  sizes.insert(sizes.end(), b.sizes().begin(), b.sizes().end());
  return BlockAlgebra(std::move(sizes), a.label() + "+" + b.label());
}

Element join(const BlockAlgebra& sum, const Element& a, const Element& b) {
  std::vector<Matrix> blocks = a.blocks();
  blocks.insert(blocks.end(), b.blocks().begin(), b.blocks().end());
  return Element(sum, std::move(blocks));
}

std::pair<Element, Element> split(const Element& x, const BlockAlgebra& a, const BlockAlgebra& b) {
  if (x.num_blocks() != a.num_blocks() + b.num_blocks()) throw StructuralError("split: block count mismatch");
  std::vector<Matrix> xa(x.blocks().begin(), x.blocks().begin() + a.num_blocks());
  std::vector<Matrix> xb(x.blocks().begin() + a.num_blocks(), x.blocks().end());
  return {Element(a, std::move(xa)), Element(b, std::move(xb))};
}

double tunnel_lipnorm(const LipNormChain& chain, int n, double r, const Element& a, const Element& b) {
  if (!(r > 0.0)) throw DomainError("tunnel: r must be positive");
  if (n < 0 || n >= chain.depth()) throw DomainError("tunnel level out of range");
  const Element ha = a.real_part();
  const Element hb = b.real_part();
  const Element gap = chain.sequence().embedding(n).apply(ha) - hb;
  return std::max({chain(n, ha), chain(n + 1, hb), op_norm(gap) / r});
}

LipEvaluator tunnel_evaluator(const LipNormChain& chain, int n, double r) {
  if (!(r > 0.0)) throw DomainError("tunnel: r must be positive");
  const BlockAlgebra a = chain.sequence().algebra(n);
  const BlockAlgebra b = chain.sequence().algebra(n + 1);
  const LipNormChain* c = &chain;
  return [c, n, r, a, b](const Element& x) {
    const auto [xa, xb] = split(x, a, b);
    return tunnel_lipnorm(*c, n, r, xa, xb);
  };
}

// ---------------------------------------------------------------------------
// Certified bounds

double propinquity_upper(const InductiveSequence& seq, int n, int m) {
  if (n < 0 || m > seq.depth() || n > m) throw DomainError("propinquity bound: levels out of range");
  double s = 0.0;
  for (int j = n; j < m; ++j) s += seq.beta(j);
  return 4.0 * s;
}

double propinquity_upper_to_limit(const InductiveSequence& seq, int n) {
  if (n < 0 || n > seq.depth()) throw DomainError("propinquity bound: level out of range");
  return 4.0 * seq.beta_tail(n);
}

SequenceComparison compare_sequences_bound(const InductiveSequence& a, const InductiveSequence& b,
                                           const std::vector<double>& cross) {
  SequenceComparison best{std::numeric_limits<double>::infinity(), -1};
  const int top = std::min({a.depth(), b.depth(), static_cast<int>(cross.size()) - 1});
  for (int n = 0; n <= top; ++n) {
    const double c = cross[static_cast<std::size_t>(n)];
    if (!(c >= 0.0) || std::isinf(c)) continue;
    const double v = 4.0 * a.beta_tail(n) + c + 4.0 * b.beta_tail(n);
    if (v < best.bound) best = {v, n};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Coherence windows

void check_coherent(const LipNormChain& chain, const CoherenceWindow& w) {
  const auto& seq = chain.sequence();
  const int count = static_cast<int>(w.entries.size());
  if (w.start < 0 || w.start + count > seq.depth()) throw DomainError("window does not fit inside the sequence");
  for (int k = 0; k < count; ++k) {
    const auto& [x, y] = w.entries[static_cast<std::size_t>(k)];
    if (x.algebra() != seq.algebra(w.start + k) || y.algebra() != seq.algebra(w.start + k + 1)) {
      throw DomainError("window entry " + std::to_string(k) + " lives on the wrong levels");
    }
    if (k + 1 < count) {
      const auto& next = w.entries[static_cast<std::size_t>(k + 1)].first;
      const Element d = y - next;
      const double scale = std::max({1.0, y.max_abs_entry(), next.max_abs_entry()});
      if (d.max_abs_entry() > 1e-12 * scale) {
        throw DomainError("window is not coherent between entries " + std::to_string(k) + " and " +
                          std::to_string(k + 1));
      }
    }
  }
}

double s0_seminorm(const LipNormChain& chain, const CoherenceWindow& w) {
  check_coherent(chain, w);
  const auto& seq = chain.sequence();
  double s = 0.0;
  for (std::size_t k = 0; k < w.entries.size(); ++k) {
    const int level = w.start + static_cast<int>(k);
    const Element x = w.entries[k].first.real_part();
    const Element y = w.entries[k].second.real_part();
    const double jump = op_norm(seq.embedding(level).apply(x) - y) / (2.0 * seq.beta(level));
    s = std::max({s, chain(level, x), jump});
  }
  return s;
}

CoherenceWindow psi_window(const LipNormChain& chain, int n, const Element& a, int window) {
  const auto& seq = chain.sequence();
  if (n < 0 || n > seq.depth()) throw DomainError("psi window: level out of range");
  if (a.algebra() != seq.algebra(n)) throw DomainError("psi window: element is not in A_n");
  if (window <= n || window > seq.depth()) {
    throw DomainError("psi window: need n < W <= N (got n=" + std::to_string(n) + ", W=" + std::to_string(window) + ")");
  }
  CoherenceWindow w;
  for (int k = 0; k < window; ++k) {
    const auto& here = seq.algebra(k);
    const auto& next = seq.algebra(k + 1);
    if (k + 1 < n) {
      w.entries.emplace_back(Element::zero(here), Element::zero(next));
    } else if (k + 1 == n) {
      w.entries.emplace_back(Element::zero(here), a);
    } else {
      w.entries.emplace_back(seq.embedding(n, k).apply(a), seq.embedding(n, k + 1).apply(a));
    }
  }
  return w;
}

double s0_min_shift(const LipNormChain& chain, int n, const Element& a, int window) {
  const Element h = a.real_part();
  const double mid = spectral_midpoint(h);
  return s0_seminorm(chain, psi_window(chain, n, h.shifted(-mid), window));
}

}  // namespace qms

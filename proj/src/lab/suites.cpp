#include "qms/lab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "qms/errors.hpp"

namespace qms::lab {

namespace {

std::mt19937_64 make_rng(const SuiteContext& ctx, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(ctx.seed), static_cast<std::uint32_t>(ctx.seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t derive_seed(std::mt19937_64& rng) { return rng(); }

Element unit_element(const BlockAlgebra& alg, std::mt19937_64& rng) {
  Element x = random_element(alg, rng);
  const double n = op_norm(x);
  if (n > 0) x *= 1.0 / n;
  return x;
}

double min_eigenvalue(const Element& x) {
  const Element h = x.real_part();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : h.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

/// Tracks the worst value of one quantity and the wall time spent on it.
struct Worst {
  double value = -std::numeric_limits<double>::infinity();
  int samples = 0;
  void add(double v) {
    if (!std::isnan(value) && (std::isnan(v) || v > value)) value = v;
    ++samples;
  }
};

ReportRow finish(ReportRow r, const Stopwatch& clock, int samples) {
  r.seconds = clock.seconds();
  r.witness["samples"] = samples;
  return r;
}

void push_defect(Rows& rows, const SuiteContext& ctx, const std::string& quantity, std::optional<int> level,
                 const Worst& w, double tol, const Stopwatch& clock) {
  rows.push_back(finish(defect_row(ctx.experiment, quantity, level, w.samples ? w.value : 0.0, tol), clock, w.samples));
}

void push_bound(Rows& rows, const SuiteContext& ctx, const std::string& quantity, std::optional<int> level,
                double certified, const Worst& w, double tol, const Stopwatch& clock) {
  rows.push_back(
      finish(bound_row(ctx.experiment, quantity, level, certified, w.samples ? w.value : 0.0, tol), clock, w.samples));
}

}  // namespace

bool all_hold(const Rows& rows) {
  return std::none_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.violated(); });
}

Rows algebra_suite(const InductiveSequence& seq, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x616c67);
  for (int n = 0; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    const auto& alg = seq.algebra(n);
    Worst cstar, submult, jordan_lie_split;
    for (int k = 0; k < ctx.elements; ++k) {
      const Element x = unit_element(alg, rng);
      const Element y = unit_element(alg, rng);
      const double nx = op_norm(x);
      cstar.add(std::abs(op_norm(x.adjoint() * x) - nx * nx));
      submult.add(op_norm(x * y) - nx * op_norm(y));
      const Element a = random_self_adjoint(alg, rng);
      const Element b = random_self_adjoint(alg, rng);
      const auto [j, l] = jordan_lie(a, b);
      jordan_lie_split.add((a * b - (j + std::complex<double>(0, 1) * l)).max_abs_entry());
    }
    push_defect(rows, ctx, "cstar_identity", n, cstar, 1e-9, clock);
    push_defect(rows, ctx, "submultiplicativity", n, submult, 1e-9, clock);
    push_defect(rows, ctx, "jordan_lie_split", n, jordan_lie_split, 1e-12, clock);
  }
  return rows;
}

Rows embedding_suite(const InductiveSequence& seq, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x656d62);
  for (int n = 0; n < seq.depth(); ++n) {
    const Stopwatch clock;
    const auto& e = seq.embedding(n);
    const auto& alg = seq.algebra(n);
    Worst unit, mult, star, isometry;
    unit.add((e.apply(Element::identity(alg)) - Element::identity(seq.algebra(n + 1))).max_abs_entry());
    for (int k = 0; k < ctx.elements; ++k) {
      const Element x = unit_element(alg, rng);
      const Element y = unit_element(alg, rng);
      mult.add((e.apply(x * y) - e.apply(x) * e.apply(y)).max_abs_entry());
      star.add((e.apply(x.adjoint()) - e.apply(x).adjoint()).max_abs_entry());
      isometry.add(std::abs(op_norm(e.apply(x)) - op_norm(x)));
    }
    push_defect(rows, ctx, "embedding_unital", n, unit, 0.0, clock);
    push_defect(rows, ctx, "embedding_multiplicative", n, mult, 1e-12, clock);
    push_defect(rows, ctx, "embedding_star", n, star, 0.0, clock);
    push_defect(rows, ctx, "embedding_isometric", n, isometry, 1e-9, clock);
  }
  return rows;
}

Rows expectation_suite(const InductiveSequence& seq, const ExpectationChain& ex, const SuiteContext& ctx,
                       const std::string& tag) {
  Rows rows;
  auto rng = make_rng(ctx, 0x657870);
  const double tol = 1e-9;
  for (int n = 0; n < ex.depth(); ++n) {
    const Stopwatch clock;
    const auto& e = ex.step(n);
    const auto& sub = seq.algebra(n);
    const auto& amb = seq.algebra(n + 1);
    const auto& tau = ex.trace(n + 1);
    const auto& iota = e.embedding();

    // E∘ι = id on coordinates: the structural form of idempotence.
    Worst idempotent, fixes, bimodule, positive, contractive, trace;
    const Eigen::MatrixXcd ej = e.pullback() * iota.coordinate_matrix();
    idempotent.add((ej - Eigen::MatrixXcd::Identity(ej.rows(), ej.cols())).cwiseAbs().maxCoeff());
    for (int k = 0; k < ctx.elements; ++k) {
      const Element x = unit_element(amb, rng);
      const Element a = unit_element(sub, rng);
      const Element b = unit_element(sub, rng);
      const Element ex_x = e(x);
      idempotent.add((e(iota.apply(ex_x)) - ex_x).max_abs_entry());
      fixes.add((e(iota.apply(a)) - a).max_abs_entry());
      bimodule.add((e(iota.apply(a) * x * iota.apply(b)) - a * ex_x * b).max_abs_entry());
      const Element y = x.adjoint() * x;
      positive.add(-min_eigenvalue(e(y)));
      contractive.add(op_norm(ex_x) - op_norm(x));
      trace.add(std::abs(tau(iota.apply(ex_x)) - tau(x)));
    }
    push_defect(rows, ctx, tag + "_idempotence", n, idempotent, tol, clock);
    push_defect(rows, ctx, tag + "_fixes_subalgebra", n, fixes, tol, clock);
    push_defect(rows, ctx, tag + "_bimodule", n, bimodule, tol, clock);
    push_defect(rows, ctx, tag + "_positivity", n, positive, tol, clock);
    push_defect(rows, ctx, tag + "_contractivity", n, contractive, tol, clock);
    push_defect(rows, ctx, tag + "_trace_preservation", n, trace, tol, clock);
  }
  return rows;
}

Rows stage_equality_suite(const LipNormChain& chain, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x737465);
  const auto& seq = chain.sequence();
  for (int n = 0; n < seq.depth(); ++n) {
    const Stopwatch clock;
    Worst w;
    for (int k = 0; k < ctx.elements; ++k) {
      const Element a = random_self_adjoint(seq.algebra(n), rng);
      w.add(std::abs(chain(n + 1, seq.embedding(n).apply(a)) - chain(n, a)));
    }
    push_defect(rows, ctx, "lipnorm_stage_equality", n, w, 1e-9, clock);
  }
  return rows;
}

Rows quasi_leibniz_suite(const LipNormChain& chain, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x716c62);
  const auto& seq = chain.sequence();
  for (int n = 1; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    const auto lip = chain.evaluator(n);
    Worst w;
    for (int k = 0; k < ctx.pairs; ++k) {
      const Element a = random_self_adjoint(seq.algebra(n), rng);
      const Element b = random_self_adjoint(seq.algebra(n), rng);
      w.add(quasi_leibniz_residual(lip, a, b));
    }
    push_defect(rows, ctx, "quasi_leibniz_residual", n, w, 1e-9, clock);
  }
  return rows;
}

Rows seminorm_suite(const LipNormChain& chain, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x73656d);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto& seq = chain.sequence();
  for (int n = 0; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    const auto& alg = seq.algebra(n);
    Worst scalars, homogeneity, triangle;
    for (int k = 0; k < ctx.elements; ++k) {
      scalars.add(chain(n, Element::scalar(alg, g(rng))));
      const Element a = random_self_adjoint(alg, rng);
      const Element b = random_self_adjoint(alg, rng);
      const double la = chain(n, a);
      const double lb = chain(n, b);
      const double t = g(rng);
      const double scale = std::max(1.0, la + lb);
      homogeneity.add(std::abs(chain(n, a * t) - std::abs(t) * la) / std::max(1.0, std::abs(t) * la));
      triangle.add((chain(n, a + b) - la - lb) / scale);
    }
    push_defect(rows, ctx, "lipnorm_scalars", n, scalars, 0.0, clock);
    push_defect(rows, ctx, "lipnorm_homogeneity_rel", n, homogeneity, 1e-12, clock);
    push_defect(rows, ctx, "lipnorm_triangle_rel", n, triangle, 1e-12, clock);
  }
  return rows;
}

Rows trace_compare_suite(const InductiveSequence& seq, const TraceState& mu, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x747263);
  Stopwatch build;
  const TraceLipNorm tl(seq, mu);
  const LipNormChain chain(seq, ExpectationChain::from_top_trace(seq, mu));
  const double build_seconds = build.seconds();
  for (int n = 0; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    Worst w;
    for (int k = 0; k < ctx.elements; ++k) {
      const Element a = random_self_adjoint(seq.algebra(n), rng);
      w.add(std::abs(tl(n, a) - chain(n, a)));
    }
    push_defect(rows, ctx, "trace_vs_chain_lipnorm", n, w, 1e-9, clock);
    rows.back().seconds += n == 0 ? build_seconds : 0.0;
  }
  const int top = seq.depth();
  for (int m = 0; m < top; ++m) {
    const Stopwatch clock;
    Worst w;
    const Eigen::MatrixXcd composed = chain.expectations().composed(top, m).dense();
    w.add((composed - tl.projection(m).pullback()).cwiseAbs().maxCoeff());
    push_defect(rows, ctx, "composed_vs_one_shot", m, w, 1e-9, clock);
  }
  return rows;
}

Rows diameter_suite(const LipNormChain& chain, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x646961);
  const auto& seq = chain.sequence();
  for (int n = 1; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    const auto d = diameter_estimate(chain, n, ctx.states, derive_seed(rng), ctx.solver);
    Worst w;
    w.add(d.empirical_lower);
    push_bound(rows, ctx, "mk_diameter", n, d.certified_upper, w, 1e-6, clock);
  }
  return rows;
}

Rows mk_suite(const LipNormChain& chain, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x6d6b64);
  const auto& seq = chain.sequence();
  const double tol = ctx.solver.tol;
  for (int n = 1; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    const auto& alg = seq.algebra(n);
    const bool commutative = alg.is_commutative();
    const auto states = sample_states(alg, ctx.states, StateKind::Mixed, derive_seed(rng));
    const auto s = states.size();
    std::vector<std::vector<MkResult>> r(s, std::vector<MkResult>(s));
    Worst bracket, witness, oracle_gap, oracle_lower, oracle_upper, symmetry, triangle, diameter;
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        if (i == j) continue;
        if (!commutative && j < i) continue;
        r[i][j] = mk_distance(chain, n, states[i], states[j], ctx.solver);
        bracket.add(r[i][j].lower - r[i][j].upper);
        witness.add(chain(n, r[i][j].witness) - 1.0);
        diameter.add(r[i][j].lower);
        if (commutative) {
          const double exact = commutative_mk_oracle(chain, n, states[i], states[j]);
          oracle_gap.add(std::abs(r[i][j].lower - exact));
          oracle_lower.add(r[i][j].lower - exact);
          oracle_upper.add(exact - r[i][j].upper);
        }
      }
    }
    push_defect(rows, ctx, "mk_bracket_ordered", n, bracket, 1e-12, clock);
    push_defect(rows, ctx, "mk_witness_lip_excess", n, witness, 1e-9, clock);
    push_bound(rows, ctx, "mk_distance_vs_diameter", n, 2.0 * seq.beta(0), diameter, 1e-6, clock);
    if (!commutative) continue;
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        if (i == j) continue;
        symmetry.add(std::abs(r[i][j].lower - r[j][i].lower));
        for (std::size_t k = 0; k < s; ++k) {
          if (k == i || k == j) continue;
          triangle.add(r[i][k].lower - r[i][j].lower - r[j][k].lower);
        }
      }
    }
    push_defect(rows, ctx, "mk_oracle_gap", n, oracle_gap, 1.1 * tol, clock);
    push_defect(rows, ctx, "mk_lower_above_oracle", n, oracle_lower, 1e-9, clock);
    push_defect(rows, ctx, "mk_upper_below_oracle", n, oracle_upper, 1e-9, clock);
    push_defect(rows, ctx, "mk_symmetry", n, symmetry, 2.0 * tol, clock);
    push_defect(rows, ctx, "mk_triangle", n, triangle, 3.0 * tol, clock);
  }
  return rows;
}

Rows bridge_suite(const LipNormChain& chain, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x627264);
  const auto& seq = chain.sequence();
  for (int n = 0; n < seq.depth(); ++n) {
    const Stopwatch clock;
    BridgeOptions opts = ctx.bridge;
    opts.seed = derive_seed(rng);
    const auto rep = evident_bridge_length(chain, n, opts);
    Worst length, wit_elem, wit_partner;
    length.add(rep.empirical_lower);
    wit_elem.add(chain(n + 1, rep.witness_element));
    wit_partner.add(chain(n, rep.witness_partner));
    push_bound(rows, ctx, "bridge_length", n, seq.beta(n), length, 1e-6, clock);
    rows.back().witness["element"] = element_json(rep.witness_element);
    rows.back().witness["partner_digest"] = element_digest(rep.witness_partner);
    rows.back().witness["iterations"] = rep.iterations;
    push_bound(rows, ctx, "bridge_witness_lip", n, 1.0, wit_elem, 1e-9, clock);
    push_bound(rows, ctx, "bridge_partner_lip", n, 1.0, wit_partner, 1e-9, clock);

    const Stopwatch ball_clock;
    Worst partner_lip, partner_dist;
    for (int k = 0; k < ctx.lip_ball; ++k) {
      Element b = random_self_adjoint(seq.algebra(n + 1), rng);
      const double l = chain(n + 1, b);
      if (!(l > 0.0)) continue;
      b *= 1.0 / l;
      const Element p = bridge_partner(chain, n, b);
      partner_lip.add(chain(n, p));
      partner_dist.add(op_norm(b - seq.embedding(n).apply(p)));
    }
    push_bound(rows, ctx, "lip_ball_partner_lip", n, 1.0, partner_lip, 1e-9, ball_clock);
    push_bound(rows, ctx, "lip_ball_partner_distance", n, seq.beta(n), partner_dist, 1e-9, ball_clock);
  }
  return rows;
}

Rows car_suite(int depth, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x636172);
  for (int n = 1; n <= depth; ++n) {
    const Stopwatch clock;
    const double expect = std::ldexp(1.0, -2 * n);
    const auto rep = car_bridge_report(n, std::max(ctx.lip_ball, 1), derive_seed(rng));
    const double eps = std::numeric_limits<double>::epsilon();
    Worst cert, prop, emp;
    cert.add(std::abs(rep.certified_upper - expect));
    prop.add(std::abs(car_propinquity_bound(n) - 4.0 * expect));
    emp.add(rep.empirical_lower);
    push_defect(rows, ctx, "car_bridge_certified_defect", n, cert, eps * expect, clock);
    push_defect(rows, ctx, "car_propinquity_defect", n, prop, 4.0 * eps * expect, clock);
    rows.push_back(finish(value_row(ctx.experiment, "car_propinquity_bound", n, car_propinquity_bound(n)), clock, 1));
    push_bound(rows, ctx, "car_bridge", n, rep.certified_upper, emp, 1e-6, clock);
    rows.back().witness["element"] = element_json(rep.witness_element);
  }
  return rows;
}

Rows s0_suite(const LipNormChain& chain, int window, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x733030);
  const auto& seq = chain.sequence();
  for (int n = 1; n < window; ++n) {
    const Stopwatch clock;
    const double factor = std::max(1.0, 2.0 * seq.beta(0) / seq.beta(n - 1));
    Worst w;
    for (int k = 0; k < ctx.elements; ++k) {
      Element a = random_self_adjoint(seq.algebra(n), rng);
      const double l = chain(n, a);
      if (!(l > 0.0)) continue;
      a *= 1.0 / l;
      w.add(s0_min_shift(chain, n, a, window));
    }
    // Normalized to Lₙ(a) = 1, so the bound is the factor itself.
    push_bound(rows, ctx, "s0_min_shift_per_lip", n, factor, w, 1e-8, clock);
  }
  return rows;
}

Rows bound_suite(const InductiveSequence& seq, const SuiteContext& ctx) {
  Rows rows;
  const int top = seq.depth();
  const Stopwatch clock;
  Worst formula, mono_right, mono_left, below_limit;
  for (int n = 0; n <= top; ++n) {
    double direct = 0.0;
    for (int m = n; m <= top; ++m) {
      if (m > n) direct += seq.beta(m - 1);
      const double p = propinquity_upper(seq, n, m);
      formula.add(std::abs(p - 4.0 * direct) / std::max(1.0, 4.0 * direct));
      if (m < top) mono_right.add(p - propinquity_upper(seq, n, m + 1));
      if (n < m) mono_left.add(propinquity_upper(seq, n + 1, m) - p);
      below_limit.add(p - propinquity_upper_to_limit(seq, n));
    }
  }
  push_defect(rows, ctx, "propinquity_formula_rel", std::nullopt, formula, 1e-14, clock);
  push_defect(rows, ctx, "propinquity_monotone_in_target", std::nullopt, mono_right, 0.0, clock);
  push_defect(rows, ctx, "propinquity_monotone_in_source", std::nullopt, mono_left, 0.0, clock);
  push_defect(rows, ctx, "propinquity_below_limit_bound", std::nullopt, below_limit, 0.0, clock);
  for (int n = 0; n <= top; ++n) {
    const Stopwatch c;
    rows.push_back(finish(value_row(ctx.experiment, "propinquity_upper_to_limit", n, propinquity_upper_to_limit(seq, n)),
                          c, 1));
  }
  return rows;
}

namespace {

/// Largest ideal block side above which the explicit multiplier operator is skipped.
constexpr int kMultiplierSideCap = 16;

int largest_block(const UnitizedStage& st) {
  int k = 0;
  for (int i : st.blocks()) k = std::max(k, st.ambient().block_size(i));
  return k;
}

}  // namespace

Rows unitization_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x756e69);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n = 0; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    Worst multiplier, block, roundtrip, isometry;
    for (const auto& ideal : ideals) {
      const UnitizedStage st(seq, ideal, n);
      const bool explicit_operator = largest_block(st) <= kMultiplierSideCap;
      for (int k = 0; k < ctx.elements; ++k) {
        const Element b = unit_element(seq.algebra(n), rng);
        const std::complex<double> lambda(g(rng), g(rng));
        const double pair = st.pair_norm(b, lambda);
        if (explicit_operator) multiplier.add(std::abs(pair - st.multiplier_norm(b, lambda)));
        const Element x = st.to_block(b, lambda);
        block.add(std::abs(op_norm(x) - pair));
        const auto [b2, l2] = st.from_block(x);
        roundtrip.add(std::max((b2 - st.restrict(b)).max_abs_entry(), std::abs(l2 - lambda)));
        if (n < seq.depth()) {
          const Embedding ue = unitized_embedding(seq, ideal, n);
          const Element y = unit_element(st.algebra(), rng);
          isometry.add(std::abs(op_norm(ue.apply(y)) - op_norm(y)));
        }
      }
    }
    push_defect(rows, ctx, "unitization_pair_vs_multiplier", n, multiplier, 1e-9, clock);
    push_defect(rows, ctx, "unitization_pair_vs_block", n, block, 1e-9, clock);
    push_defect(rows, ctx, "unitization_roundtrip", n, roundtrip, 1e-12, clock);
    if (n < seq.depth()) push_defect(rows, ctx, "unitization_embedding_isometric", n, isometry, 1e-9, clock);
  }
  return rows;
}

Rows ideal_expectation_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals,
                             const SuiteContext& ctx) {
  Rows rows;
  for (std::size_t k = 0; k < ideals.size(); ++k) {
    const IdealChain ic = ideal_to_cqms(seq, ideals[k]);
    SuiteContext sub = ctx;
    sub.seed = ctx.seed + 0x9e3779b97f4a7c15ULL * (k + 1);
    auto part = expectation_suite(ic.chain.sequence(), ic.chain.expectations(), sub, "ideal_expectation");
    for (auto& r : part) r.witness["ideal"] = ideals[k].levels();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

Rows fell_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals, const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x66656c);
  const Stopwatch clock;
  std::vector<IdealSpec> pool = ideals;
  for (int k = 0; k < ctx.ideals; ++k) pool.push_back(random_ideal(seq, rng));
  Worst identity, symmetry, separation, ultrametric, bound;
  for (const auto& i : pool) {
    identity.add(fell_metric(i, i).value);
    for (const auto& j : pool) {
      const auto d = fell_metric(i, j);
      symmetry.add(std::abs(d.value - fell_metric(j, i).value));
      separation.add((d.value == 0.0) == (i == j) ? 0.0 : 1.0);
      bound.add(d.value - d.bound);
      for (const auto& k : pool) {
        ultrametric.add(fell_metric(i, k).value - std::max(d.value, fell_metric(j, k).value));
      }
    }
  }
  push_defect(rows, ctx, "fell_identity", std::nullopt, identity, 0.0, clock);
  push_defect(rows, ctx, "fell_symmetry", std::nullopt, symmetry, 0.0, clock);
  push_defect(rows, ctx, "fell_separation", std::nullopt, separation, 0.0, clock);
  push_defect(rows, ctx, "fell_value_within_bound", std::nullopt, bound, 0.0, clock);
  push_defect(rows, ctx, "fell_ultrametric", std::nullopt, ultrametric, 0.0, clock);
  return rows;
}

BetaSchedule certificate_schedule(int depth) {
  std::vector<double> values;
  for (int j = 0; j < depth; ++j) values.push_back(std::ldexp(1.0, -j - 5));
  return BetaSchedule(std::move(values), std::ldexp(1.0, -depth - 4));
}

Rows certificate_suite(const InductiveSequence& seq, const std::vector<IdealSpec>& ideals, const BetaSchedule& beta,
                       const SuiteContext& ctx) {
  Rows rows;
  auto rng = make_rng(ctx, 0x636572);
  std::vector<std::pair<IdealSpec, IdealSpec>> pairs;
  for (std::size_t a = 0; a < ideals.size(); ++a) {
    for (std::size_t b = a + 1; b < ideals.size(); ++b) pairs.emplace_back(ideals[a], ideals[b]);
  }
  for (int k = 0; k < ctx.ideals; ++k) {
    IdealSpec i = random_ideal(seq, rng);
    IdealSpec j = random_ideal(seq, rng);
    pairs.emplace_back(std::move(i), std::move(j));
  }
  const Stopwatch clock;
  Worst excess, identical;
  for (const auto& [i, j] : pairs) {
    try {
      const auto cert = lipschitz_certificate(seq, i, j, beta);
      excess.add(cert.bound - cert.fell.bound);
    } catch (const NumericError&) {
      identical.add(1.0);
    }
  }
  const int count = static_cast<int>(pairs.size());
  rows.push_back(finish(defect_row(ctx.experiment, "certificate_minus_fell", std::nullopt,
                                   excess.samples ? excess.value : 0.0, 1e-9),
                        clock, count));
  rows.push_back(finish(defect_row(ctx.experiment, "certificate_stage_mismatch", std::nullopt,
                                   identical.samples ? identical.value : 0.0, 0.0),
                        clock, count));
  return rows;
}

}  // namespace qms::lab

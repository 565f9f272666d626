// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "qms/lab/suites.hpp"

using namespace qms;
using namespace qms::lab;

namespace {

struct Family {
  std::string name;
  InductiveSequence seq;
  int mk_iterations;  // PDHG budget for MK diameter runs on this family
};

std::vector<Family> core_families() {
  return {{"uhf2", family_uhf(2, 5), 200},
          {"golden", family_effros_shen({1, 1, 1, 1, 1, 1}, 5), 400},
          {"commutative6", family_commutative(6), 20000}};
}

SuiteContext base_context(const std::string& experiment, std::uint64_t seed) {
  SuiteContext ctx;
  ctx.experiment = experiment;
  ctx.seed = seed;
  return ctx;
}

void append(Rows& rows, Rows more) { rows.insert(rows.end(), more.begin(), more.end()); }

bool report(int number, const std::string& title, const Rows& rows, double seconds) {
  int failed = 0;
  double worst_margin = -INFINITY;
  for (const auto& r : rows) {
    if (r.violated()) ++failed;
    if (r.certified && r.empirical) {
      worst_margin = std::max(worst_margin, *r.empirical - *r.certified - r.tolerance.value_or(0.0));
    }
  }
  const bool ok = failed == 0 && !rows.empty();
  std::printf("%s criterion %2d: %s [%zu rows, worst margin %.3g, %.1f s]\n", ok ? "PASS" : "FAIL", number,
              title.c_str(), rows.size(), worst_margin, seconds);
  for (const auto& r : rows) {
    if (!r.violated()) continue;
    std::printf("    violated %s %s level %s: empirical %s, certified %s, tolerance %s\n", r.experiment.c_str(),
                r.quantity.c_str(), r.level ? std::to_string(*r.level).c_str() : "-",
                format_real(*r.empirical).c_str(), format_real(*r.certified).c_str(),
                format_real(r.tolerance.value_or(0.0)).c_str());
  }
  std::fflush(stdout);
  return ok;
}

bool run(int number, const std::string& title, const std::function<Rows()>& body) {
  const Stopwatch clock;
  Rows rows;
  try {
    rows = body();
  } catch (const std::exception& e) {
    std::printf("FAIL criterion %2d: %s [exception: %s]\n", number, title.c_str(), e.what());
    return false;
  }
  return report(number, title, rows, clock.seconds());
}

std::vector<IdealSpec> random_ideals(const InductiveSequence& seq, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<IdealSpec> out;
  for (int k = 0; k < count; ++k) out.push_back(random_ideal(seq, rng));
  return out;
}

}  // namespace

int main() {
  bool ok = true;

  ok &= run(1, "Lip-norm stage equality |L_{n+1}(i(a)) - L_n(a)| <= 1e-9, 200 samples per level", [] {
    Rows rows;
    for (const auto& f : core_families()) {
      auto ctx = base_context(f.name, 101);
      ctx.elements = 200;
      append(rows, stage_equality_suite(LipNormChain(f.seq), ctx));
    }
    return rows;
  });

  ok &= run(2, "(2,0)-quasi-Leibniz residual <= 1e-9, 1000 pairs per family and level", [] {
    Rows rows;
    for (const auto& f : core_families()) {
      auto ctx = base_context(f.name, 202);
      ctx.pairs = 1000;
      append(rows, quasi_leibniz_suite(LipNormChain(f.seq), ctx));
    }
    return rows;
  });

  ok &= run(3, "MK diameter <= 2 beta(0) + 1e-6; C^2 attains 2 beta(0) within 1e-6", [] {
    Rows rows;
    auto families = core_families();
    families.push_back({"compacts6", family_compacts(6), 400});
    for (const auto& f : families) {
      auto ctx = base_context(f.name, 303);
      ctx.states = 3;
      ctx.solver.max_iterations = f.mk_iterations;
      append(rows, diameter_suite(LipNormChain(f.seq), ctx));
    }
    const auto c2 = family_commutative(1);
    const LipNormChain chain(c2);
    const double target = 2.0 * c2.beta(0);
    const auto d = diameter_estimate(chain, 1, 2, 303, MkOptions{1e-8, 20000, 10});
    const double oracle = commutative_mk_oracle(chain, 1, QuantumState::point_mass(c2.algebra(1), 0),
                                                QuantumState::point_mass(c2.algebra(1), 1));
    rows.push_back(bound_row("c2", "mk_diameter", 1, d.certified_upper, d.empirical_lower, 1e-6));
    rows.push_back(defect_row("c2", "diameter_attained_gap", 1, std::abs(d.empirical_lower - target), 1e-6));
    rows.push_back(defect_row("c2", "lp_oracle_gap", 1, std::abs(oracle - target), 1e-12));
    return rows;
  });

  ok &= run(4, "evident bridge length <= beta(n) + 1e-6 with witness checks on 500 Lip-ball points", [] {
    Rows rows;
    auto families = core_families();
    families.push_back({"compacts6", family_compacts(6), 400});
    for (const auto& f : families) {
      auto ctx = base_context(f.name, 404);
      ctx.lip_ball = 500;
      ctx.bridge.budget = 2000;
      ctx.bridge.restarts = 32;
      append(rows, bridge_suite(LipNormChain(f.seq), ctx));
    }
    return rows;
  });

  ok &= run(5, "CAR counterexample: bridge bound 4^-n, propinquity bound 4*4^-n, empirical <= 4^-n + 1e-6", [] {
    auto ctx = base_context("car", 505);
    ctx.lip_ball = 128;
    return car_suite(3, ctx);
  });

  ok &= run(6, "conditional-expectation axioms within 1e-9 on 300 inputs per expectation, every chain", [] {
    Rows rows;
    auto families = core_families();
    families.push_back({"compacts6", family_compacts(6), 400});
    for (const auto& f : families) {
      auto ctx = base_context(f.name, 606);
      ctx.elements = 300;
      append(rows, expectation_suite(f.seq, ExpectationChain::canonical(f.seq), ctx));
      const auto& top = f.seq.algebra(f.seq.depth());
      std::vector<double> w;
      for (int i = 0; i < top.num_blocks(); ++i) w.push_back(1.0 + i);
      auto compatible = ExpectationChain::from_top_trace(f.seq, TraceState::normalized(top, w));
      auto part = expectation_suite(f.seq, compatible, ctx, "compatible_expectation");
      append(rows, std::move(part));
    }
    const auto comm8 = family_commutative(8, BetaSpec::geometric(1.0 / 32.0, 0.5));
    const auto compacts = family_compacts(6, BetaSpec::geometric(1.0 / 32.0, 0.5));
    for (const auto* seq : {&comm8, &compacts}) {
      auto ctx = base_context(seq->family(), 607);
      ctx.elements = 300;
      append(rows, ideal_expectation_suite(*seq, random_ideals(*seq, 4, 608), ctx));
    }
    return rows;
  });

  ok &= run(7, "faithful-trace Lip-norm equals chain Lip-norm within 1e-9 on UHF(2); composed E = one-shot", [] {
    const auto seq = family_uhf(2, 5);
    auto ctx = base_context("uhf2", 707);
    ctx.elements = 200;
    return trace_compare_suite(seq, TraceState::canonical(seq.algebra(seq.depth())), ctx);
  });

  ok &= run(8, "min S0(psi_n(a - l1)) <= max{1, 2beta(0)/beta(n-1)} L_n(a) + 1e-8, 100 samples per level", [] {
    Rows rows;
    auto families = core_families();
    families.push_back({"compacts6", family_compacts(6), 400});
    for (const auto& f : families) {
      auto ctx = base_context(f.name, 808);
      ctx.elements = 100;
      append(rows, s0_suite(LipNormChain(f.seq), f.seq.depth(), ctx));
    }
    return rows;
  });

  ok &= run(9, "unitization: pair norm = multiplier norm within 1e-9 on 300 elements; isometric embeddings", [] {
    Rows rows;
    const auto comm8 = family_commutative(8);
    const auto compacts = family_compacts(6);
    for (const auto* seq : {&comm8, &compacts}) {
      auto ideals = random_ideals(*seq, 3, 909);
      // Always include the whole algebra so the largest stages are exercised.
      ideals.push_back(IdealSpec::from_top(*seq, [&] {
        std::vector<int> all;
        for (int j = 0; j < seq->algebra(seq->depth()).num_blocks(); ++j) all.push_back(j);
        return all;
      }()));
      auto ctx = base_context(seq->family(), 910);
      ctx.elements = 300 / static_cast<int>(ideals.size()) + 1;
      append(rows, unitization_suite(*seq, ideals, ctx));
    }
    return rows;
  });

  ok &= run(10, "Fell-Lipschitz certificate <= Fell distance + 1e-9 on 50 random pairs; exact ultrametric", [] {
    Rows rows;
    const auto comm8 = family_commutative(8);
    const auto compacts = family_compacts(6);
    for (const auto* seq : {&comm8, &compacts}) {
      auto ctx = base_context(seq->family(), 1010);
      ctx.ideals = 50;
      append(rows, certificate_suite(*seq, {}, certificate_schedule(seq->depth()), ctx));
      ctx.ideals = 24;
      append(rows, fell_suite(*seq, {}, ctx));
    }
    return rows;
  });

  ok &= run(11, "MK lower bound within 1.1e-4 of the LP oracle; symmetry and triangle within 2-3x tolerance", [] {
    const auto seq = family_commutative(6);
    auto ctx = base_context("commutative6", 1111);
    ctx.states = 5;  // 20 ordered pairs on each of 6 levels
    ctx.solver = MkOptions{1e-4, 20000, 10};
    return mk_suite(LipNormChain(seq), ctx);
  });

  std::printf("%s\n", ok ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return ok ? 0 : 1;
}

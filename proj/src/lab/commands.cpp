#include "qms/lab/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>

#include "qms/errors.hpp"

namespace qms::lab {

namespace {

SuiteContext context(const ExperimentConfig& c) {
  SuiteContext ctx;
  ctx.experiment = c.experiment;
  ctx.seed = c.seed;
  ctx.elements = c.samples.elements;
  ctx.pairs = c.samples.pairs;
  ctx.states = c.samples.states;
  ctx.lip_ball = c.samples.lip_ball;
  ctx.ideals = c.samples.ideals;
  ctx.solver = c.solver;
  ctx.bridge = c.bridge;
  return ctx;
}

TraceState top_trace(const ExperimentConfig& c, const InductiveSequence& seq) {
  const auto& top = seq.algebra(seq.depth());
  if (!c.trace_weights) return TraceState::canonical(top);
  if (static_cast<int>(c.trace_weights->size()) != top.num_blocks()) {
    throw ConfigError("config.trace_weights: expected " + std::to_string(top.num_blocks()) + " weights");
  }
  return TraceState::normalized(top, *c.trace_weights);
}

/// The chain Lip-norm; with trace weights (or the trace kind) the stage
/// expectations are restrictions of one trace on A_N.
LipNormChain make_chain(const ExperimentConfig& c, const InductiveSequence& seq) {
  if (c.lipnorm == "trace" || c.trace_weights) {
    return LipNormChain(seq, ExpectationChain::from_top_trace(seq, top_trace(c, seq)));
  }
  return LipNormChain(seq);
}

void append(Rows& rows, Rows more) { rows.insert(rows.end(), more.begin(), more.end()); }

std::vector<IdealSpec> ideal_pool(const ExperimentConfig& c, const InductiveSequence& seq) {
  auto ideals = c.build_ideals(seq);
  if (ideals.empty()) {
    std::mt19937_64 rng(c.seed);
    for (int k = 0; k < c.samples.ideals; ++k) ideals.push_back(random_ideal(seq, rng));
  }
  return ideals;
}

Rows describe(const ExperimentConfig& c, const InductiveSequence& seq) {
  Rows rows;
  for (int n = 0; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    const auto& alg = seq.algebra(n);
    auto r = value_row(c.experiment, "dimension", n, static_cast<double>(alg.dimension()));
    r.witness["blocks"] = alg.sizes();
    if (n < seq.depth()) {
      const auto m = seq.embedding(n).multiplicities().mult();
      std::vector<std::vector<int>> mult(static_cast<std::size_t>(m.rows()));
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) mult[static_cast<std::size_t>(i)].push_back(m(i, j));
      }
      r.witness["multiplicities"] = mult;
    }
    r.seconds = clock.seconds();
    rows.push_back(std::move(r));
    rows.push_back(value_row(c.experiment, "num_blocks", n, alg.num_blocks()));
    rows.push_back(value_row(c.experiment, "matrix_size", n, alg.matrix_size()));
    if (n < seq.depth()) rows.push_back(value_row(c.experiment, "beta", n, seq.beta(n)));
    rows.push_back(value_row(c.experiment, "beta_tail", n, seq.beta_tail(n)));
  }
  return rows;
}

Rows lipnorm(const ExperimentConfig& c, const InductiveSequence& seq, const SuiteContext& ctx) {
  Rows rows;
  std::function<double(int, const Element&)> lip;
  std::optional<LipNormChain> chain;
  std::optional<TraceLipNorm> trace;
  if (c.lipnorm == "car") {
    lip = [](int n, const Element& a) { return car_counterexample_lipnorm(n, a); };
  } else if (c.lipnorm == "trace") {
    trace.emplace(seq, top_trace(c, seq));
    lip = [&trace](int n, const Element& a) { return (*trace)(n, a); };
  } else {
    chain.emplace(make_chain(c, seq));
    lip = [&chain](int n, const Element& a) { return (*chain)(n, a); };
  }
  for (const auto& e : c.elements) {
    const Stopwatch clock;
    const Element a = c.build_element(seq, e);
    ReportRow r;
    r.experiment = c.experiment;
    r.quantity = "lipnorm_supplied";
    r.level = e.level;
    r.empirical = lip(e.level, a);
    r.seconds = clock.seconds();
    r.witness["element_digest"] = element_digest(a);
    rows.push_back(std::move(r));
  }
  std::mt19937_64 rng(c.seed);
  for (int n = 0; n <= seq.depth(); ++n) {
    const Stopwatch clock;
    double worst = 0.0;
    for (int k = 0; k < ctx.elements; ++k) worst = std::max(worst, lip(n, random_self_adjoint(seq.algebra(n), rng)));
    ReportRow r;
    r.experiment = c.experiment;
    r.quantity = "lipnorm_random_max";
    r.level = n;
    r.empirical = worst;
    r.seconds = clock.seconds();
    r.witness["samples"] = ctx.elements;
    rows.push_back(std::move(r));
  }
  if (chain) {
    append(rows, stage_equality_suite(*chain, ctx));
    append(rows, seminorm_suite(*chain, ctx));
    append(rows, quasi_leibniz_suite(*chain, ctx));
  }
  if (trace) append(rows, trace_compare_suite(seq, trace->trace(), ctx));
  return rows;
}

Rows propinquity_table(const ExperimentConfig& c, const InductiveSequence& seq) {
  Rows rows;
  for (int n = 0; n <= seq.depth(); ++n) {
    for (int m = n + 1; m <= seq.depth(); ++m) {
      const Stopwatch clock;
      auto r = value_row(c.experiment, "propinquity_upper_to_" + std::to_string(m), n, propinquity_upper(seq, n, m));
      r.seconds = clock.seconds();
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

Rows ideal_map(const ExperimentConfig& c, const InductiveSequence& seq, const SuiteContext& ctx) {
  Rows rows;
  const auto ideals = ideal_pool(c, seq);
  for (std::size_t k = 0; k < ideals.size(); ++k) {
    const Stopwatch clock;
    const IdealChain ic = ideal_to_cqms(seq, ideals[k]);
    for (int n = 0; n <= seq.depth(); ++n) {
      auto r = value_row(c.experiment, "unitized_dimension[" + std::to_string(k) + "]", n,
                         static_cast<double>(ic.chain.sequence().algebra(n).dimension()));
      r.witness["blocks"] = ic.chain.sequence().algebra(n).sizes();
      r.witness["ideal_blocks"] = ideals[k].level(n);
      r.seconds = clock.seconds();
      rows.push_back(std::move(r));
    }
  }
  for (std::size_t a = 0; a < ideals.size(); ++a) {
    for (std::size_t b = a + 1; b < ideals.size(); ++b) {
      const Stopwatch clock;
      const auto cert = lipschitz_certificate(seq, ideals[a], ideals[b], seq.beta());
      auto r = bound_row(c.experiment, "certificate[" + std::to_string(a) + "," + std::to_string(b) + "]",
                         cert.fell.resolved ? std::optional<int>(cert.fell.level) : std::nullopt, cert.fell.bound,
                         cert.bound, 1e-9);
      r.witness["agreement_level"] = cert.agreement_level;
      r.witness["fell_resolved"] = cert.fell.resolved;
      r.seconds = clock.seconds();
      rows.push_back(std::move(r));
    }
  }
  append(rows, unitization_suite(seq, ideals, ctx));
  append(rows, ideal_expectation_suite(seq, ideals, ctx));
  return rows;
}

Rows fell(const ExperimentConfig& c, const InductiveSequence& seq, const SuiteContext& ctx) {
  Rows rows;
  const auto ideals = c.build_ideals(seq);
  for (std::size_t a = 0; a < ideals.size(); ++a) {
    for (std::size_t b = a + 1; b < ideals.size(); ++b) {
      const Stopwatch clock;
      const auto d = fell_metric(ideals[a], ideals[b]);
      auto r = value_row(c.experiment, "fell[" + std::to_string(a) + "," + std::to_string(b) + "]",
                         d.resolved ? std::optional<int>(d.level) : std::nullopt, d.bound);
      r.witness["resolved"] = d.resolved;
      r.witness["value"] = d.value;
      r.seconds = clock.seconds();
      rows.push_back(std::move(r));
    }
  }
  append(rows, fell_suite(seq, ideals, ctx));
  return rows;
}

Rows verify(const ExperimentConfig& c, const InductiveSequence& seq, const SuiteContext& ctx) {
  Rows rows;
  const LipNormChain chain = make_chain(c, seq);
  append(rows, algebra_suite(seq, ctx));
  append(rows, embedding_suite(seq, ctx));
  append(rows, expectation_suite(seq, chain.expectations(), ctx));
  append(rows, stage_equality_suite(chain, ctx));
  append(rows, seminorm_suite(chain, ctx));
  append(rows, quasi_leibniz_suite(chain, ctx));
  append(rows, trace_compare_suite(seq, top_trace(c, seq), ctx));
  append(rows, diameter_suite(chain, ctx));
  append(rows, mk_suite(chain, ctx));
  append(rows, bridge_suite(chain, ctx));
  if (seq.depth() >= 2) append(rows, s0_suite(chain, c.window.value_or(seq.depth()), ctx));
  append(rows, bound_suite(seq, ctx));
  if (c.lipnorm == "car") append(rows, car_suite(seq.depth(), ctx));
  const auto ideals = ideal_pool(c, seq);
  append(rows, unitization_suite(seq, ideals, ctx));
  append(rows, ideal_expectation_suite(seq, ideals, ctx));
  append(rows, fell_suite(seq, c.build_ideals(seq), ctx));
  append(rows, certificate_suite(seq, c.build_ideals(seq), certificate_schedule(seq.depth()), ctx));
  return rows;
}

}  // namespace

Rows execute(const std::string& command, const ExperimentConfig& c) {
  const InductiveSequence seq = c.build_sequence();
  const SuiteContext ctx = context(c);
  if (command == "describe") return describe(c, seq);
  if (command == "lipnorm") return lipnorm(c, seq, ctx);
  if (command == "mk-dist") {
    if (c.lipnorm == "car") throw ConfigError("mk-dist: the car Lip-norm has no residual form; use chain or trace");
    const LipNormChain chain = make_chain(c, seq);
    Rows rows = mk_suite(chain, ctx);
    append(rows, diameter_suite(chain, ctx));
    return rows;
  }
  if (command == "bridge") {
    if (c.lipnorm == "car") return car_suite(seq.depth(), ctx);
    return bridge_suite(make_chain(c, seq), ctx);
  }
  if (command == "bound") {
    Rows rows = propinquity_table(c, seq);
    append(rows, bound_suite(seq, ctx));
    if (c.lipnorm == "car") {
      for (int n = 1; n <= seq.depth(); ++n) {
        rows.push_back(value_row(c.experiment, "car_propinquity_bound", n, car_propinquity_bound(n)));
      }
    }
    return rows;
  }
  if (command == "s0") {
    if (seq.depth() < 2) throw ConfigError("s0: needs depth at least 2");
    return s0_suite(make_chain(c, seq), c.window.value_or(seq.depth()), ctx);
  }
  if (command == "ideal-map") return ideal_map(c, seq, ctx);
  if (command == "fell") {
    if (c.ideals.size() < 2) throw ConfigError("fell: config.ideals needs at least two descriptors");
    return fell(c, seq, ctx);
  }
  if (command == "verify") return verify(c, seq, ctx);
  throw ConfigError("unknown command '" + command + "'");
}

nlohmann::json sidecar(const std::string& command, const ExperimentConfig& c, const Rows& rows) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["config"] = c.source;
  j["columns"] = kCsvHeader;
  j["rows"] = rows_to_json(rows);
  j["ok"] = all_hold(rows);
  return j;
}

ReportPaths write_report(const std::string& command, const ExperimentConfig& c, const Rows& rows) {
  namespace fs = std::filesystem;
  fs::create_directories(c.out_dir);
  const fs::path base = fs::path(c.out_dir) / (c.experiment + "-" + command);
  ReportPaths paths{base.string() + ".csv", base.string() + ".json"};
  std::ofstream csv(paths.csv, std::ios::binary);
  write_csv(csv, rows);
  std::ofstream js(paths.json, std::ios::binary);
  js << sidecar(command, c, rows).dump(2) << '\n';
  if (!csv || !js) throw Error("cannot write reports under '" + c.out_dir + "'");
  return paths;
}

int run(const std::string& command, const std::string& config_path, const Overrides& overrides, std::ostream& out,
        std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(config_path, overrides);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  }
  Rows rows;
  try {
    rows = execute(command, config);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const DiagramError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const CapacityError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const Error& e) {
    err << "numeric failure in " << command << ": " << e.what() << '\n';
    return kNumericFailure;
  }
  ReportPaths paths;
  try {
    paths = write_report(command, config, rows);
  } catch (const std::exception& e) {
    err << "report failure: " << e.what() << '\n';
    return kNumericFailure;
  }
  int violations = 0;
  for (const auto& r : rows) {
    if (!r.violated()) continue;
    ++violations;
    err << "violated: " << r.experiment << ' ' << r.quantity << (r.level ? " level " + std::to_string(*r.level) : "")
        << ": empirical " << format_real(*r.empirical) << " > certified " << format_real(*r.certified)
        << " + tolerance " << format_real(r.tolerance.value_or(0.0)) << '\n';
  }
  out << command << ": " << rows.size() << " rows, " << violations << " violated\n"
      << "  " << paths.csv << "\n  " << paths.json << '\n';
  return violations ? kViolation : kOk;
}

}  // namespace qms::lab

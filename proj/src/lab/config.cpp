#include "qms/lab/config.hpp"

#include <fstream>
#include <set>

#include "qms/errors.hpp"

namespace qms::lab {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, const std::string& where, T fallback) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

int get_int(const json& j, const std::string& key, const std::string& where, std::optional<int> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(where + ": missing field '" + key + "'");
  }
  if (!j.at(key).is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return j.at(key).get<int>();
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + ": must be positive and finite");
  return v;
}

int positive(int v, const std::string& what) {
  if (v <= 0) throw ConfigError(what + ": must be positive");
  return v;
}

BetaSpec parse_beta(const json& j) {
  const std::string where = "sequence.beta";
  require_object(j, where);
  reject_unknown(j, where, {"kind", "exponent", "scale", "ratio", "values", "tail_after"});
  const auto kind = get<std::string>(j, "kind", where);
  BetaSpec s;
  if (kind == "dim_power") {
    s = BetaSpec::dim_power(get_or<double>(j, "exponent", where, 2.0));
    if (!(s.exponent > 1.0)) throw ConfigError(where + ".exponent: must exceed 1");
  } else if (kind == "geometric") {
    s = BetaSpec::geometric(positive(get_or<double>(j, "scale", where, 1.0 / 32.0), where + ".scale"),
                            positive(get_or<double>(j, "ratio", where, 0.5), where + ".ratio"));
    if (!(s.ratio < 1.0)) throw ConfigError(where + ".ratio: must be below 1");
  } else if (kind == "explicit") {
    s = BetaSpec::explicit_values(get<std::vector<double>>(j, "values", where), get<double>(j, "tail_after", where));
    for (double v : s.values) positive(v, where + ".values");
    if (!(*s.tail_after >= 0.0)) throw ConfigError(where + ".tail_after: must be nonnegative");
    return s;
  } else {
    throw ConfigError(where + ".kind: unknown kind '" + kind + "'");
  }
  if (j.contains("tail_after")) s.tail_after = get<double>(j, "tail_after", where);
  return s;
}

SequenceConfig parse_sequence(const json& j, const std::optional<int>& depth_override) {
  const std::string where = "sequence";
  require_object(j, where);
  reject_unknown(j, where, {"family", "depth", "rate", "cf_terms", "block_sizes", "multiplicities", "beta"});
  SequenceConfig s;
  s.family = get<std::string>(j, "family", where);
  if (s.family == "custom") {
    s.block_sizes = get<std::vector<std::vector<int>>>(j, "block_sizes", where);
    const auto mults = get<std::vector<std::vector<std::vector<int>>>>(j, "multiplicities", where);
    for (const auto& m : mults) {
      const auto rows = static_cast<Eigen::Index>(m.size());
      const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(m.front().size());
      Eigen::MatrixXi mat(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(m[static_cast<std::size_t>(r)].size()) != cols) {
          throw ConfigError(where + ".multiplicities: ragged matrix");
        }
        for (Eigen::Index c = 0; c < cols; ++c) mat(r, c) = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
      s.multiplicities.push_back(std::move(mat));
    }
    s.depth = static_cast<int>(s.block_sizes.size()) - 1;
    if (depth_override && *depth_override != s.depth) {
      throw ConfigError("--depth: a custom diagram fixes its own depth");
    }
  } else if (s.family == "uhf" || s.family == "effros_shen" || s.family == "commutative" || s.family == "compacts") {
    s.depth = depth_override ? *depth_override : get_int(j, "depth", where);
    if (s.family == "uhf") s.rate = get_int(j, "rate", where, 2);
    if (s.family == "effros_shen") s.cf_terms = get<std::vector<int>>(j, "cf_terms", where);
  } else {
    throw ConfigError(where + ".family: unknown family '" + s.family + "'");
  }
  if (s.depth < 0) throw ConfigError(where + ".depth: must be nonnegative");
  s.beta = j.contains("beta") ? parse_beta(j.at("beta")) : BetaSpec::dim_power(2.0);
  return s;
}

}  // namespace

ExperimentConfig parse_config(const json& input, const Overrides& overrides) {
  require_object(input, "config");
  reject_unknown(input, "config",
                 {"version", "experiment", "seed", "sequence", "lipnorm", "trace_weights", "solver", "bridge", "samples",
                  "ideals", "elements", "window", "limits"});
  ExperimentConfig c;
  json doc = input;
  c.version = get_int(doc, "version", "config");
  if (c.version != kSchemaVersion) {
    throw ConfigError("config.version: unsupported schema version " + std::to_string(c.version));
  }
  c.experiment = get<std::string>(doc, "experiment", "config");
  if (c.experiment.empty()) throw ConfigError("config.experiment: must be nonempty");

  if (!doc.contains("seed")) throw ConfigError("config: missing field 'seed' (seeds are mandatory)");
  const auto& seed = doc.at("seed");
  if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
    throw ConfigError("config.seed: expected a nonnegative integer");
  }
  c.seed = doc.at("seed").get<std::uint64_t>();
  if (overrides.seed) c.seed = *overrides.seed;
  doc["seed"] = c.seed;

  if (doc.contains("limits")) {
    const auto& l = doc.at("limits");
    require_object(l, "limits");
    reject_unknown(l, "limits", {"max_depth", "max_dimension"});
    c.limits.max_depth = positive(get_int(l, "max_depth", "limits", c.limits.max_depth), "limits.max_depth");
    c.limits.max_dimension =
        positive(get_int(l, "max_dimension", "limits", c.limits.max_dimension), "limits.max_dimension");
  }

  c.sequence = parse_sequence(get<json>(doc, "sequence", "config"), overrides.depth);
  if (c.sequence.depth > c.limits.max_depth) {
    throw ConfigError("sequence.depth: " + std::to_string(c.sequence.depth) + " exceeds the cap " +
                      std::to_string(c.limits.max_depth));
  }
  if (overrides.depth && c.sequence.family != "custom") doc["sequence"]["depth"] = *overrides.depth;

  c.lipnorm = get_or<std::string>(doc, "lipnorm", "config", "chain");
  if (c.lipnorm != "chain" && c.lipnorm != "car" && c.lipnorm != "trace") {
    throw ConfigError("config.lipnorm: unknown kind '" + c.lipnorm + "'");
  }
  if (c.lipnorm == "car" && (c.sequence.family != "uhf" || c.sequence.rate != 2)) {
    throw ConfigError("config.lipnorm: 'car' needs the uhf family with rate 2");
  }
  if (doc.contains("trace_weights")) {
    c.trace_weights = get<std::vector<double>>(doc, "trace_weights", "config");
    for (double w : *c.trace_weights) positive(w, "config.trace_weights");
  }

  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    require_object(s, "solver");
    reject_unknown(s, "solver", {"tol", "max_iterations", "check_every"});
    c.solver.tol = get_or<double>(s, "tol", "solver", c.solver.tol);
    c.solver.max_iterations = get_int(s, "max_iterations", "solver", c.solver.max_iterations);
    c.solver.check_every = get_int(s, "check_every", "solver", c.solver.check_every);
  }
  if (overrides.tol) {
    c.solver.tol = *overrides.tol;
    doc["solver"]["tol"] = *overrides.tol;
  }
  positive(c.solver.tol, "solver.tol");
  positive(c.solver.max_iterations, "solver.max_iterations");
  positive(c.solver.check_every, "solver.check_every");

  if (doc.contains("bridge")) {
    const auto& b = doc.at("bridge");
    require_object(b, "bridge");
    reject_unknown(b, "bridge", {"budget", "restarts"});
    c.bridge.budget = positive(get_int(b, "budget", "bridge", c.bridge.budget), "bridge.budget");
    c.bridge.restarts = positive(get_int(b, "restarts", "bridge", c.bridge.restarts), "bridge.restarts");
  }
  c.bridge.seed = c.seed;

  if (doc.contains("samples")) {
    const auto& s = doc.at("samples");
    require_object(s, "samples");
    reject_unknown(s, "samples", {"elements", "pairs", "states", "lip_ball", "ideals"});
    c.samples.elements = positive(get_int(s, "elements", "samples", c.samples.elements), "samples.elements");
    c.samples.pairs = positive(get_int(s, "pairs", "samples", c.samples.pairs), "samples.pairs");
    c.samples.states = positive(get_int(s, "states", "samples", c.samples.states), "samples.states");
    c.samples.lip_ball = positive(get_int(s, "lip_ball", "samples", c.samples.lip_ball), "samples.lip_ball");
    c.samples.ideals = positive(get_int(s, "ideals", "samples", c.samples.ideals), "samples.ideals");
  }

  if (doc.contains("ideals")) {
    const auto& list = doc.at("ideals");
    if (!list.is_array()) throw ConfigError("config.ideals: expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "ideals[" + std::to_string(k) + "]";
      const auto& item = list.at(k);
      require_object(item, where);
      reject_unknown(item, where, {"top", "levels"});
      IdealConfig ic;
      if (item.contains("top")) ic.top = get<std::vector<int>>(item, "top", where);
      if (item.contains("levels")) ic.levels = get<std::vector<std::vector<int>>>(item, "levels", where);
      if (ic.top.has_value() == ic.levels.has_value()) throw ConfigError(where + ": give exactly one of 'top', 'levels'");
      c.ideals.push_back(std::move(ic));
    }
  }

  if (doc.contains("elements")) {
    const auto& list = doc.at("elements");
    if (!list.is_array()) throw ConfigError("config.elements: expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = "elements[" + std::to_string(k) + "]";
      const auto& item = list.at(k);
      require_object(item, where);
      reject_unknown(item, where, {"level", "blocks"});
      SuppliedElement e;
      e.level = get_int(item, "level", where);
      e.blocks = get<json>(item, "blocks", where);
      if (e.level < 0 || e.level > c.sequence.depth) throw ConfigError(where + ".level: out of range");
      c.elements.push_back(std::move(e));
    }
  }

  if (doc.contains("window")) {
    c.window = get_int(doc, "window", "config");
    if (*c.window < 1 || *c.window > c.sequence.depth) throw ConfigError("config.window: must lie in 1..depth");
  }

  if (overrides.out_dir) c.out_dir = *overrides.out_dir;
  c.source = std::move(doc);
  return c;
}

ExperimentConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc, overrides);
}

InductiveSequence ExperimentConfig::build_sequence() const {
  const auto& s = sequence;
  if (s.family == "uhf") return family_uhf(s.rate, s.depth, s.beta, limits);
  if (s.family == "effros_shen") return family_effros_shen(s.cf_terms, s.depth, s.beta, limits);
  if (s.family == "commutative") return family_commutative(s.depth, s.beta, limits);
  if (s.family == "compacts") return family_compacts(s.depth, s.beta, limits);
  return family_custom(s.block_sizes, s.multiplicities, s.beta, limits);
}

std::vector<IdealSpec> ExperimentConfig::build_ideals(const InductiveSequence& seq) const {
  std::vector<IdealSpec> out;
  for (const auto& ic : ideals) {
    out.push_back(ic.top ? IdealSpec::from_top(seq, *ic.top) : IdealSpec(seq, *ic.levels));
  }
  return out;
}

Element ExperimentConfig::build_element(const InductiveSequence& seq, const SuppliedElement& e) const {
  const auto& alg = seq.algebra(e.level);
  const std::string where = "elements(level " + std::to_string(e.level) + ")";
  if (!e.blocks.is_array() || static_cast<int>(e.blocks.size()) != alg.num_blocks()) {
    throw ConfigError(where + ": expected " + std::to_string(alg.num_blocks()) + " blocks");
  }
  Element x(alg);
  for (int i = 0; i < alg.num_blocks(); ++i) {
    const auto& rows = e.blocks.at(static_cast<std::size_t>(i));
    const int k = alg.block_size(i);
    if (!rows.is_array() || static_cast<int>(rows.size()) != k) throw ConfigError(where + ": block shape mismatch");
    for (int r = 0; r < k; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (!row.is_array() || static_cast<int>(row.size()) != k) throw ConfigError(where + ": block shape mismatch");
      for (int col = 0; col < k; ++col) {
        const auto& v = row.at(static_cast<std::size_t>(col));
        if (v.is_number()) {
          x.block(i)(r, col) = v.get<double>();
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
          x.block(i)(r, col) = {v[0].get<double>(), v[1].get<double>()};
        } else {
          throw ConfigError(where + ": entries are numbers or [re, im] pairs");
        }
      }
    }
  }
  return x;
}

}  // namespace qms::lab

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qms/bratteli.hpp"
#include "qms/expectations.hpp"
#include "qms/ideals.hpp"
#include "qms/lipnorms.hpp"
#include "qms/propinquity.hpp"
#include "qms/state_metrics.hpp"

namespace qms::lab {

inline constexpr int kSchemaVersion = 1;

struct SequenceConfig {
  std::string family;                       // uhf | effros_shen | commutative | compacts | custom
  int depth = 0;
  int rate = 2;                             // uhf
  std::vector<int> cf_terms;                // effros_shen
  std::vector<std::vector<int>> block_sizes;  // custom
  std::vector<Eigen::MatrixXi> multiplicities;  // custom
  BetaSpec beta;
};

struct SampleConfig {
  int elements = 50;     // random elements per level
  int pairs = 100;       // random pairs (quasi-Leibniz) per level
  int states = 6;        // states per level for MK experiments
  int lip_ball = 100;    // Lip-ball points per bridge step
  int ideals = 10;       // random ideal pairs
};

struct IdealConfig {
  std::optional<std::vector<int>> top;
  std::optional<std::vector<std::vector<int>>> levels;
};

struct SuppliedElement {
  int level = 0;
  nlohmann::json blocks;  // list of k×k matrices of [re, im] or real entries
};

/// Validated experiment description.
struct ExperimentConfig {
  int version = kSchemaVersion;
  std::string experiment;
  std::uint64_t seed = 0;
  SequenceConfig sequence;
  std::string lipnorm = "chain";              // chain | car | trace
  std::optional<std::vector<double>> trace_weights;  // raw weights on A_N for the trace Lip-norm
  MkOptions solver;
  BridgeOptions bridge;
  SampleConfig samples;
  std::vector<IdealConfig> ideals;
  std::vector<SuppliedElement> elements;
  std::optional<int> window;  // S₀ window, defaults to N
  SequenceLimits limits;
  std::string out_dir = ".";
  nlohmann::json source;  // the parsed document after overrides

  InductiveSequence build_sequence() const;
  std::vector<IdealSpec> build_ideals(const InductiveSequence& seq) const;
  Element build_element(const InductiveSequence& seq, const SuppliedElement& e) const;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> depth;
  std::optional<double> tol;
  std::optional<std::string> out_dir;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});
ExperimentConfig load_config(const std::string& path, const Overrides& overrides = {});

}  // namespace qms::lab

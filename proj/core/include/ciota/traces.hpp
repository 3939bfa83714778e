#pragma once

#include "ciota/emm.hpp"
#include "ciota/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ciota {

/// One observed jump address. seq is strictly increasing within a file.
struct TraceRecord {
  std::uint64_t seq = 0;
  std::uint64_t address = 0;

  bool operator==(const TraceRecord&) const = default;
};

/// Synthetic stand-in for a real application's control flow: a Markov chain
/// over regions, where region r emits addresses uniformly from
/// [r*B, (r+1)*B). Traces sampled from it are the ground truth that
/// detectors are trained and judged against.
struct GroundTruthModel {
  MarkovChain chain;
  std::uint64_t region_size_bytes = 256;
  State start_state = 0;
  std::uint64_t seed = 0;

  double min_transition_prob() const;
};

/// Deterministic loop over n_regions regions (every transition has
/// probability 1). The simplest possible program: straight-line firmware.
GroundTruthModel make_cycle_model(std::size_t n_regions,
                                  std::uint64_t region_size_bytes);

/// Every region has out_degree successors, each with equal probability
/// 1/out_degree. Successor sets are drawn with the given seed; every region
/// is reachable and no row is empty.
GroundTruthModel make_uniform_model(std::size_t n_regions,
                                    std::size_t out_degree, std::uint64_t seed,
                                    std::uint64_t region_size_bytes);

/// Train a frequency matrix by walking the ground truth for `steps`
/// transitions, without materializing addresses.
FrequencyMatrix sample_model(const GroundTruthModel& gt, std::size_t steps,
                             Rng& rng);

/// Random walk over the ground truth emitting one in-region address per
/// step. Throws std::runtime_error if the walk reaches a region with no
/// successors.
std::vector<TraceRecord> gen_benign_trace(const GroundTruthModel& gt,
                                          std::size_t length,
                                          std::uint64_t seed);

struct AttackSpec {
  enum class Kind { code_injection, code_reuse, replay_blip };

  Kind kind = Kind::code_injection;
  std::size_t start_index = 0; // insertion point in the input trace
  std::size_t length = 0;      // number of injected records

  /// code_injection: regions to emit from; must be absent from the ground
  /// truth. Derived (first regions above the ground truth) when empty.
  std::vector<State> target_regions;
  /// code_reuse: ordered region pairs that are valid states but never-seen
  /// transitions. Derived from the ground truth when empty.
  std::vector<std::pair<State, State>> reuse_pairs;
  /// replay_blip: the single rare transition to repeat. Derived (the least
  /// probable ground-truth transition) when absent.
  std::optional<std::pair<State, State>> replay_pair;

  std::uint64_t seed = 0; // address placement within regions
};

struct LabeledTrace {
  std::vector<TraceRecord> records;
  std::vector<std::uint8_t> mask; // 1 marks an injected record
};

/// Splice an attack into a benign trace. Injected records are inserted at
/// start_index, every record is re-sequenced, and the mask marks exactly
/// the injected positions.
LabeledTrace inject_attack(const std::vector<TraceRecord>& trace,
                           const AttackSpec& spec, const GroundTruthModel& gt);

/// Text formats: one record per line, "<seq>,<address>" with the address in
/// decimal or 0x-prefixed hex, under a "#ciota-trace v1" header line. An
/// empty file is an empty trace. Labels use the same shape with a
/// "#ciota-labels v1" header and a 0/1 value column.
std::vector<TraceRecord> read_trace(const std::string& path);
void write_trace(const std::string& path,
                 const std::vector<TraceRecord>& records);

std::vector<std::uint8_t> read_labels(const std::string& path);
void write_labels(const std::string& path,
                  const std::vector<std::uint8_t>& mask);

} // namespace ciota

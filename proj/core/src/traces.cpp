#include "ciota/traces.hpp"

#include "ciota/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace ciota {

double GroundTruthModel::min_transition_prob() const {
  double best = 1.0;
  for (const auto& [key, p] : chain.probs) best = std::min(best, p);
  return best;
}

GroundTruthModel make_cycle_model(std::size_t n_regions,
                                  std::uint64_t region_size_bytes) {
  if (n_regions < 2) throw std::invalid_argument("cycle needs >= 2 regions");
  GroundTruthModel gt;
  gt.region_size_bytes = region_size_bytes;
  for (State r = 0; r < n_regions; ++r) {
    gt.chain.probs[{r, (r + 1) % n_regions}] = 1.0;
    gt.chain.states.insert(r);
  }
  return gt;
}

GroundTruthModel make_uniform_model(std::size_t n_regions,
                                    std::size_t out_degree, std::uint64_t seed,
                                    std::uint64_t region_size_bytes) {
  if (n_regions < 2 || out_degree < 1 || out_degree >= n_regions) {
    throw std::invalid_argument("need 2 <= out_degree+1 <= n_regions");
  }
  GroundTruthModel gt;
  gt.region_size_bytes = region_size_bytes;
  gt.seed = seed;
  Rng rng(seed);
  const double p = 1.0 / static_cast<double>(out_degree);
  for (State r = 0; r < n_regions; ++r) {
    gt.chain.states.insert(r);
    // successor 1: the next region around the ring, which keeps every
    // region reachable; the rest are random distinct picks
    std::vector<State> successors{(r + 1) % n_regions};
    while (successors.size() < out_degree) {
      const State pick = rng.below(n_regions);
      if (pick != r &&
          std::find(successors.begin(), successors.end(), pick) ==
              successors.end()) {
        successors.push_back(pick);
      }
    }
    for (State s : successors) gt.chain.probs[{r, s}] = p;
  }
  return gt;
}

namespace {

/// Per-state successor table for cheap sampling.
struct WalkTable {
  std::map<State, std::vector<std::pair<State, double>>> rows;

  explicit WalkTable(const MarkovChain& chain) {
    for (const auto& [key, p] : chain.probs) {
      rows[key.first].emplace_back(key.second, p);
    }
  }

  State step(State from, Rng& rng) const {
    auto it = rows.find(from);
    if (it == rows.end() || it->second.empty()) {
      throw std::runtime_error("walk reached region " + std::to_string(from) +
                               " with no successors");
    }
    double u = rng.unit();
    for (const auto& [to, p] : it->second) {
      u -= p;
      if (u < 0.0) return to;
    }
    return it->second.back().first;
  }
};

std::uint64_t address_in_region(State region, std::uint64_t region_size,
                                Rng& rng) {
  return region * region_size + rng.below(region_size);
}

} // namespace

FrequencyMatrix sample_model(const GroundTruthModel& gt, std::size_t steps,
                             Rng& rng) {
  const WalkTable table(gt.chain);
  FrequencyMatrix model;
  State current = gt.start_state;
  for (std::size_t i = 0; i < steps; ++i) {
    const State next = table.step(current, rng);
    model.record(current, next);
    current = next;
  }
  return model;
}

std::vector<TraceRecord> gen_benign_trace(const GroundTruthModel& gt,
                                          std::size_t length,
                                          std::uint64_t seed) {
  if (length < 1) throw std::invalid_argument("trace length must be >= 1");
  Rng rng(seed);
  const WalkTable table(gt.chain);
  std::vector<TraceRecord> records;
  records.reserve(length);
  State current = gt.start_state;
  records.push_back({0, address_in_region(current, gt.region_size_bytes, rng)});
  for (std::uint64_t i = 1; i < length; ++i) {
    current = table.step(current, rng);
    records.push_back(
        {i, address_in_region(current, gt.region_size_bytes, rng)});
  }
  return records;
}

namespace {

std::vector<State> pick_unused_regions(const GroundTruthModel& gt,
                                       std::size_t wanted) {
  std::vector<State> out;
  const State top = gt.chain.states.empty() ? 0 : *gt.chain.states.rbegin();
  State candidate = top + 1;
  const State limit = std::numeric_limits<State>::max() / gt.region_size_bytes;
  while (out.size() < wanted) {
    if (candidate >= limit) {
      throw std::runtime_error("no unused region available for injection");
    }
    if (!gt.chain.states.contains(candidate)) out.push_back(candidate);
    ++candidate;
  }
  return out;
}

std::vector<std::pair<State, State>> pick_unseen_pairs(
    const GroundTruthModel& gt, std::size_t wanted) {
  std::vector<std::pair<State, State>> out;
  for (State a : gt.chain.states) {
    for (State b : gt.chain.states) {
      if (a == b) continue;
      if (gt.chain.probability(a, b) > 0.0) continue;
      out.emplace_back(a, b);
      if (out.size() == wanted) return out;
    }
  }
  if (out.empty()) {
    throw std::runtime_error(
        "ground truth has no unseen ordered region pair to reuse");
  }
  return out;
}

std::pair<State, State> pick_rare_pair(const GroundTruthModel& gt) {
  if (gt.chain.probs.empty()) {
    throw std::runtime_error("ground truth has no transitions");
  }
  auto best = gt.chain.probs.begin();
  for (auto it = gt.chain.probs.begin(); it != gt.chain.probs.end(); ++it) {
    if (it->second < best->second) best = it;
  }
  return best->first;
}

} // namespace

LabeledTrace inject_attack(const std::vector<TraceRecord>& trace,
                           const AttackSpec& spec, const GroundTruthModel& gt) {
  if (spec.start_index > trace.size()) {
    throw std::invalid_argument("attack start index beyond trace end");
  }
  Rng rng(spec.seed);
  const std::uint64_t B = gt.region_size_bytes;

  // The attack payload as a region sequence.
  std::vector<State> payload;
  payload.reserve(spec.length);
  switch (spec.kind) {
    case AttackSpec::Kind::code_injection: {
      std::vector<State> targets = spec.target_regions;
      if (targets.empty()) {
        targets = pick_unused_regions(gt, std::max<std::size_t>(
                                              1, std::min<std::size_t>(
                                                     spec.length, 4)));
      } else {
        for (State t : targets) {
          if (gt.chain.states.contains(t)) {
            throw std::invalid_argument(
                "injection target region is used by the ground truth");
          }
        }
      }
      for (std::size_t i = 0; i < spec.length; ++i) {
        payload.push_back(targets[i % targets.size()]);
      }
      break;
    }
    case AttackSpec::Kind::code_reuse: {
      auto pairs = spec.reuse_pairs.empty()
                       ? pick_unseen_pairs(gt, std::max<std::size_t>(
                                                   1, spec.length / 2))
                       : spec.reuse_pairs;
      std::size_t i = 0;
      while (payload.size() < spec.length) {
        const auto& [a, b] = pairs[i % pairs.size()];
        payload.push_back(a);
        if (payload.size() < spec.length) payload.push_back(b);
        ++i;
      }
      break;
    }
    case AttackSpec::Kind::replay_blip: {
      const auto [a, b] = spec.replay_pair.value_or(pick_rare_pair(gt));
      // a b a b ... so the rare transition a->b repeats within the blip
      for (std::size_t i = 0; i < spec.length; ++i) {
        payload.push_back(i % 2 == 0 ? a : b);
      }
      break;
    }
  }

  LabeledTrace out;
  out.records.reserve(trace.size() + payload.size());
  out.mask.reserve(trace.size() + payload.size());
  for (std::size_t i = 0; i < spec.start_index; ++i) {
    out.records.push_back(trace[i]);
    out.mask.push_back(0);
  }
  for (State region : payload) {
    out.records.push_back({0, address_in_region(region, B, rng)});
    out.mask.push_back(1);
  }
  for (std::size_t i = spec.start_index; i < trace.size(); ++i) {
    out.records.push_back(trace[i]);
    out.mask.push_back(0);
  }
  for (std::size_t i = 0; i < out.records.size(); ++i) out.records[i].seq = i;
  return out;
}

namespace {

constexpr const char* kTraceHeader = "#ciota-trace v1";
constexpr const char* kLabelsHeader = "#ciota-labels v1";

std::uint64_t parse_u64_field(const std::string& text, std::size_t line,
                              const char* what) {
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    begin += 2;
    base = 16;
  }
  auto [ptr, ec] = std::from_chars(begin, end, value, base);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string("bad ") + what + " '" + text + "'");
  }
  return value;
}

std::string chomp(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.pop_back();
  }
  return line;
}

} // namespace

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);

  std::vector<TraceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  bool saw_record = false;
  std::uint64_t prev_seq = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kTraceHeader) {
        throw ParseError(line_no, "missing '#ciota-trace v1' header");
      }
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(line_no, "expected '<seq>,<address>'");
    }
    TraceRecord record;
    record.seq = parse_u64_field(line.substr(0, comma), line_no, "seq");
    record.address = parse_u64_field(line.substr(comma + 1), line_no, "address");
    if (saw_record && record.seq <= prev_seq) {
      throw ParseError(line_no, "seq values must be strictly increasing");
    }
    prev_seq = record.seq;
    saw_record = true;
    records.push_back(record);
  }
  return records;
}

void write_trace(const std::string& path,
                 const std::vector<TraceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << kTraceHeader << '\n';
  for (const TraceRecord& r : records) {
    out << r.seq << ',' << r.address << '\n';
  }
}

std::vector<std::uint8_t> read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels file: " + path);

  std::vector<std::uint8_t> mask;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = chomp(line);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != kLabelsHeader) {
        throw ParseError(line_no, "missing '#ciota-labels v1' header");
      }
      saw_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(line_no, "expected '<seq>,<label>'");
    }
    const std::uint64_t seq = parse_u64_field(line.substr(0, comma), line_no, "seq");
    if (seq != mask.size()) {
      throw ParseError(line_no, "label seq values must be dense from 0");
    }
    const std::uint64_t label =
        parse_u64_field(line.substr(comma + 1), line_no, "label");
    if (label > 1) throw ParseError(line_no, "label must be 0 or 1");
    mask.push_back(static_cast<std::uint8_t>(label));
  }
  return mask;
}

void write_labels(const std::string& path,
                  const std::vector<std::uint8_t>& mask) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write labels file: " + path);
  out << kLabelsHeader << '\n';
  for (std::size_t i = 0; i < mask.size(); ++i) {
    out << i << ',' << static_cast<int>(mask[i]) << '\n';
  }
}

} // namespace ciota

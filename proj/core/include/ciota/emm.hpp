#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace ciota {

/// A state is a fixed-size region of the monitored application's logical
/// address space. Region index = floor(address / region_size_bytes).
using State = std::uint64_t;
using Count = std::uint64_t;

/// Maps a byte address to its region state. Throws std::invalid_argument
/// when region_size_bytes is zero.
State state_of_address(std::uint64_t address, std::uint64_t region_size_bytes);

/// Sparse transition-frequency matrix. This is the incrementally trained
/// form of the model: cell (i,j) counts observed transitions from region i
/// to region j, and each row keeps its outgoing total so that transition
/// probabilities can be derived in O(log n) at any time.
///
/// Invariants: zero counts are never stored; row_total(i) equals the sum of
/// row i's stored counts; the state set is the union of all row and column
/// indices with nonzero entries.
class FrequencyMatrix {
public:
  using CountsMap = std::map<std::pair<State, State>, Count>;

  FrequencyMatrix() = default;

  /// Record one observed transition i -> j.
  void record(State from, State to) { add(from, to, 1); }

  /// Add `delta` observations of transition i -> j at once.
  void add(State from, State to, Count delta);

  Count count(State from, State to) const;
  Count row_total(State from) const;

  /// Probability of i -> j under the derived Markov chain: count/row_total,
  /// 0 when the transition (or the whole row) has never been seen.
  double probability(State from, State to) const;

  const CountsMap& entries() const { return counts_; }
  const std::map<State, Count>& row_totals() const { return row_totals_; }
  const std::set<State>& states() const { return states_; }

  std::size_t entry_count() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  /// Sum of all counts in the matrix.
  Count total() const;

  bool operator==(const FrequencyMatrix&) const = default;

private:
  CountsMap counts_;
  std::map<State, Count> row_totals_;
  std::set<State> states_;
};

/// The probabilistic view of a FrequencyMatrix: row-stochastic transition
/// probabilities. Rows that were never observed have no entries, so an
/// unseen successor reads as probability zero.
struct MarkovChain {
  std::map<std::pair<State, State>, double> probs;
  std::set<State> states;

  double probability(State from, State to) const {
    auto it = probs.find({from, to});
    return it == probs.end() ? 0.0 : it->second;
  }
};

/// Normalize a frequency matrix row by row. Empty rows produce no entries.
MarkovChain to_markov(const FrequencyMatrix& freq);

/// Probability of observing the whole trajectory under the chain, i.e. the
/// product over consecutive pairs. A transition absent from the chain
/// contributes zero. Throws std::invalid_argument for fewer than 2 states.
double trajectory_prob(const MarkovChain& chain,
                       std::span<const State> trajectory);

/// Fixed-capacity FIFO of the most recent per-transition probabilities.
/// mean() is the anomaly score: the arithmetic mean of the stored values.
class ScoreWindow {
public:
  explicit ScoreWindow(std::size_t capacity);

  void push(double probability);
  void clear();

  /// Mean of the stored probabilities, or nullopt while the window is empty
  /// (the score is undefined, which is distinct from any probability).
  std::optional<double> mean() const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

private:
  std::size_t capacity_;
  std::vector<double> ring_;
  std::size_t head_ = 0; // slot the next push writes to
  std::size_t size_ = 0;
  double sum_ = 0.0;
};

/// Detector and collaboration parameters for one monitored application.
struct ModelParams {
  std::uint64_t region_size_bytes = 256;
  std::size_t window_k = 10000;
  double p_thr = 0.012;  // anomaly score threshold
  double p_a = 0.25;     // min fraction of models that must share a transition
  double alpha = 0.05;   // attestation distance bound
  double t_grace = 0.0;  // initial training period, in time units

  /// Throws ConfigError when a field is out of range. A region size that is
  /// not a power of two is accepted but reported via the return value.
  bool validate() const;
};

/// Plain elementwise sum of the frequency matrices. Used as a merge
/// baseline and as a building block; it applies no filtering at all.
/// Throws std::invalid_argument on an empty input list.
FrequencyMatrix simple_merge(std::span<const FrequencyMatrix> models);

/// Merge with abnormality filtration: a transition's summed count is kept
/// only when the fraction of models that observed it is strictly greater
/// than p_a; at or below the threshold the entry is dropped. Row totals are
/// recomputed from the surviving entries.
FrequencyMatrix combine(std::span<const FrequencyMatrix> models, double p_a);
FrequencyMatrix combine(const std::vector<const FrequencyMatrix*>& models,
                        double p_a);

/// Linear distance between two models' derived Markov chains: the sum of
/// absolute probability differences over every pair of states, divided by
/// dim^2 where dim is the size of the union of both state sets. Ranges over
/// [0, 1]; two empty models have distance 0.
double distance(const FrequencyMatrix& a, const FrequencyMatrix& b);

/// True when the other model lies strictly within distance alpha of the
/// local one. alpha = 0 accepts nothing, including an identical model.
bool attest(const FrequencyMatrix& local, const FrequencyMatrix& other,
            double alpha);

} // namespace ciota

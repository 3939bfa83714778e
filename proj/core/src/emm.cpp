#include "ciota/emm.hpp"

#include "ciota/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace ciota {

State state_of_address(std::uint64_t address,
                       std::uint64_t region_size_bytes) {
  if (region_size_bytes == 0) {
    throw std::invalid_argument("region size must be positive");
  }
  return address / region_size_bytes;
}

void FrequencyMatrix::add(State from, State to, Count delta) {
  if (delta == 0) return;
  counts_[{from, to}] += delta;
  row_totals_[from] += delta;
  states_.insert(from);
  states_.insert(to);
}

Count FrequencyMatrix::count(State from, State to) const {
  auto it = counts_.find({from, to});
  return it == counts_.end() ? 0 : it->second;
}

Count FrequencyMatrix::row_total(State from) const {
  auto it = row_totals_.find(from);
  return it == row_totals_.end() ? 0 : it->second;
}

double FrequencyMatrix::probability(State from, State to) const {
  auto it = counts_.find({from, to});
  if (it == counts_.end()) return 0.0;
  return static_cast<double>(it->second) /
         static_cast<double>(row_totals_.at(from));
}

Count FrequencyMatrix::total() const {
  Count sum = 0;
  for (const auto& [row, total] : row_totals_) sum += total;
  return sum;
}

MarkovChain to_markov(const FrequencyMatrix& freq) {
  MarkovChain chain;
  chain.states = freq.states();
  for (const auto& [key, count] : freq.entries()) {
    chain.probs[key] = static_cast<double>(count) /
                       static_cast<double>(freq.row_total(key.first));
  }
  return chain;
}

double trajectory_prob(const MarkovChain& chain,
                       std::span<const State> trajectory) {
  if (trajectory.size() < 2) {
    throw std::invalid_argument("trajectory needs at least 2 states");
  }
  double p = 1.0;
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i) {
    p *= chain.probability(trajectory[i], trajectory[i + 1]);
    if (p == 0.0) return 0.0;
  }
  return p;
}

ScoreWindow::ScoreWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) {
    throw std::invalid_argument("window capacity must be positive");
  }
}

void ScoreWindow::push(double probability) {
  if (ring_.empty()) ring_.assign(capacity_, 0.0);
  if (size_ == capacity_) {
    sum_ -= ring_[head_];
  } else {
    ++size_;
  }
  ring_[head_] = probability;
  sum_ += probability;
  head_ = (head_ + 1) % capacity_;
}

void ScoreWindow::clear() {
  head_ = 0;
  size_ = 0;
  sum_ = 0.0;
}

std::optional<double> ScoreWindow::mean() const {
  if (size_ == 0) return std::nullopt;
  return sum_ / static_cast<double>(size_);
}

bool ModelParams::validate() const {
  if (region_size_bytes == 0) throw ConfigError("region_size_bytes must be positive");
  if (window_k == 0) throw ConfigError("window_k must be positive");
  if (!(p_thr > 0.0 && p_thr < 1.0)) throw ConfigError("p_thr must be in (0,1)");
  if (!(p_a > 0.0 && p_a < 1.0)) throw ConfigError("p_a must be in (0,1)");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
  if (t_grace < 0.0) throw ConfigError("t_grace must be nonnegative");
  // power-of-two region sizes allow shift-based mapping; others still work
  return (region_size_bytes & (region_size_bytes - 1)) == 0;
}

FrequencyMatrix simple_merge(std::span<const FrequencyMatrix> models) {
  if (models.empty()) {
    throw std::invalid_argument("simple_merge needs at least one model");
  }
  FrequencyMatrix out;
  for (const FrequencyMatrix& model : models) {
    for (const auto& [key, count] : model.entries()) {
      out.add(key.first, key.second, count);
    }
  }
  return out;
}

namespace {

FrequencyMatrix combine_impl(std::size_t n_models, auto&& for_each_model,
                             double p_a) {
  if (n_models == 0) {
    throw std::invalid_argument("combine needs at least one model");
  }
  struct Cell {
    Count sum = 0;
    std::size_t observers = 0;
  };
  std::map<std::pair<State, State>, Cell> cells;
  for_each_model([&](const FrequencyMatrix& model) {
    for (const auto& [key, count] : model.entries()) {
      Cell& cell = cells[key];
      cell.sum += count;
      cell.observers += 1;
    }
  });

  FrequencyMatrix out;
  const double denom = static_cast<double>(n_models);
  for (const auto& [key, cell] : cells) {
    // dropped when the observing fraction does not exceed p_a
    if (static_cast<double>(cell.observers) / denom <= p_a) continue;
    out.add(key.first, key.second, cell.sum);
  }
  return out;
}

} // namespace

FrequencyMatrix combine(std::span<const FrequencyMatrix> models, double p_a) {
  return combine_impl(
      models.size(),
      [&](auto&& fn) {
        for (const FrequencyMatrix& m : models) fn(m);
      },
      p_a);
}

FrequencyMatrix combine(const std::vector<const FrequencyMatrix*>& models,
                        double p_a) {
  return combine_impl(
      models.size(),
      [&](auto&& fn) {
        for (const FrequencyMatrix* m : models) fn(*m);
      },
      p_a);
}

double distance(const FrequencyMatrix& a, const FrequencyMatrix& b) {
  std::set<State> union_states = a.states();
  union_states.insert(b.states().begin(), b.states().end());
  const std::size_t dim = union_states.size();
  if (dim == 0) return 0.0;

  const MarkovChain ma = to_markov(a);
  const MarkovChain mb = to_markov(b);

  // Walk both sparse maps; cells that are zero in both contribute nothing.
  double sum = 0.0;
  auto ia = ma.probs.begin();
  auto ib = mb.probs.begin();
  while (ia != ma.probs.end() || ib != mb.probs.end()) {
    if (ib == mb.probs.end() || (ia != ma.probs.end() && ia->first < ib->first)) {
      sum += std::abs(ia->second);
      ++ia;
    } else if (ia == ma.probs.end() || ib->first < ia->first) {
      sum += std::abs(ib->second);
      ++ib;
    } else {
      sum += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return sum / (static_cast<double>(dim) * static_cast<double>(dim));
}

bool attest(const FrequencyMatrix& local, const FrequencyMatrix& other,
            double alpha) {
  return distance(local, other) < alpha;
}

} // namespace ciota

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace l0hawkes {

struct TriggerEntry {
  std::size_t cause;  // i, with i == n meaning spontaneous
  double prob;        // q_{n,i}
};

/// Instance triggering probabilities q_{n,i}, 1 <= n <= N, 0 <= i <= n.
/// Rows are stored compressed; missing entries are exact zeros and every row
/// sums to one.
class TriggeringMatrix {
 public:
  TriggeringMatrix() = default;

  /// Rows must be appended in order n = 1, 2, ...; entries sorted by cause.
  /// Throws InputError when the row violates the simplex or ordering rules.
  void append_row(std::vector<TriggerEntry> entries);

  std::size_t num_events() const { return offsets_.size() - 1; }
  std::span<const TriggerEntry> row(std::size_t n) const;
  double at(std::size_t n, std::size_t i) const;
  double self_probability(std::size_t n) const { return at(n, n); }
  std::size_t nonzeros() const { return entries_.size(); }

  static constexpr double kRowSumTolerance = 1e-9;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<TriggerEntry> entries_;
};

}  // namespace l0hawkes

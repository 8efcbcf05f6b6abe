#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace l0hawkes {

/// Bidirectional map between type labels and dense indices 0..D-1.
class TypeDictionary {
 public:
  TypeDictionary() = default;
  explicit TypeDictionary(std::vector<std::string> names);

  /// Returns the index of `name`, inserting it at the end if absent.
  int intern(const std::string& name);
  std::optional<int> find(const std::string& name) const;

  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

/// N+1 time-ordered event instances. Instance 0 is the time origin and is
/// conditioned on; instances 1..N are the modelled observations.
class EventSequence {
 public:
  EventSequence(std::vector<double> timestamps, std::vector<int> types,
                std::vector<std::string> type_names);

  std::size_t size() const { return timestamps_.size(); }
  std::size_t num_events() const { return timestamps_.size() - 1; }
  std::size_t num_types() const { return type_names_.size(); }

  double time(std::size_t n) const { return timestamps_[n]; }
  int type(std::size_t n) const { return types_[n]; }
  std::span<const double> timestamps() const { return timestamps_; }
  std::span<const int> types() const { return types_; }
  const std::vector<std::string>& type_names() const { return type_names_; }
  const std::string& type_name(int d) const { return type_names_.at(static_cast<std::size_t>(d)); }

  /// t_n - t_i for 0 <= i <= n <= N. Throws std::out_of_range otherwise.
  double delta(std::size_t n, std::size_t i) const;

  /// t_N - t_0.
  double span() const { return timestamps_.back() - timestamps_.front(); }

  /// Per-type counts over instances 1..N (instance 0 excluded).
  std::vector<std::size_t> type_counts() const;

 private:
  std::vector<double> timestamps_;
  std::vector<int> types_;
  std::vector<std::string> type_names_;
};

/// Parses a `type,index` mapping CSV.
TypeDictionary read_type_mapping(std::istream& in);
TypeDictionary load_type_mapping(const std::filesystem::path& path);
void write_type_mapping(std::ostream& out, const TypeDictionary& dict);

/// Parses a `timestamp,type` CSV. Without a mapping, indices follow first
/// appearance. Errors carry 1-based line numbers (the header is line 1).
EventSequence read_events(std::istream& in, const std::optional<TypeDictionary>& mapping = std::nullopt);
EventSequence load_events(const std::filesystem::path& path,
                          const std::optional<TypeDictionary>& mapping = std::nullopt);

/// Writes the event CSV; timestamps use the shortest round-trip decimal form.
void write_events(std::ostream& out, const EventSequence& seq);
void save_events(const std::filesystem::path& path, const EventSequence& seq);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_real(double x);

}  // namespace l0hawkes

#include "l0hawkes/events.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "l0hawkes/error.hpp"

namespace l0hawkes {

TypeDictionary::TypeDictionary(std::vector<std::string> names) {
  for (auto& n : names) {
    if (index_.count(n)) throw InputError("duplicate type name '" + n + "'");
    index_.emplace(n, static_cast<int>(names_.size()));
    names_.push_back(std::move(n));
  }
}

int TypeDictionary::intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const int idx = static_cast<int>(names_.size());
  index_.emplace(name, idx);
  names_.push_back(name);
  return idx;
}

std::optional<int> TypeDictionary::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventSequence::EventSequence(std::vector<double> timestamps, std::vector<int> types,
                             std::vector<std::string> type_names)
    : timestamps_(std::move(timestamps)), types_(std::move(types)), type_names_(std::move(type_names)) {
  if (timestamps_.size() != types_.size())
    throw InputError("timestamps and types differ in length");
  if (timestamps_.size() < 2) throw InputError("an event sequence needs at least 2 instances");
  if (type_names_.empty()) throw InputError("an event sequence needs at least one type");
  const int num_types = static_cast<int>(type_names_.size());
  for (std::size_t n = 0; n < timestamps_.size(); ++n) {
    if (!std::isfinite(timestamps_[n]))
      throw InputError("non-finite timestamp at instance " + std::to_string(n));
    if (n > 0 && timestamps_[n] < timestamps_[n - 1])
      throw InputError("non-monotone timestamp at instance " + std::to_string(n));
    if (types_[n] < 0 || types_[n] >= num_types)
      throw InputError("type index out of range at instance " + std::to_string(n));
  }
}

double EventSequence::delta(std::size_t n, std::size_t i) const {
  if (n >= timestamps_.size() || i > n)
    throw std::out_of_range("delta(" + std::to_string(n) + ", " + std::to_string(i) + ") out of range");
  return timestamps_[n] - timestamps_[i];
}

std::vector<std::size_t> EventSequence::type_counts() const {
  std::vector<std::size_t> counts(num_types(), 0);
  for (std::size_t n = 1; n < types_.size(); ++n) ++counts[static_cast<std::size_t>(types_[n])];
  return counts;
}

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_real(std::string_view text, double& out) {
  // from_chars rejects a leading '+', accept it for hand-written files.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

TypeDictionary read_type_mapping(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("mapping file is empty");
  strip_cr(line);
  if (line != "type,index") throw InputError("mapping header must be 'type,index'");
  std::vector<std::pair<long, std::string>> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0)
      throw InputError("malformed mapping row at line " + std::to_string(row));
    const std::string idx_text = line.substr(comma + 1);
    long idx = -1;
    auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
    if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || idx < 0)
      throw InputError("malformed mapping index at line " + std::to_string(row));
    rows.emplace_back(idx, line.substr(0, comma));
  }
  std::vector<std::string> names(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (auto& [idx, name] : rows) {
    if (idx >= static_cast<long>(rows.size()) || seen[static_cast<std::size_t>(idx)])
      throw InputError("mapping indices must be a permutation of 0..D-1");
    seen[static_cast<std::size_t>(idx)] = true;
    names[static_cast<std::size_t>(idx)] = std::move(name);
  }
  if (names.empty()) throw InputError("mapping file has no rows");
  return TypeDictionary(std::move(names));
}

TypeDictionary load_type_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mapping file " + path.string());
  return read_type_mapping(in);
}

void write_type_mapping(std::ostream& out, const TypeDictionary& dict) {
  out << "type,index\n";
  for (std::size_t i = 0; i < dict.size(); ++i) out << dict.names()[i] << ',' << i << '\n';
}

EventSequence read_events(std::istream& in, const std::optional<TypeDictionary>& mapping) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("event file is empty");
  strip_cr(line);
  if (line != "timestamp,type") throw InputError("event header must be 'timestamp,type'");

  TypeDictionary dict = mapping.value_or(TypeDictionary{});
  std::vector<double> ts;
  std::vector<int> types;
  std::size_t row = 0;  // 1-based data row, header excluded
  std::size_t file_line = 1;
  while (std::getline(in, line)) {
    ++file_line;
    strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto where = [&] {
      return "line " + std::to_string(row) + " (file line " + std::to_string(file_line) + ")";
    };
    const auto comma = line.find(',');
    if (comma == std::string::npos || comma + 1 == line.size())
      throw InputError("malformed row at " + where());
    double t = 0.0;
    if (!parse_real(std::string_view(line).substr(0, comma), t))
      throw InputError("malformed timestamp at " + where());
    if (!ts.empty() && t < ts.back()) throw InputError("non-monotone at " + where());
    const std::string name = line.substr(comma + 1);
    int d = 0;
    if (mapping) {
      auto found = dict.find(name);
      if (!found) throw InputError("unknown type '" + name + "' at " + where());
      d = *found;
    } else {
      d = dict.intern(name);
    }
    ts.push_back(t);
    types.push_back(d);
  }
  return EventSequence(std::move(ts), std::move(types), dict.names());
}

EventSequence load_events(const std::filesystem::path& path, const std::optional<TypeDictionary>& mapping) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open event file " + path.string());
  return read_events(in, mapping);
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_real failed");
  return std::string(buf, ptr);
}

void write_events(std::ostream& out, const EventSequence& seq) {
  out << "timestamp,type\n";
  for (std::size_t n = 0; n < seq.size(); ++n)
    out << format_real(seq.time(n)) << ',' << seq.type_name(seq.type(n)) << '\n';
}

void save_events(const std::filesystem::path& path, const EventSequence& seq) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write event file " + path.string());
  write_events(out, seq);
}

}  // namespace l0hawkes

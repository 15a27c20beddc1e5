#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fockborn {

inline constexpr const char* kVersion = "0.1.0";

enum class Comparison { AtMost, AtLeast, InRange, Flag };

/// One verification result. `measured` is NaN when the check could not be
/// computed; `error` then says why.
struct CheckRecord {
  std::string section;
  std::string check_name;
  std::string paper_anchor;
  double measured = 0.0;
  double threshold = 0.0;
  double threshold_high = 0.0;  // upper end for InRange
  Comparison comparison = Comparison::AtMost;
  bool pass = false;
  std::optional<std::string> error;
};

CheckRecord at_most(std::string section, std::string name, std::string anchor, double measured,
                    double threshold);
CheckRecord at_least(std::string section, std::string name, std::string anchor, double measured,
                     double threshold);
CheckRecord in_range(std::string section, std::string name, std::string anchor, double measured,
                     double lo, double hi);
/// Boolean outcome; measured is 1 for true.
CheckRecord flag(std::string section, std::string name, std::string anchor, bool ok);
CheckRecord failed(std::string section, std::string name, std::string anchor, std::string error);

struct Provenance {
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::optional<std::string> timestamp;
};

class Report {
 public:
  Report(std::string command, std::string scenario, Provenance provenance)
      : command_(std::move(command)), scenario_(std::move(scenario)), provenance_(std::move(provenance)) {}

  void add(CheckRecord record) { records_.push_back(std::move(record)); }
  void set_detail(const std::string& section, nlohmann::ordered_json value) {
    details_[section] = std::move(value);
  }
  /// Appends another report's records and details (used by `all`).
  void merge(const Report& other);

  const std::vector<CheckRecord>& records() const noexcept { return records_; }
  const nlohmann::ordered_json& details() const noexcept { return details_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  bool pass() const noexcept;

  nlohmann::ordered_json to_json() const;
  void print_table(std::ostream& out) const;

 private:
  std::string command_;
  std::string scenario_;
  Provenance provenance_;
  std::vector<CheckRecord> records_;
  nlohmann::ordered_json details_ = nlohmann::ordered_json::object();
};

}  // namespace fockborn

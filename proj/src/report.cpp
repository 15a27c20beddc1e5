#include "fockborn/report.hpp"

#include <cmath>
#include <cstdio>

namespace fockborn {

namespace {

nlohmann::ordered_json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::AtMost: return "<=";
    case Comparison::AtLeast: return ">=";
    case Comparison::InRange: return "in";
    case Comparison::Flag: return "is";
  }
  return "?";
}

CheckRecord record(std::string section, std::string name, std::string anchor, double measured,
                   double threshold, double threshold_high = 0.0) {
  CheckRecord r;
  r.section = std::move(section);
  r.check_name = std::move(name);
  r.paper_anchor = std::move(anchor);
  r.measured = measured;
  r.threshold = threshold;
  r.threshold_high = threshold_high;
  return r;
}

}  // namespace

CheckRecord at_most(std::string section, std::string name, std::string anchor, double measured,
                    double threshold) {
  CheckRecord r = record(std::move(section), std::move(name), std::move(anchor), measured, threshold);
  r.comparison = Comparison::AtMost;
  r.pass = std::isfinite(measured) && measured <= threshold;
  return r;
}

CheckRecord at_least(std::string section, std::string name, std::string anchor, double measured,
                     double threshold) {
  CheckRecord r = record(std::move(section), std::move(name), std::move(anchor), measured, threshold);
  r.comparison = Comparison::AtLeast;
  r.pass = std::isfinite(measured) && measured >= threshold;
  return r;
}

CheckRecord in_range(std::string section, std::string name, std::string anchor, double measured,
                     double lo, double hi) {
  CheckRecord r = record(std::move(section), std::move(name), std::move(anchor), measured, lo, hi);
  r.comparison = Comparison::InRange;
  r.pass = std::isfinite(measured) && measured >= lo && measured <= hi;
  return r;
}

CheckRecord flag(std::string section, std::string name, std::string anchor, bool ok) {
  CheckRecord r = record(std::move(section), std::move(name), std::move(anchor), ok ? 1.0 : 0.0, 1.0);
  r.comparison = Comparison::Flag;
  r.pass = ok;
  return r;
}

CheckRecord failed(std::string section, std::string name, std::string anchor, std::string error) {
  CheckRecord r = record(std::move(section), std::move(name), std::move(anchor), std::nan(""), std::nan(""));
  r.pass = false;
  r.error = std::move(error);
  return r;
}

void Report::merge(const Report& other) {
  for (const auto& r : other.records_) records_.push_back(r);
  for (auto it = other.details_.begin(); it != other.details_.end(); ++it) {
    details_[it.key()] = it.value();
  }
}

bool Report::pass() const noexcept {
  for (const auto& r : records_) {
    if (!r.pass) return false;
  }
  return !records_.empty();
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["scenario"] = scenario_;
  j["overall_pass"] = pass();
  nlohmann::ordered_json prov;
  prov["seed"] = provenance_.seed;
  prov["version"] = provenance_.version;
  if (provenance_.timestamp) {
    prov["timestamp"] = *provenance_.timestamp;
  } else {
    prov["timestamp"] = nullptr;
  }
  j["provenance"] = prov;
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : records_) {
    nlohmann::ordered_json rec;
    rec["section"] = r.section;
    rec["check_name"] = r.check_name;
    rec["paper_anchor"] = r.paper_anchor;
    rec["measured_value"] = number_or_null(r.measured);
    rec["comparison"] = comparison_name(r.comparison);
    if (r.comparison == Comparison::InRange) {
      rec["threshold"] = {number_or_null(r.threshold), number_or_null(r.threshold_high)};
    } else {
      rec["threshold"] = number_or_null(r.threshold);
    }
    rec["pass"] = r.pass;
    if (r.error) rec["error"] = *r.error;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  j["details"] = details_;
  return j;
}

void Report::print_table(std::ostream& out) const {
  char line[512];
  std::snprintf(line, sizeof line, "%-12s %-44s %-14s %-4s %-22s %s\n", "section", "check",
                "measured", "cmp", "threshold", "result");
  out << line;
  for (const auto& r : records_) {
    char thr[64];
    if (r.comparison == Comparison::InRange) {
      std::snprintf(thr, sizeof thr, "[%.3g, %.3g]", r.threshold, r.threshold_high);
    } else {
      std::snprintf(thr, sizeof thr, "%.3g", r.threshold);
    }
    std::snprintf(line, sizeof line, "%-12s %-44s %-14.6g %-4s %-22s %s\n", r.section.c_str(),
                  r.check_name.c_str(), r.measured, comparison_name(r.comparison), thr,
                  r.pass ? "PASS" : "FAIL");
    out << line;
    if (r.error) out << "    error: " << *r.error << '\n';
  }
  out << (pass() ? "overall: PASS" : "overall: FAIL") << '\n';
}

}  // namespace fockborn

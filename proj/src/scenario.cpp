#include "fockborn/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fockborn/errors.hpp"

namespace fockborn {

namespace {

using nlohmann::json;

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class Fields {
 public:
  Fields(const json& obj, std::string path, std::string source)
      : obj_(obj), path_(std::move(path)), source_(std::move(source)) {
    if (!obj_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ": field '" + (path_.empty() ? "<root>" : path_) + "': " + what);
  }
  [[noreturn]] void fail_at(const std::string& key, const std::string& what) const {
    throw ParseError(source_ + ": field '" + child(key) + "': " + what);
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& at(const std::string& key) const {
    if (!has(key)) fail_at(key, "missing required field");
    return obj_.at(key);
  }

  void reject_unknown(std::initializer_list<const char*> known) const {
    std::set<std::string> ok(known.begin(), known.end());
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!ok.count(it.key())) fail_at(it.key(), "unknown field");
    }
  }

  double number(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number()) fail_at(key, "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) fail_at(key, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail_at(key, "expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) const {
    const json& v = at(key);
    if (!v.is_string()) fail_at(key, "expected a string");
    return v.get<std::string>();
  }

  const std::string& source() const { return source_; }

 private:
  const json& obj_;
  std::string path_;
  std::string source_;
};

Complex parse_complex(const json& v, const Fields& f, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  f.fail_at(where, "expected a [re, im] pair");
}

COperator parse_basis(const json& v, int dim, const Fields& f, const std::string& key) {
  if (v.is_object()) {
    Fields g(v, f.child(key), f.source());
    g.reject_unknown({"haar_seed"});
    return haar_unitary(dim, g.unsigned_integer("haar_seed"));
  }
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    f.fail_at(key, "expected " + std::to_string(dim) + " rows or {\"haar_seed\": N}");
  }
  COperator b(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string row_key = key + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      f.fail_at(row_key, "expected a row of " + std::to_string(dim) + " entries");
    }
    for (int j = 0; j < dim; ++j) {
      b(i, j) = parse_complex(row[static_cast<std::size_t>(j)], f,
                              row_key + "[" + std::to_string(j) + "]");
      if (!std::isfinite(b(i, j).real()) || !std::isfinite(b(i, j).imag())) {
        throw ValidationError(f.source() + ": " + f.child(row_key) + ": entries must be finite");
      }
    }
  }
  return b;
}

struct ParsedObservable {
  ObservableSpec spec;
  std::vector<int> weights;
};

ParsedObservable parse_observable(const json& v, int dim, const std::string& key,
                                  const std::string& source, double tol, bool allow_weights) {
  Fields f(v, key, source);
  if (allow_weights) {
    f.reject_unknown({"labels", "values", "basis", "weights"});
  } else {
    f.reject_unknown({"labels", "values", "basis"});
  }
  const json& labels_json = f.at("labels");
  if (!labels_json.is_array() || static_cast<int>(labels_json.size()) != dim) {
    f.fail_at("labels", "expected " + std::to_string(dim) + " strings");
  }
  std::vector<std::string> labels;
  for (const auto& l : labels_json) {
    if (!l.is_string()) f.fail_at("labels", "labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw ValidationError(source + ": " + key + ": labels not distinct");
  }

  std::vector<double> values;
  if (f.has("values")) {
    const json& vj = f.at("values");
    if (!vj.is_array() || static_cast<int>(vj.size()) != dim) {
      f.fail_at("values", "expected " + std::to_string(dim) + " numbers");
    }
    for (const auto& x : vj) {
      if (!x.is_number()) f.fail_at("values", "values must be numbers");
      values.push_back(x.get<double>());
      if (!std::isfinite(values.back())) {
        throw ValidationError(source + ": " + key + ": values must be finite");
      }
    }
  } else {
    for (int n = 0; n < dim; ++n) values.push_back(n);
  }
  if (std::set<double>(values.begin(), values.end()).size() != values.size()) {
    throw ValidationError(source + ": " + key + ": outcome values not distinct");
  }

  std::vector<int> weights(static_cast<std::size_t>(dim), 1);
  if (f.has("weights")) {
    const json& wj = f.at("weights");
    if (!wj.is_array() || static_cast<int>(wj.size()) != dim) {
      f.fail_at("weights", "expected " + std::to_string(dim) + " integers");
    }
    for (std::size_t n = 0; n < wj.size(); ++n) {
      if (!wj[n].is_number_integer()) f.fail_at("weights", "weights must be integers");
      weights[n] = wj[n].get<int>();
      if (weights[n] == 0) throw ValidationError(source + ": " + key + ": weight is zero");
    }
  }

  const COperator basis = parse_basis(f.at("basis"), dim, f, "basis");
  if (!is_unitary(basis, tol)) {
    throw ValidationError(source + ": " + key + ": basis not unitary");
  }
  try {
    return {ObservableSpec(std::move(labels), std::move(values),
                           ProjectorFamily::from_basis(basis, tol)),
            std::move(weights)};
  } catch (const Error& e) {
    throw ValidationError(source + ": " + key + ": " + e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                     e.what());
  }
  Fields root(doc, "", source);
  root.reject_unknown({"name", "dim", "observable_A", "observable_Psi", "initial_outcome",
                       "fock_cutoff", "trials", "seed", "tolerances"});

  Tolerances tol;
  if (root.has("tolerances")) {
    Fields t(root.at("tolerances"), "tolerances", source);
    t.reject_unknown({"structural", "cross_term", "statistical_sigma"});
    if (t.has("structural")) tol.structural = t.number("structural");
    if (t.has("cross_term")) tol.cross_term = t.number("cross_term");
    if (t.has("statistical_sigma")) tol.statistical_sigma = t.number("statistical_sigma");
    if (!(tol.structural > 0) || !(tol.cross_term > 0) || !(tol.statistical_sigma > 0)) {
      throw ValidationError(source + ": tolerances must be positive");
    }
  }

  const std::int64_t dim = root.integer("dim");
  if (dim < 1 || dim > 8) throw ValidationError(source + ": dim must be in 1..8");
  const int d = static_cast<int>(dim);

  auto a = parse_observable(root.at("observable_A"), d, "observable_A", source, tol.structural,
                            false);
  auto psi = parse_observable(root.at("observable_Psi"), d, "observable_Psi", source,
                              tol.structural, true);

  const std::string initial = root.string("initial_outcome");
  const auto initial_index = psi.spec.index_of(initial);
  if (!initial_index) {
    throw ValidationError(source + ": initial_outcome '" + initial +
                          "' is not a label of observable_Psi");
  }

  int cutoff = kDefaultFockCutoff;
  if (root.has("fock_cutoff")) {
    const auto c = root.integer("fock_cutoff");
    if (c < 1 || c > 12) throw ValidationError(source + ": fock_cutoff must be in 1..12");
    cutoff = static_cast<int>(c);
  }
  std::uint64_t trials = kDefaultTrials;
  if (root.has("trials")) {
    trials = root.unsigned_integer("trials");
    if (trials < 1) throw ValidationError(source + ": trials must be >= 1");
  }
  std::optional<std::uint64_t> seed;
  if (root.has("seed")) seed = root.unsigned_integer("seed");

  std::string name = root.has("name") ? root.string("name") : source;

  return Scenario{std::move(name),
                  d,
                  std::move(a.spec),
                  std::move(psi.spec),
                  std::move(psi.weights),
                  *initial_index,
                  cutoff,
                  trials,
                  seed,
                  tol};
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str(), path.filename().string());
  return s;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli_seed, const Scenario& scenario,
                           const char* env_value) {
  if (cli_seed) return *cli_seed;
  if (scenario.seed) return *scenario.seed;
  if (env_value != nullptr && *env_value != '\0') {
    try {
      std::size_t used = 0;
      const std::string s(env_value);
      if (s.front() == '-') throw std::invalid_argument("negative");
      const auto v = std::stoull(s, &used, 0);
      if (used != s.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ValidationError(std::string("FOCKBORN_SEED is not an unsigned integer: '") +
                            env_value + "'");
    }
  }
  return kDefaultSeed;
}

namespace testing {

void inject_projectors(Scenario& scenario, bool observable_a, std::vector<COperator> projectors) {
  ObservableSpec& target = observable_a ? scenario.observable_a : scenario.observable_psi;
  target = ObservableSpec(target.labels(), target.values(),
                          ProjectorFamily::unchecked(std::move(projectors)));
}

}  // namespace testing

}  // namespace fockborn

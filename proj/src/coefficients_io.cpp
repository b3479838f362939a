#include "nullcone/coefficients_io.hpp"

#include <fstream>

namespace nullcone::nullform {

using nlohmann::json;

namespace {

template <class Tensor>
json sparse_entries(const Tensor& t) {
  json out = json::array();
  if (t.empty()) return out;
  t.for_each_nonzero([&](const auto& comp, const auto& slot, double v) {
    json idx = json::array();
    for (int c : comp) idx.push_back(c + 1);
    for (int s : slot) idx.push_back(s);
    out.push_back(json::array({idx, v}));
  });
  return out;
}

template <class Tensor>
void read_entries(const json& entries, Tensor& t, const char* name) {
  if (!entries.is_array()) throw CoefficientParseError(std::string(name) + " must be an array of [index, value] pairs");
  constexpr int C = Tensor::kComponents;
  constexpr int S = Tensor::kSlots;
  for (const auto& entry : entries) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array() || !entry[1].is_number()) {
      throw CoefficientParseError(std::string(name) + " entries must look like [[indices...], value]");
    }
    const auto& idx = entry[0];
    if (idx.size() != static_cast<std::size_t>(C + S)) {
      throw CoefficientParseError(std::string(name) + " index has wrong length");
    }
    typename Tensor::ComponentIndex comp{};
    typename Tensor::SlotIndex slot{};
    for (int i = 0; i < C; ++i) {
      if (!idx[static_cast<std::size_t>(i)].is_number_integer()) throw CoefficientParseError("indices must be integers");
      comp[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)].get<int>() - 1;
    }
    for (int i = 0; i < S; ++i) {
      if (!idx[static_cast<std::size_t>(C + i)].is_number_integer()) throw CoefficientParseError("indices must be integers");
      slot[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(C + i)].get<int>();
    }
    try {
      t(comp, slot) += entry[1].get<double>();
    } catch (const std::out_of_range& e) {
      throw CoefficientParseError(std::string(name) + ": " + e.what());
    }
  }
}

Matrix read_matrix(const json& doc, const char* key, int d) {
  Matrix m(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
  if (!doc.contains(key)) return m;
  return doc.at(key).get<Matrix>();
}

CoefficientSet from_example(const json& ex, int dim, const SpeedVector& speeds) {
  const std::string kind = ex.value("kind", "multi_speed");
  std::vector<double> lift = ex.value("lift", std::vector<double>{});
  const double quasilinear = ex.value("quasilinear", 1.0);
  if (!lift.empty() || quasilinear != 1.0) {
    if (lift.empty()) {
      lift.assign(static_cast<std::size_t>(dim + 1), 0.0);
      lift[0] = 1.0;
    }
    for (double& w : lift) w *= quasilinear;
  }
  if (kind == "multi_speed") {
    const int d = static_cast<int>(speeds.size());
    return make_example_system(speeds, dim, read_matrix(ex, "kappa", d), read_matrix(ex, "lambda", d), lift);
  }
  if (kind == "cubic") {
    if (dim != 2) throw CoefficientParseError("cubic example requires dim == 2");
    const auto distinct = speeds.distinct();
    if (distinct.size() != 1) throw CoefficientParseError("cubic example requires a single speed");
    return make_cubic_example(distinct.front(), ex.at("lambda").get<std::vector<double>>(), lift);
  }
  throw CoefficientParseError("unknown example kind '" + kind + "'");
}

}  // namespace

json coefficients_to_json(const CoefficientSet& cs) {
  json doc;
  doc["dim"] = cs.dim;
  doc["speeds"] = cs.speeds.values();
  doc["B"] = sparse_entries(cs.b);
  doc["Q"] = sparse_entries(cs.q);
  if (!cs.cubic.empty()) {
    doc["B3"] = sparse_entries(cs.cubic.b3);
    doc["Q3"] = sparse_entries(cs.cubic.q3);
  }
  return doc;
}

CoefficientSet coefficients_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw CoefficientParseError("coefficient document must be a JSON object");
    const int dim = doc.at("dim").get<int>();
    if (dim < 1 || dim > 3) throw CoefficientParseError("dim must be 1, 2 or 3");
    SpeedVector speeds(doc.at("speeds").get<std::vector<double>>());
    CoefficientSet cs;
    if (doc.contains("example")) {
      cs = from_example(doc.at("example"), dim, speeds);
    } else {
      const bool cubic = doc.contains("B3") || doc.contains("Q3");
      cs = CoefficientSet::zeros(dim, speeds, cubic);
    }
    if (doc.contains("B")) read_entries(doc.at("B"), cs.b, "B");
    if (doc.contains("Q")) read_entries(doc.at("Q"), cs.q, "Q");
    if (doc.contains("B3")) {
      if (cs.cubic.empty()) cs.cubic = CoefficientSet::zeros(dim, speeds, true).cubic;
      read_entries(doc.at("B3"), cs.cubic.b3, "B3");
    }
    if (doc.contains("Q3")) {
      if (cs.cubic.empty()) cs.cubic = CoefficientSet::zeros(dim, speeds, true).cubic;
      read_entries(doc.at("Q3"), cs.cubic.q3, "Q3");
    }
    cs.validate();
    return cs;
  } catch (const CoefficientParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw CoefficientParseError(std::string("invalid coefficient document: ") + e.what());
  }
}

CoefficientSet load_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CoefficientParseError("cannot open coefficient file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw CoefficientParseError(std::string("malformed JSON in ") + path.string() + ": " + e.what());
  }
  return coefficients_from_json(doc);
}

json null_report_to_json(const NullReport& report) {
  json doc;
  doc["holds"] = report.holds();
  doc["samples"] = report.samples;
  doc["tol"] = report.tol;
  doc["worst_residual"] = report.worst_residual;
  doc["witness"] = report.witness ? json(*report.witness) : json(nullptr);
  json tuples = json::array();
  for (const auto& t : report.tuples) {
    json entry;
    std::vector<int> one_based;
    for (int c : t.components) one_based.push_back(c + 1);
    entry["components"] = one_based;
    entry["verdict"] = to_string(t.verdict);
    entry["residual"] = t.residual;
    if (t.witness) entry["witness"] = *t.witness;
    tuples.push_back(entry);
  }
  doc["tuples"] = tuples;
  return doc;
}

json symmetry_report_to_json(const std::vector<SymmetryViolation>& violations) {
  json out = json::array();
  for (const auto& v : violations) {
    auto one_based = [](std::vector<int> c) {
      for (int& x : c) ++x;
      return c;
    };
    out.push_back({{"components", one_based(v.components)},
                   {"slots", v.slots},
                   {"partner_components", one_based(v.partner_components)},
                   {"partner_slots", v.partner_slots},
                   {"value", v.value},
                   {"partner_value", v.partner_value}});
  }
  return out;
}

}  // namespace nullcone::nullform

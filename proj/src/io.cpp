#include "momentmix/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "momentmix/errors.hpp"

namespace momentmix::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) parse_fail(std::string("missing field \"") + name + "\"");
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception& e) {
    parse_fail(std::string("bad field \"") + name + "\": " + e.what());
  }
}

json entries_json(const std::vector<TensorKey>& keys, auto value_at) {
  json entries = json::array();
  for (std::size_t q = 0; q < keys.size(); ++q) {
    const Complex v = value_at(q);
    json e;
    e["key"] = std::vector<int>(keys[q].slots().begin(), keys[q].slots().end());
    e["re"] = v.real();
    e["im"] = v.imag();
    entries.push_back(std::move(e));
  }
  return entries;
}

struct RawTensor {
  int d = 0;
  int m = 0;
  std::vector<TensorKey> keys;
  std::vector<Complex> values;
};

RawTensor read_entries(const std::string& text) {
  const json doc = parse(text);
  RawTensor raw;
  raw.d = field<int>(doc, "d");
  raw.m = field<int>(doc, "m");
  const auto entries = field<json>(doc, "entries");
  if (!entries.is_array()) parse_fail("\"entries\" must be an array");
  for (const auto& e : entries) {
    auto key = field<std::vector<int>>(e, "key");
    if (static_cast<int>(key.size()) != raw.m) parse_fail("key " + key_to_string(key) + " does not have m slots");
    if (!std::is_sorted(key.begin(), key.end())) parse_fail("key " + key_to_string(key) + " is not sorted");
    TensorKey tk(std::move(key));
    if (!raw.keys.empty() && !(raw.keys.back() < tk)) {
      parse_fail("key " + key_to_string(tk.slots()) + " is duplicated or out of order");
    }
    raw.keys.push_back(std::move(tk));
    raw.values.emplace_back(field<double>(e, "re"), e.contains("im") ? field<double>(e, "im") : 0.0);
  }
  return raw;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string tensor_to_json(const IncompleteSymmetricTensor& t) {
  json doc;
  doc["d"] = t.dim();
  doc["m"] = t.order();
  doc["entries"] = entries_json(t.keys(), [&](std::size_t q) { return t.values()[q]; });
  return doc.dump() + "\n";
}

IncompleteSymmetricTensor tensor_from_json(const std::string& text) {
  auto raw = read_entries(text);
  try {
    return IncompleteSymmetricTensor(raw.d, raw.m, std::move(raw.keys), std::move(raw.values));
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

std::string moments_to_json(const MomentSet& moments) {
  json doc;
  doc["d"] = moments.dim();
  doc["m"] = moments.order();
  doc["entries"] = entries_json(moments.keys(), [&](std::size_t q) { return Complex(moments.values()[q]); });
  return doc.dump() + "\n";
}

MomentSet moments_from_json(const std::string& text) {
  auto raw = read_entries(text);
  std::vector<double> values;
  values.reserve(raw.values.size());
  for (const auto& v : raw.values) {
    if (v.imag() != 0.0) parse_fail("moments must be real");
    values.push_back(v.real());
  }
  try {
    return MomentSet(raw.d, raw.m, std::move(raw.keys), std::move(values));
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

namespace {

json components_doc(const ComponentList& comps, int m) {
  json doc;
  doc["d"] = comps.dim();
  doc["m"] = m;
  doc["r"] = comps.rank();
  json list = json::array();
  for (Eigen::Index i = 0; i < comps.vectors.cols(); ++i) {
    // Weights are absorbed so the file always describes unit-weight vectors.
    const Complex w = std::pow(comps.weight(i), 1.0 / m);
    std::vector<double> re, im;
    for (Eigen::Index j = 0; j < comps.vectors.rows(); ++j) {
      const Complex v = comps.weights.size() == 0 ? comps.vectors(j, i) : w * comps.vectors(j, i);
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    list.push_back({{"re", re}, {"im", im}});
  }
  doc["components"] = std::move(list);
  return doc;
}

}  // namespace

std::string components_to_json(const ComponentList& comps, int m) { return components_doc(comps, m).dump(2) + "\n"; }

std::string decomposition_to_json(const Decomposition& dec) {
  json doc = components_doc(dec.components, dec.m);
  const auto& g = dec.diagnostics;
  json diag;
  diag["p"] = dec.p;
  diag["k"] = dec.k;
  diag["decomp_err"] = g.decomp_err;
  diag["eigen_gap"] = g.eigen_gap;
  diag["xi_attempts"] = g.xi_attempts;
  diag["generating_residual"] = g.generating_residual;
  diag["ill_conditioned_columns"] = g.ill_conditioned_columns;
  diag["tails_residual"] = g.tails_residual;
  diag["heads_residual"] = g.heads_residual;
  diag["scales_residual"] = g.scales_residual;
  if (g.refined) {
    diag["label_shift"] = g.label_shift;
    diag["pre_refine_residual"] = g.pre_refine_residual;
    diag["post_refine_residual"] = g.post_refine_residual;
    diag["refine_iterations"] = g.refine_iterations;
    diag["refine_converged"] = g.refine_converged;
  }
  if (g.abs_err) diag["abs_err"] = *g.abs_err;
  if (g.rel_err) diag["rel_err"] = *g.rel_err;
  doc["diagnostics"] = std::move(diag);
  return doc.dump(2) + "\n";
}

ComponentList components_from_json(const std::string& text, int* order) {
  const json doc = parse(text);
  const int d = field<int>(doc, "d");
  const int r = field<int>(doc, "r");
  if (order) *order = field<int>(doc, "m");
  const auto comps = field<json>(doc, "components");
  if (!comps.is_array() || static_cast<int>(comps.size()) != r) parse_fail("\"components\" must hold r entries");
  ComponentList out;
  out.vectors.resize(d, r);
  for (int i = 0; i < r; ++i) {
    const auto re = field<std::vector<double>>(comps[static_cast<std::size_t>(i)], "re");
    const auto im = field<std::vector<double>>(comps[static_cast<std::size_t>(i)], "im");
    if (static_cast<int>(re.size()) != d || static_cast<int>(im.size()) != d) parse_fail("component length differs from d");
    for (int j = 0; j < d; ++j) out.vectors(j, i) = Complex(re[static_cast<std::size_t>(j)], im[static_cast<std::size_t>(j)]);
  }
  return out;
}

std::string model_to_json(const GmmModel& model) {
  json doc;
  doc["r"] = model.rank();
  doc["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  json means = json::array(), variances = json::array();
  for (int i = 0; i < model.rank(); ++i) {
    means.push_back(std::vector<double>(model.means.col(i).data(), model.means.col(i).data() + model.dim()));
    variances.push_back(std::vector<double>(model.variances.col(i).data(), model.variances.col(i).data() + model.dim()));
  }
  doc["means"] = std::move(means);
  doc["variances"] = std::move(variances);
  return doc.dump(2) + "\n";
}

GmmModel model_from_json(const std::string& text) {
  const json doc = parse(text);
  const int r = field<int>(doc, "r");
  const auto weights = field<std::vector<double>>(doc, "weights");
  const auto means = field<std::vector<std::vector<double>>>(doc, "means");
  const auto variances = field<std::vector<std::vector<double>>>(doc, "variances");
  if (r < 1 || static_cast<int>(weights.size()) != r || static_cast<int>(means.size()) != r ||
      static_cast<int>(variances.size()) != r) {
    parse_fail("model arrays must have r entries");
  }
  const auto d = static_cast<Eigen::Index>(means[0].size());
  GmmModel model;
  model.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), r);
  model.means.resize(d, r);
  model.variances.resize(d, r);
  for (int i = 0; i < r; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (static_cast<Eigen::Index>(means[ui].size()) != d || static_cast<Eigen::Index>(variances[ui].size()) != d) {
      parse_fail("component vectors differ in length");
    }
    model.means.col(i) = Eigen::Map<const Eigen::VectorXd>(means[ui].data(), d);
    model.variances.col(i) = Eigen::Map<const Eigen::VectorXd>(variances[ui].data(), d);
  }
  try {
    model.validate();
  } catch (const Error& e) {
    parse_fail(e.what());
  }
  return model;
}

std::string samples_to_csv(const Eigen::MatrixXd& data) {
  std::string out;
  for (Eigen::Index row = 0; row < data.rows(); ++row) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out += ',';
      out += format_double(data(row, j));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd samples_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      while (p < end && *p == ' ') ++p;
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) parse_fail("bad number on CSV line " + std::to_string(line_no));
      row.push_back(v);
      p = res.ptr;
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (*p != ',') parse_fail("unexpected character on CSV line " + std::to_string(line_no));
      ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_fail("CSV line " + std::to_string(line_no) + " has a different column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_fail("no samples in CSV");
  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return data;
}

std::string labels_to_csv(const std::vector<int>& labels) {
  std::string out;
  for (int l : labels) out += std::to_string(l) + "\n";
  return out;
}

std::vector<int> labels_from_csv(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int v = 0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size()) parse_fail("bad label \"" + line + "\"");
    out.push_back(v);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorCode::Parse, "write failed for " + path);
}

}  // namespace momentmix::io

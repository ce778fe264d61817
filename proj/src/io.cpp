// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vds/sampling.hpp"

namespace vds {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::invalid_input, "cannot open for writing: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  require(out.good(), Errc::invalid_input, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::invalid_input, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  try {
    size_t pos = 0;
    v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

struct CsvBody {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;  // trailing "# key=value" lines
};

CsvBody read_csv_body(const std::string& path) {
  CsvBody body;
  std::istringstream in(read_text_file(path));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      body.comments.push_back(line);
      continue;
    }
    auto cells = split_csv_line(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& c : cells) {
      double v;
      if (!parse_double(c, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      require(first, Errc::invalid_input, "non-numeric row in " + path + ": " + line);
      first = false;
      continue;  // header
    }
    first = false;
    body.rows.push_back(std::move(row));
  }
  return body;
}

std::optional<double> comment_value(const CsvBody& body, const std::string& key) {
  const std::string tag = "# " + key + "=";
  for (const auto& c : body.comments) {
    if (c.rfind(tag, 0) == 0) {
      double v;
      if (parse_double(c.substr(tag.size()), v)) return v;
    }
  }
  return std::nullopt;
}

}  // namespace

void write_coherence_csv(const std::string& path, const RealVec& alpha) {
  std::string out = "index,alpha\n";
  for (Index i = 0; i < alpha.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += g17(alpha[i]);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_weights_csv(const std::string& path, const WeightsCsv& data) {
  require(data.alpha.size() == data.weight.size(), Errc::invalid_input,
          "alpha/weight length mismatch");
  std::string out = "index,alpha,weight\n";
  for (Index i = 0; i < data.alpha.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += g17(data.alpha[i]);
    out += ',';
    out += g17(data.weight[i]);
    out += '\n';
  }
  if (data.L2) out += "# L2=" + g17(*data.L2) + "\n";
  if (data.J) out += "# J=" + std::to_string(*data.J) + "\n";
  if (data.lambda) out += "# lambda=" + g17(*data.lambda) + "\n";
  write_text_file(path, out);
}

WeightsCsv read_weights_csv(const std::string& path) {
  auto body = read_csv_body(path);
  WeightsCsv w;
  const Index n = Index(body.rows.size());
  w.alpha.resize(n);
  w.weight.resize(n);
  for (Index i = 0; i < n; ++i) {
    const auto& r = body.rows[size_t(i)];
    require(r.size() >= 3, Errc::invalid_input, "expected index,alpha,weight in " + path);
    w.alpha[i] = r[1];
    w.weight[i] = r[2];
  }
  w.L2 = comment_value(body, "L2");
  if (auto j = comment_value(body, "J")) w.J = Index(*j);
  w.lambda = comment_value(body, "lambda");
  return w;
}

RealVec read_alpha_csv(const std::string& path) {
  auto body = read_csv_body(path);
  RealVec alpha(Index(body.rows.size()));
  for (Index i = 0; i < alpha.size(); ++i) {
    const auto& r = body.rows[size_t(i)];
    require(r.size() >= 2, Errc::invalid_input, "expected index,alpha in " + path);
    alpha[i] = r[1];
  }
  return alpha;
}

RealVec read_real_vector_csv(const std::string& path) {
  auto body = read_csv_body(path);
  RealVec v(Index(body.rows.size()));
  for (Index i = 0; i < v.size(); ++i) {
    require(!body.rows[size_t(i)].empty(), Errc::invalid_input, "empty row in " + path);
    v[i] = body.rows[size_t(i)][0];
  }
  return v;
}

ComplexVec read_complex_vector_csv(const std::string& path) {
  auto body = read_csv_body(path);
  ComplexVec v(Index(body.rows.size()));
  for (Index i = 0; i < v.size(); ++i) {
    const auto& r = body.rows[size_t(i)];
    require(!r.empty(), Errc::invalid_input, "empty row in " + path);
    v[i] = Complex(r[0], r.size() > 1 ? r[1] : 0.0);
  }
  return v;
}

void write_real_vector_csv(const std::string& path, const RealVec& v) {
  std::string out = "value\n";
  for (Index i = 0; i < v.size(); ++i) out += g17(v[i]) + "\n";
  write_text_file(path, out);
}

void write_complex_vector_csv(const std::string& path, const ComplexVec& v) {
  std::string out = "re,im\n";
  for (Index i = 0; i < v.size(); ++i) out += g17(v[i].real()) + "," + g17(v[i].imag()) + "\n";
  write_text_file(path, out);
}

std::vector<RealVec> read_vector_rows_csv(const std::string& path) {
  auto body = read_csv_body(path);
  std::vector<RealVec> rows;
  rows.reserve(body.rows.size());
  for (const auto& r : body.rows) {
    RealVec v(Index(r.size()));
    for (Index j = 0; j < v.size(); ++j) v[j] = r[size_t(j)];
    rows.push_back(std::move(v));
  }
  return rows;
}

void write_vector_rows_csv(const std::string& path, const std::vector<RealVec>& rows) {
  std::string out;
  for (const auto& v : rows) {
    for (Index j = 0; j < v.size(); ++j) {
      if (j) out += ',';
      out += g17(v[j]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

// --- JsonWriter ---------------------------------------------------------

void JsonWriter::comma() {
  if (!first_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::begin_object(const std::string& key) {
  comma();
  out_ += '"' + key + "\":{";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
  comma();
  out_ += '"' + key + "\":[";
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, double v) {
  comma();
  out_ += '"' + key + "\":" + g17(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, Index v) {
  comma();
  out_ += '"' + key + "\":" + std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, std::uint64_t v) {
  comma();
  out_ += '"' + key + "\":" + std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, int v) {
  comma();
  out_ += '"' + key + "\":" + std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, bool v) {
  comma();
  out_ += '"' + key + "\":" + (v ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& v) {
  comma();
  out_ += '"' + key + "\":\"" + v + '"';
  return *this;
}

JsonWriter& JsonWriter::element(double v) {
  comma();
  out_ += g17(v);
  return *this;
}

JsonWriter& JsonWriter::element(Index v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}

// --- Plan JSON ------------------------------------------------------------

void write_plan_json(const std::string& path, const SamplingPlan& plan) {
  JsonWriter w;
  w.begin_object();
  w.field("scheme", scheme_name(plan.scheme));
  w.field("seed", plan.rng.seed);
  w.field("stream", plan.rng.stream);
  w.field("n", plan.n);
  w.field("m", plan.m);
  w.field("attempts", plan.attempts);
  w.begin_array("indices");
  for (Index i : plan.indices) w.element(i);
  w.end_array();
  w.begin_array("multiplicities");
  for (Index c : plan.multiplicities) w.element(c);
  w.end_array();
  w.begin_array("precond");
  for (Index i = 0; i < plan.precond.size(); ++i) w.element(plan.precond[i]);
  w.end_array();
  w.end_object();
  write_text_file(path, w.str() + "\n");
}

SamplingPlan read_plan_json(const std::string& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  SamplingPlan plan;
  plan.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  plan.rng.seed = j.at("seed").get<std::uint64_t>();
  plan.rng.stream = j.value("stream", std::uint64_t(0));
  plan.n = j.at("n").get<Index>();
  plan.m = j.at("m").get<Index>();
  plan.attempts = j.value("attempts", Index(1));
  plan.indices = j.at("indices").get<std::vector<Index>>();
  plan.multiplicities = j.at("multiplicities").get<std::vector<Index>>();
  auto pv = j.at("precond").get<std::vector<double>>();
  plan.precond = Eigen::Map<const RealVec>(pv.data(), Index(pv.size()));
  require(plan.indices.size() == plan.multiplicities.size() &&
              Index(plan.indices.size()) == plan.precond.size(),
          Errc::invalid_input, "inconsistent plan arrays in " + path);
  return plan;
}

}  // namespace vds

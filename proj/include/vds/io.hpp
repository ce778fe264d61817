// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_IO_HPP
#define VDS_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "vds/core.hpp"

namespace vds {

struct SamplingPlan;

// Shortest exact decimal is not required by the file contracts; all floats are
// printed with 17 significant digits, which round-trips IEEE doubles.
std::string g17(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// --- CSV ---------------------------------------------------------------

// Header "index,alpha", one row per entry.
void write_coherence_csv(const std::string& path, const RealVec& alpha);

// Header "index,alpha,weight"; optional footer comments "# L2=", "# J=",
// "# lambda=". Readers of the alpha column accept both layouts.
struct WeightsCsv {
  RealVec alpha;
  RealVec weight;
  std::optional<double> L2;
  std::optional<Index> J;
  std::optional<double> lambda;
};
void write_weights_csv(const std::string& path, const WeightsCsv& data);
WeightsCsv read_weights_csv(const std::string& path);

// Reads the "alpha" column of either a coherence or a weights CSV.
RealVec read_alpha_csv(const std::string& path);

// Single data column (real) or two columns re,im (complex); a non-numeric
// first line is treated as a header.
RealVec read_real_vector_csv(const std::string& path);
ComplexVec read_complex_vector_csv(const std::string& path);
void write_real_vector_csv(const std::string& path, const RealVec& v);
void write_complex_vector_csv(const std::string& path, const ComplexVec& v);

// One vector per row, comma-separated. Used for atom and sample files.
std::vector<RealVec> read_vector_rows_csv(const std::string& path);
void write_vector_rows_csv(const std::string& path, const std::vector<RealVec>& rows);

// --- JSON --------------------------------------------------------------

// Minimal ordered JSON emitter so output bytes are fully specified (nlohmann
// is used for parsing only).
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key);
  JsonWriter& begin_object(const std::string& key);
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, double v);
  JsonWriter& field(const std::string& key, Index v);
  JsonWriter& field(const std::string& key, std::uint64_t v);
  JsonWriter& field(const std::string& key, int v);
  JsonWriter& field(const std::string& key, bool v);
  JsonWriter& field(const std::string& key, const std::string& v);
  JsonWriter& element(double v);
  JsonWriter& element(Index v);
  std::string str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> first_;  // per nesting level
};

void write_plan_json(const std::string& path, const SamplingPlan& plan);
SamplingPlan read_plan_json(const std::string& path);

}  // namespace vds

#endif  // VDS_IO_HPP

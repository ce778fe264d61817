// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/subspaces.hpp"

#include <nlohmann/json.hpp>

#include "vds/io.hpp"

namespace vds {

UnionOfSubspaces UnionOfSubspaces::from_bases(std::vector<ComplexMat> bases) {
  require(!bases.empty(), Errc::invalid_input, "union of subspaces needs at least one basis");
  UnionOfSubspaces u;
  u.n_ = bases.front().rows();
  u.real_ = true;
  for (const auto& b : bases) {
    require(b.rows() == u.n_, Errc::invalid_input, "bases must share the ambient dimension");
    require(b.cols() >= 1 && b.cols() <= b.rows(), Errc::invalid_input,
            "basis dimension out of range");
    const ComplexMat gram = b.adjoint() * b;
    const double dev = (gram - ComplexMat::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff();
    require(dev < 1e-10, Errc::invalid_input, "basis columns are not orthonormal");
    u.ell_ = std::max(u.ell_, b.cols());
    if (b.imag().cwiseAbs().maxCoeff() != 0.0) u.real_ = false;
  }
  u.bases_ = std::move(bases);
  return u;
}

UnionOfSubspaces UnionOfSubspaces::from_real_bases(const std::vector<RealMat>& bases) {
  std::vector<ComplexMat> cx;
  cx.reserve(bases.size());
  for (const auto& b : bases) cx.emplace_back(b.cast<Complex>());
  return from_bases(std::move(cx));
}

ComplexMat orthonormalize(const ComplexMat& basis) {
  Eigen::HouseholderQR<ComplexMat> qr(basis);
  ComplexMat q = qr.householderQ() * ComplexMat::Identity(basis.rows(), basis.cols());
  return q;
}

RealMat orthonormalize(const RealMat& basis) {
  Eigen::HouseholderQR<RealMat> qr(basis);
  RealMat q = qr.householderQ() * RealMat::Identity(basis.rows(), basis.cols());
  return q;
}

UnionOfSubspaces read_subspaces_json(const std::string& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  const Index n = j.at("n").get<Index>();
  std::vector<ComplexMat> bases;
  for (const auto& jb : j.at("bases")) {
    // A basis is a list of columns; entries are numbers or [re, im] pairs.
    const Index cols = Index(jb.size());
    require(cols >= 1, Errc::invalid_input, "empty basis in " + path);
    ComplexMat b(n, cols);
    for (Index c = 0; c < cols; ++c) {
      const auto& col = jb[size_t(c)];
      require(Index(col.size()) == n, Errc::invalid_input, "basis column length mismatch");
      for (Index r = 0; r < n; ++r) {
        const auto& e = col[size_t(r)];
        if (e.is_array()) {
          b(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        } else {
          b(r, c) = Complex(e.get<double>(), 0.0);
        }
      }
    }
    bases.push_back(std::move(b));
  }
  return UnionOfSubspaces::from_bases(std::move(bases));
}

void write_subspaces_json(const std::string& path, const UnionOfSubspaces& prior) {
  std::string out = "{\"n\":" + std::to_string(prior.n()) + ",\"bases\":[";
  bool first_b = true;
  for (const auto& b : prior.bases()) {
    if (!first_b) out += ',';
    first_b = false;
    out += '[';
    for (Index c = 0; c < b.cols(); ++c) {
      if (c) out += ',';
      out += '[';
      for (Index r = 0; r < b.rows(); ++r) {
        if (r) out += ',';
        if (prior.is_real()) {
          out += g17(b(r, c).real());
        } else {
          out += '[' + g17(b(r, c).real()) + ',' + g17(b(r, c).imag()) + ']';
        }
      }
      out += ']';
    }
    out += ']';
  }
  out += "]}\n";
  write_text_file(path, out);
}

}  // namespace vds

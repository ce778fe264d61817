// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_SUBSPACES_HPP
#define VDS_SUBSPACES_HPP

#include <string>
#include <vector>

#include "vds/core.hpp"

namespace vds {

// Prior cone given as a union of subspaces, each by an orthonormal basis
// (n x l_U with l_U <= max_dim). Bases are stored complex; real priors embed
// with zero imaginary part.
class UnionOfSubspaces {
 public:
  static UnionOfSubspaces from_bases(std::vector<ComplexMat> bases);
  static UnionOfSubspaces from_real_bases(const std::vector<RealMat>& bases);

  Index n() const { return n_; }
  Index count() const { return Index(bases_.size()); }  // M
  Index max_dim() const { return ell_; }                // l
  const std::vector<ComplexMat>& bases() const { return bases_; }
  bool is_real() const { return real_; }

 private:
  UnionOfSubspaces() = default;
  std::vector<ComplexMat> bases_;
  Index n_ = 0;
  Index ell_ = 0;
  bool real_ = false;
};

// Gram-Schmidt via Householder QR; returns an orthonormal basis of the column
// span (columns must be linearly independent).
ComplexMat orthonormalize(const ComplexMat& basis);
RealMat orthonormalize(const RealMat& basis);

UnionOfSubspaces read_subspaces_json(const std::string& path);
void write_subspaces_json(const std::string& path, const UnionOfSubspaces& prior);

}  // namespace vds

#endif  // VDS_SUBSPACES_HPP

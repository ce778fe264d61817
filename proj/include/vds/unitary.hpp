// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_UNITARY_HPP
#define VDS_UNITARY_HPP

#include <memory>
#include <string>

#include "vds/core.hpp"

namespace vds {

// A unitary measurement matrix F applied as an operator. Row j of F is
// recovered as f_j = F* e_j, so coherences can be computed without ever
// materializing F.
class UnitaryOperator {
 public:
  enum class Kind { identity, dft_1d, dft_2d_channelwise, haar_2d, dense };

  static UnitaryOperator identity(Index n);
  static UnitaryOperator dft_1d(Index n);
  // n = rows*cols*channels, one 2-D DFT per channel.
  static UnitaryOperator dft_2d_channelwise(Index rows, Index cols, Index channels = 1);
  // Orthonormal multilevel 2-D Haar transform; apply() analyzes, adjoint
  // synthesizes. rows and cols must be divisible by 2^levels.
  static UnitaryOperator haar_2d(Index rows, Index cols, int levels = 3);
  static UnitaryOperator dense(RealMat f);
  static UnitaryOperator dense(ComplexMat f);

  Kind kind() const;
  Index n() const;
  Field field() const;
  std::string describe() const;

  ComplexVec apply(const ComplexVec& x) const;          // F x
  ComplexVec apply_adjoint(const ComplexVec& y) const;  // F* y
  ComplexVec apply(const RealVec& x) const;

  // Real fast paths, valid only when field() == Field::real.
  RealVec apply_real(const RealVec& x) const;
  RealVec apply_adjoint_real(const RealVec& y) const;

  ComplexVec row(Index j) const;  // f_j = F* e_j

 private:
  struct Impl;
  explicit UnitaryOperator(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace vds

#endif  // VDS_UNITARY_HPP

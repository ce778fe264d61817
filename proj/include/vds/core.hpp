// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_CORE_HPP
#define VDS_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vds {

using Index = Eigen::Index;
using Real = double;
using Complex = std::complex<double>;

using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;

enum class Field { real, cplx };

enum class Errc {
  invalid_input,
  insufficient_measurements,
  resource_exhausted,
  infeasible,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_input: return "invalid-input";
    case Errc::insufficient_measurements: return "insufficient-measurements";
    case Errc::resource_exhausted: return "resource-exhausted";
    case Errc::infeasible: return "infeasible";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace vds

#endif  // VDS_CORE_HPP

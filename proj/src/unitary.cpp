// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/unitary.hpp"

#include <unsupported/Eigen/FFT>

#include "vds/rng.hpp"

namespace vds {

namespace {

// Unitary 1-D DFT (symmetric 1/sqrt(n) scaling). A thread-local FFT instance
// caches kissfft plans per size.
void dft_inplace(ComplexVec& x, bool inverse) {
  thread_local Eigen::FFT<double> fft;
  ComplexVec out(x.size());
  if (inverse) {
    fft.inv(out, x);  // scales by 1/n
    x = out * std::sqrt(double(x.size()));
  } else {
    fft.fwd(out, x);  // unscaled
    x = out / std::sqrt(double(x.size()));
  }
}

void dft2_channel(ComplexVec& x, Index rows, Index cols, bool inverse) {
  // Row-major layout: pixel (r, c) at r*cols + c.
  ComplexVec line;
  for (Index r = 0; r < rows; ++r) {
    line = x.segment(r * cols, cols);
    dft_inplace(line, inverse);
    x.segment(r * cols, cols) = line;
  }
  line.resize(rows);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) line[r] = x[r * cols + c];
    dft_inplace(line, inverse);
    for (Index r = 0; r < rows; ++r) x[r * cols + c] = line[r];
  }
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

// One orthonormal Haar split of the leading `len` entries of a line. Reads
// from a copy: the averages land on positions the pair loop still reads.
template <typename Vec>
void haar_split(Vec& buf, Index len) {
  const Index half = len / 2;
  Vec tmp = buf;
  for (Index i = 0; i < half; ++i) {
    const auto a = tmp[2 * i];
    const auto b = tmp[2 * i + 1];
    buf[i] = (a + b) * kInvSqrt2;
    buf[half + i] = (a - b) * kInvSqrt2;
  }
}

template <typename Vec>
void haar_merge(Vec& buf, Index len) {
  const Index half = len / 2;
  Vec tmp = buf;
  for (Index i = 0; i < half; ++i) {
    buf[2 * i] = (tmp[i] + tmp[half + i]) * kInvSqrt2;
    buf[2 * i + 1] = (tmp[i] - tmp[half + i]) * kInvSqrt2;
  }
}

template <typename Scalar>
void haar2_analyze(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Index rows, Index cols,
                   int levels) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Index h = rows, w = cols;
  Vec line;
  for (int lev = 0; lev < levels; ++lev) {
    line.resize(w);
    for (Index r = 0; r < h; ++r) {
      for (Index c = 0; c < w; ++c) line[c] = x[r * cols + c];
      haar_split(line, w);
      for (Index c = 0; c < w; ++c) x[r * cols + c] = line[c];
    }
    line.resize(h);
    for (Index c = 0; c < w; ++c) {
      for (Index r = 0; r < h; ++r) line[r] = x[r * cols + c];
      haar_split(line, h);
      for (Index r = 0; r < h; ++r) x[r * cols + c] = line[r];
    }
    h /= 2;
    w /= 2;
  }
}

template <typename Scalar>
void haar2_synthesize(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, Index rows, Index cols,
                      int levels) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec line;
  for (int lev = levels - 1; lev >= 0; --lev) {
    const Index h = rows >> lev;
    const Index w = cols >> lev;
    line.resize(h);
    for (Index c = 0; c < w; ++c) {
      for (Index r = 0; r < h; ++r) line[r] = x[r * cols + c];
      haar_merge(line, h);
      for (Index r = 0; r < h; ++r) x[r * cols + c] = line[r];
    }
    line.resize(w);
    for (Index r = 0; r < h; ++r) {
      for (Index c = 0; c < w; ++c) line[c] = x[r * cols + c];
      haar_merge(line, w);
      for (Index c = 0; c < w; ++c) x[r * cols + c] = line[c];
    }
  }
}

}  // namespace

struct UnitaryOperator::Impl {
  Kind kind = Kind::identity;
  Index n = 0;
  Field field = Field::real;
  Index rows = 0, cols = 0, channels = 1;
  int levels = 0;
  ComplexMat dense_c;
  RealMat dense_r;
  bool dense_real = false;
};

UnitaryOperator::UnitaryOperator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

UnitaryOperator UnitaryOperator::identity(Index n) {
  require(n >= 1, Errc::invalid_input, "identity: n must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::identity;
  impl->n = n;
  impl->field = Field::real;
  return UnitaryOperator(impl);
}

UnitaryOperator UnitaryOperator::dft_1d(Index n) {
  require(n >= 1, Errc::invalid_input, "dft_1d: n must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::dft_1d;
  impl->n = n;
  impl->field = Field::cplx;
  return UnitaryOperator(impl);
}

UnitaryOperator UnitaryOperator::dft_2d_channelwise(Index rows, Index cols, Index channels) {
  require(rows >= 1 && cols >= 1 && channels >= 1, Errc::invalid_input,
          "dft_2d: dimensions must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::dft_2d_channelwise;
  impl->rows = rows;
  impl->cols = cols;
  impl->channels = channels;
  impl->n = rows * cols * channels;
  impl->field = Field::cplx;
  return UnitaryOperator(impl);
}

UnitaryOperator UnitaryOperator::haar_2d(Index rows, Index cols, int levels) {
  require(rows >= 1 && cols >= 1 && levels >= 1, Errc::invalid_input,
          "haar_2d: dimensions and levels must be positive");
  require(rows % (Index(1) << levels) == 0 && cols % (Index(1) << levels) == 0,
          Errc::invalid_input, "haar_2d: rows and cols must be divisible by 2^levels");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::haar_2d;
  impl->rows = rows;
  impl->cols = cols;
  impl->levels = levels;
  impl->n = rows * cols;
  impl->field = Field::real;
  return UnitaryOperator(impl);
}

namespace {

// Unitarity check on a few random vectors; cheap and catches transposed or
// unnormalized inputs.
template <typename Mat, typename Vec>
void check_dense_unitary(const Mat& f) {
  CounterRng rng(0x756e697461727955ULL);
  const Index n = f.rows();
  for (int t = 0; t < 4; ++t) {
    Vec x(n);
    for (Index i = 0; i < n; ++i) x[i] = rng.next_gaussian();
    const double nx = x.norm();
    const double dev = (f.adjoint() * (f * x) - x).norm();
    require(dev <= 1e-10 * std::max(1.0, nx), Errc::invalid_input,
            "dense operator is not unitary");
  }
}

}  // namespace

UnitaryOperator UnitaryOperator::dense(RealMat f) {
  require(f.rows() == f.cols() && f.rows() >= 1, Errc::invalid_input, "dense: matrix must be square");
  check_dense_unitary<RealMat, RealVec>(f);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::dense;
  impl->n = f.rows();
  impl->field = Field::real;
  impl->dense_r = std::move(f);
  impl->dense_real = true;
  return UnitaryOperator(impl);
}

UnitaryOperator UnitaryOperator::dense(ComplexMat f) {
  require(f.rows() == f.cols() && f.rows() >= 1, Errc::invalid_input, "dense: matrix must be square");
  check_dense_unitary<ComplexMat, ComplexVec>(f);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::dense;
  impl->n = f.rows();
  impl->field = Field::cplx;
  impl->dense_c = std::move(f);
  return UnitaryOperator(impl);
}

UnitaryOperator::Kind UnitaryOperator::kind() const { return impl_->kind; }
Index UnitaryOperator::n() const { return impl_->n; }
Field UnitaryOperator::field() const { return impl_->field; }

std::string UnitaryOperator::describe() const {
  switch (impl_->kind) {
    case Kind::identity: return "identity(n=" + std::to_string(impl_->n) + ")";
    case Kind::dft_1d: return "dft1d(n=" + std::to_string(impl_->n) + ")";
    case Kind::dft_2d_channelwise:
      return "dft2d(" + std::to_string(impl_->rows) + "x" + std::to_string(impl_->cols) + "x" +
             std::to_string(impl_->channels) + ")";
    case Kind::haar_2d:
      return "haar2d(" + std::to_string(impl_->rows) + "x" + std::to_string(impl_->cols) +
             ",levels=" + std::to_string(impl_->levels) + ")";
    case Kind::dense: return "dense(n=" + std::to_string(impl_->n) + ")";
  }
  return "?";
}

ComplexVec UnitaryOperator::apply(const ComplexVec& x) const {
  require(x.size() == impl_->n, Errc::invalid_input, "apply: dimension mismatch");
  switch (impl_->kind) {
    case Kind::identity: return x;
    case Kind::dft_1d: {
      ComplexVec y = x;
      dft_inplace(y, false);
      return y;
    }
    case Kind::dft_2d_channelwise: {
      ComplexVec y = x;
      const Index per = impl_->rows * impl_->cols;
      for (Index ch = 0; ch < impl_->channels; ++ch) {
        ComplexVec block = y.segment(ch * per, per);
        dft2_channel(block, impl_->rows, impl_->cols, false);
        y.segment(ch * per, per) = block;
      }
      return y;
    }
    case Kind::haar_2d: {
      ComplexVec y = x;
      haar2_analyze(y, impl_->rows, impl_->cols, impl_->levels);
      return y;
    }
    case Kind::dense:
      return impl_->dense_real ? ComplexVec(impl_->dense_r * x) : ComplexVec(impl_->dense_c * x);
  }
  fail(Errc::invalid_input, "apply: unknown kind");
}

ComplexVec UnitaryOperator::apply_adjoint(const ComplexVec& y) const {
  require(y.size() == impl_->n, Errc::invalid_input, "apply_adjoint: dimension mismatch");
  switch (impl_->kind) {
    case Kind::identity: return y;
    case Kind::dft_1d: {
      ComplexVec x = y;
      dft_inplace(x, true);
      return x;
    }
    case Kind::dft_2d_channelwise: {
      ComplexVec x = y;
      const Index per = impl_->rows * impl_->cols;
      for (Index ch = 0; ch < impl_->channels; ++ch) {
        ComplexVec block = x.segment(ch * per, per);
        dft2_channel(block, impl_->rows, impl_->cols, true);
        x.segment(ch * per, per) = block;
      }
      return x;
    }
    case Kind::haar_2d: {
      ComplexVec x = y;
      haar2_synthesize(x, impl_->rows, impl_->cols, impl_->levels);
      return x;
    }
    case Kind::dense:
      return impl_->dense_real ? ComplexVec(impl_->dense_r.transpose() * y)
                               : ComplexVec(impl_->dense_c.adjoint() * y);
  }
  fail(Errc::invalid_input, "apply_adjoint: unknown kind");
}

ComplexVec UnitaryOperator::apply(const RealVec& x) const {
  return apply(ComplexVec(x.cast<Complex>()));
}

RealVec UnitaryOperator::apply_real(const RealVec& x) const {
  require(impl_->field == Field::real, Errc::invalid_input, "apply_real on a complex operator");
  require(x.size() == impl_->n, Errc::invalid_input, "apply_real: dimension mismatch");
  switch (impl_->kind) {
    case Kind::identity: return x;
    case Kind::haar_2d: {
      RealVec y = x;
      haar2_analyze(y, impl_->rows, impl_->cols, impl_->levels);
      return y;
    }
    case Kind::dense: return impl_->dense_r * x;
    default: fail(Errc::invalid_input, "apply_real: unsupported kind");
  }
}

RealVec UnitaryOperator::apply_adjoint_real(const RealVec& y) const {
  require(impl_->field == Field::real, Errc::invalid_input,
          "apply_adjoint_real on a complex operator");
  require(y.size() == impl_->n, Errc::invalid_input, "apply_adjoint_real: dimension mismatch");
  switch (impl_->kind) {
    case Kind::identity: return y;
    case Kind::haar_2d: {
      RealVec x = y;
      haar2_synthesize(x, impl_->rows, impl_->cols, impl_->levels);
      return x;
    }
    case Kind::dense: return impl_->dense_r.transpose() * y;
    default: fail(Errc::invalid_input, "apply_adjoint_real: unsupported kind");
  }
}

ComplexVec UnitaryOperator::row(Index j) const {
  require(j >= 0 && j < impl_->n, Errc::invalid_input, "row: index out of range");
  ComplexVec e = ComplexVec::Zero(impl_->n);
  e[j] = Complex(1.0, 0.0);
  return apply_adjoint(e);
}

}  // namespace vds

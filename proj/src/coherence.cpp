// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#include "vds/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "vds/rng.hpp"

namespace vds {

namespace {

// alpha updated entrywise with |F d|: the j-th inner product <f_j, d> is the
// j-th entry of F d, so one transform covers every row at once.
void max_abs_transform(const UnitaryOperator& F, const ComplexVec& d, RealVec& alpha) {
  const ComplexVec fd = F.apply(d);
  for (Index j = 0; j < alpha.size(); ++j) alpha[j] = std::max(alpha[j], std::abs(fd[j]));
}

std::vector<ComplexVec> to_complex(const std::vector<RealVec>& v) {
  std::vector<ComplexVec> out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x.cast<Complex>());
  return out;
}

}  // namespace

CoherenceVector coherence_exact(const UnitaryOperator& F, const UnionOfSubspaces& prior) {
  require(F.n() == prior.n(), Errc::invalid_input,
          "transform and prior disagree on the ambient dimension");
  RealVec alpha = RealVec::Zero(F.n());
  for (const auto& basis : prior.bases()) {
    // |B^* f_j| equals the norm of row j of F B.
    RealVec row_sq = RealVec::Zero(F.n());
    for (Index c = 0; c < basis.cols(); ++c) {
      const ComplexVec col = F.apply(ComplexVec(basis.col(c)));
      row_sq += col.cwiseAbs2();
    }
    alpha = alpha.cwiseMax(row_sq.cwiseSqrt());
  }
  return {std::move(alpha), CoherenceSource::exact_subspaces};
}

CoherenceVector coherence_dictionary(const UnitaryOperator& F,
                                     const std::vector<ComplexVec>& atoms) {
  require(!atoms.empty(), Errc::invalid_input, "empty atom list");
  RealVec alpha = RealVec::Zero(F.n());
  for (const auto& atom : atoms) {
    require(atom.size() == F.n(), Errc::invalid_input, "atom dimension mismatch");
    require(std::abs(atom.norm() - 1.0) <= 1e-8, Errc::invalid_input, "atoms must be unit norm");
    max_abs_transform(F, atom, alpha);
  }
  return {std::move(alpha), CoherenceSource::dictionary_heuristic};
}

CoherenceVector coherence_dictionary(const UnitaryOperator& F, const std::vector<RealVec>& atoms) {
  return coherence_dictionary(F, to_complex(atoms));
}

CoherenceVector coherence_samples(const UnitaryOperator& F,
                                  const std::vector<ComplexVec>& samples) {
  require(samples.size() >= 2, Errc::invalid_input, "need at least two samples");
  for (const auto& s : samples) {
    require(s.size() == F.n(), Errc::invalid_input, "sample dimension mismatch");
  }
  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, s.norm());
  const double tiny = 1e-13 * (1.0 + scale);

  RealVec alpha = RealVec::Zero(F.n());
  Index used = 0;
  const auto add_difference = [&](const ComplexVec& a, const ComplexVec& b) {
    ComplexVec d = a - b;
    const double nd = d.norm();
    if (nd <= tiny) return;
    d /= nd;
    max_abs_transform(F, d, alpha);
    ++used;
  };

  const Index count = Index(samples.size());
  if (count <= 64) {
    for (Index i = 0; i < count; ++i)
      for (Index j = i + 1; j < count; ++j) add_difference(samples[size_t(i)], samples[size_t(j)]);
  } else {
    // Quadratic pair growth is capped: differences to the mean plus a fixed
    // deterministic batch of random pairs.
    ComplexVec mean = ComplexVec::Zero(F.n());
    for (const auto& s : samples) mean += s;
    mean /= double(count);
    for (const auto& s : samples) add_difference(s, mean);
    CounterRng rng(0x73616d706c657364ULL);  // fixed stream: output is a pure function of inputs
    for (Index t = 0; t < 10 * count; ++t) {
      const Index i = Index(rng.next_u64() % std::uint64_t(count));
      const Index j = Index(rng.next_u64() % std::uint64_t(count));
      if (i != j) add_difference(samples[size_t(i)], samples[size_t(j)]);
    }
  }
  require(used > 0, Errc::invalid_input, "all samples identical: no nonzero difference");
  return {std::move(alpha), CoherenceSource::sample_based};
}

CoherenceVector coherence_samples(const UnitaryOperator& F, const std::vector<RealVec>& samples) {
  return coherence_samples(F, to_complex(samples));
}

std::vector<RealVec> haar_atoms_1d(Index n, int levels) {
  require(levels >= 1, Errc::invalid_input, "levels must be positive");
  const Index block = Index(1) << levels;
  require(n % block == 0, Errc::invalid_input, "n must be divisible by 2^levels");
  std::vector<RealVec> atoms;
  atoms.reserve(size_t(n));
  // Scaling functions at the coarsest level.
  const double sv = 1.0 / std::sqrt(double(block));
  for (Index t = 0; t < n / block; ++t) {
    RealVec a = RealVec::Zero(n);
    for (Index i = 0; i < block; ++i) a[t * block + i] = sv;
    atoms.push_back(std::move(a));
  }
  // Wavelets, coarse to fine.
  for (int lev = levels; lev >= 1; --lev) {
    const Index sup = Index(1) << lev;
    const double wv = 1.0 / std::sqrt(double(sup));
    for (Index t = 0; t < n / sup; ++t) {
      RealVec a = RealVec::Zero(n);
      for (Index i = 0; i < sup / 2; ++i) {
        a[t * sup + i] = wv;
        a[t * sup + sup / 2 + i] = -wv;
      }
      atoms.push_back(std::move(a));
    }
  }
  return atoms;
}

std::vector<RealVec> haar_atoms_1d_representatives(Index n, int levels) {
  require(levels >= 1, Errc::invalid_input, "levels must be positive");
  const Index block = Index(1) << levels;
  require(n % block == 0, Errc::invalid_input, "n must be divisible by 2^levels");
  std::vector<RealVec> atoms;
  atoms.reserve(size_t(levels) + 1);
  const double sv = 1.0 / std::sqrt(double(block));
  RealVec s = RealVec::Zero(n);
  for (Index i = 0; i < block; ++i) s[i] = sv;
  atoms.push_back(std::move(s));
  for (int lev = levels; lev >= 1; --lev) {
    const Index sup = Index(1) << lev;
    const double wv = 1.0 / std::sqrt(double(sup));
    RealVec a = RealVec::Zero(n);
    for (Index i = 0; i < sup / 2; ++i) {
      a[i] = wv;
      a[sup / 2 + i] = -wv;
    }
    atoms.push_back(std::move(a));
  }
  return atoms;
}

std::vector<RealVec> haar_atoms_2d(Index rows, Index cols, int levels) {
  const UnitaryOperator W = UnitaryOperator::haar_2d(rows, cols, levels);
  const Index n = rows * cols;
  std::vector<RealVec> atoms;
  atoms.reserve(size_t(n));
  RealVec e = RealVec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    e[i] = 1.0;
    atoms.push_back(W.apply_adjoint_real(e));
    e[i] = 0.0;
  }
  return atoms;
}

}  // namespace vds

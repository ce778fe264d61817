// Copyright 2026 the vds authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VDS_COHERENCE_HPP
#define VDS_COHERENCE_HPP

#include <vector>

#include "vds/core.hpp"
#include "vds/subspaces.hpp"
#include "vds/unitary.hpp"

namespace vds {

enum class CoherenceSource { exact_subspaces, dictionary_heuristic, sample_based };

// Per-row alignment of the measurement matrix with a prior. All entries are
// nonnegative and, for unit-norm rows, bounded by one.
struct CoherenceVector {
  RealVec alpha;
  CoherenceSource source = CoherenceSource::exact_subspaces;
};

// alpha_j = max over subspaces U of |B_U^* f_j|_2; the supremum over the
// subspace intersected with the unit ball is attained on the sphere, so no
// iterative maximization is involved.
CoherenceVector coherence_exact(const UnitaryOperator& F, const UnionOfSubspaces& prior);

// 1-sparse dictionary proxy: alpha_j = max over atoms of |<f_j, atom>|.
// Atoms must be unit-norm to 1e-8.
CoherenceVector coherence_dictionary(const UnitaryOperator& F, const std::vector<ComplexVec>& atoms);
CoherenceVector coherence_dictionary(const UnitaryOperator& F, const std::vector<RealVec>& atoms);

// Coherence with respect to normalized pairwise differences of the samples
// (differences realize the self-difference of the prior set). All pairs are
// used up to 64 samples; beyond that, differences to the sample mean plus
// 10x(sample count) deterministic random pairs.
CoherenceVector coherence_samples(const UnitaryOperator& F, const std::vector<ComplexVec>& samples);
CoherenceVector coherence_samples(const UnitaryOperator& F, const std::vector<RealVec>& samples);

// Orthonormal Haar wavelet dictionaries.
std::vector<RealVec> haar_atoms_1d(Index n, int levels);
// One representative atom per scale; against a DFT measurement basis the
// coherence of a wavelet is invariant under the circular translations that
// generate the rest of its scale.
std::vector<RealVec> haar_atoms_1d_representatives(Index n, int levels);
std::vector<RealVec> haar_atoms_2d(Index rows, Index cols, int levels);

}  // namespace vds

#endif  // VDS_COHERENCE_HPP

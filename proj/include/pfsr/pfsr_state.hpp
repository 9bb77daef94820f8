// Copyright 2026 The PFSR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfsr/bits.hpp"
#include "pfsr/clifford_tableau.hpp"
#include "pfsr/pauli_string.hpp"
#include "pfsr/rng.hpp"
#include "pfsr/stabilizer_frame.hpp"

namespace pfsr {

using Complex = std::complex<double>;

/// Amplitudes below this magnitude are dropped after merging.
inline constexpr double kZeroAmplitude = 1e-14;

/// One populated basis ket `amplitude * history |0>`.
struct Entry {
    Bits label;
    Complex amplitude;
    PauliString history;
};

/// Coefficient times Pauli, one term of a linear combination.
struct PauliTerm {
    Complex coefficient;
    PauliString pauli;
};

struct MeasurementOutcome {
    int eigenvalue = 1;
    /// Probability of the reported eigenvalue before projection.
    double probability = 1;
    bool forced = false;
};

/// Bookkeeping gathered over one trajectory.
struct TrajectoryLog {
    std::size_t max_entries = 1;
    std::size_t truncation_fallbacks = 0;
    std::size_t truncated_entries = 0;
};

/// Sparse state `sum_s alpha_s P_s |0>` over a stabilizer frame, where |0> is the joint +1 eigenstate
/// of the frame generators and the label `s` records which generators anticommute with `P_s`.
///
/// Entries are presented sorted by label (the sort is deferred until they are read). Gates applied through `apply_gate` update the frame and histories
/// in place; whole tableaux passed to `apply_clifford` are accumulated and applied on the next flush.
class PfsrState {
   public:
    PfsrState() = default;

    static PfsrState init_zero(std::size_t num_qubits);

    std::size_t num_qubits() const { return num_qubits_; }
    const std::vector<PauliString> &frame() const { return frame_; }
    const std::vector<Entry> &entries() const {
        ensure_sorted();
        return entries_;
    }
    std::size_t num_entries() const { return entries_.size(); }
    bool labels_fresh() const { return !pending_.has_value(); }
    const TrajectoryLog &log() const { return log_; }
    TrajectoryLog &log() { return log_; }

    /// Defers `c` until the next flush.
    void apply_clifford(const CliffordTableau &c);
    /// Conjugates the frame and every history by one elementary gate. Labels stay valid.
    void apply_gate(Gate g, std::size_t q0, std::size_t q1 = 0);
    /// Applies any deferred Clifford and recomputes all labels from the histories.
    void flush_relabel();

    /// Applies a Pauli operator: labels permute by the commutation vector, histories pick up `sigma`.
    void apply_pauli(const PauliString &sigma);

    /// Applies `sum_k beta_k sigma_k`, merging images that land on the same label.
    /// Without `renormalize` the operator must preserve the norm (NormError otherwise).
    void apply_pauli_sum(std::span<const PauliTerm> terms, bool renormalize = false);

    /// `<psi|p|psi>` for Hermitian `p`, clamped to [-1, 1].
    double expectation(const PauliString &p);

    /// Projective measurement of Hermitian `p`. The outcome is sampled from `rng` unless `forced` is given.
    MeasurementOutcome measure(const PauliString &p, std::optional<int> forced, Rng &rng);
    /// Measurement with a prescribed outcome.
    MeasurementOutcome measure_forced(const PauliString &p, int outcome);

    /// Drops entries with |alpha| < epsilon and renormalizes. Keeps the largest entry if all fall below.
    /// Returns the number of removed entries.
    std::size_t truncate(double epsilon);

    double norm_squared() const;
    void renormalize();

    /// Dense vector of length 2^n. Qubit 0 is the most significant bit of the index.
    /// Limited to `max_qubits` (default: PFSR_ORACLE_MAX_QUBITS or 12).
    std::vector<Complex> to_dense(std::optional<std::size_t> max_qubits = std::nullopt) const;

    /// "S:" lines for the frame followed by "label<TAB>re,im<TAB>history" lines.
    std::string dump() const;

    /// Solver for the current frame, rebuilt lazily after frame changes.
    const FrameSolver &solver() const;

    friend Complex inner_product(PfsrState &a, PfsrState &b);

   private:
    void mark_unsorted() { sorted_ = entries_.size() <= 1; }
    void ensure_sorted() const;
    void note_size();
    void frame_changed() { solver_.reset(); }
    MeasurementOutcome project(const PauliString &p, int outcome, double probability, bool forced);
    /// Replaces the entries by `raw` with equal labels merged (first occurrence keeps its history).
    void merge_entries(std::vector<Entry> &raw);
    void renormalize_to(double norm_sq);

    std::size_t num_qubits_ = 0;
    std::vector<PauliString> frame_;
    mutable std::vector<Entry> entries_;
    mutable bool sorted_ = true;
    std::optional<CliffordTableau> pending_;
    TrajectoryLog log_;
    mutable std::optional<FrameSolver> solver_;
};

/// `<a|b>`. Both states are flushed first; their frames must agree bit for bit (IncompatibleFrameError).
Complex inner_product(PfsrState &a, PfsrState &b);

/// Computational-basis dense vector of `p|v>`; qubit 0 is the most significant index bit.
std::vector<Complex> apply_pauli_dense(const PauliString &p, std::span<const Complex> v);

/// Reads PFSR_ORACLE_MAX_QUBITS, defaulting to 12.
std::size_t oracle_max_qubits();

}  // namespace pfsr

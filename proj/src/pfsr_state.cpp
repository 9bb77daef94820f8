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

#include "pfsr/pfsr_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_map>

#include "pfsr/errors.hpp"

namespace pfsr {

namespace {

Complex i_pow(unsigned k) {
    switch (k & 3u) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

void require_hermitian(const PauliString &p) {
    if (!p.is_hermitian()) {
        throw PreconditionError("operator " + p.to_string() + " is not Hermitian");
    }
}

}  // namespace

PfsrState PfsrState::init_zero(std::size_t num_qubits) {
    if (num_qubits == 0) {
        throw PreconditionError("a state needs at least one qubit");
    }
    PfsrState s;
    s.num_qubits_ = num_qubits;
    s.frame_.reserve(num_qubits);
    for (std::size_t q = 0; q < num_qubits; q++) {
        s.frame_.push_back(PauliString::single(num_qubits, q, 'Z'));
    }
    s.entries_.push_back({Bits(num_qubits), Complex(1, 0), PauliString(num_qubits)});
    return s;
}

const FrameSolver &PfsrState::solver() const {
    if (!solver_) {
        solver_.emplace(frame_);
    }
    return *solver_;
}

void PfsrState::note_size() { log_.max_entries = std::max(log_.max_entries, entries_.size()); }

void PfsrState::ensure_sorted() const {
    if (!sorted_) {
        std::sort(entries_.begin(), entries_.end(), [](const Entry &a, const Entry &b) { return a.label < b.label; });
        sorted_ = true;
    }
}

void PfsrState::apply_clifford(const CliffordTableau &c) {
    if (c.num_qubits() != num_qubits_) {
        throw DimensionError("tableau and state sizes differ");
    }
    if (pending_) {
        pending_ = compose(c, *pending_);
    } else {
        pending_ = c;
    }
}

void PfsrState::apply_gate(Gate g, std::size_t q0, std::size_t q1) {
    if (q0 >= num_qubits_ || (is_two_qubit(g) && (q1 >= num_qubits_ || q1 == q0))) {
        throw DimensionError("gate qubit out of range");
    }
    if (pending_) {
        pending_->append_gate(g, q0, q1);
        return;
    }
    for (auto &s : frame_) {
        conjugate_by_gate(s, g, q0, q1);
    }
    for (auto &e : entries_) {
        conjugate_by_gate(e.history, g, q0, q1);
    }
    frame_changed();
}

void PfsrState::flush_relabel() {
    if (!pending_) {
        return;
    }
    for (auto &s : frame_) {
        s = pending_->conjugate(s);
    }
    for (auto &e : entries_) {
        e.history = pending_->conjugate(e.history);
        e.label = commutation_vector(frame_, e.history);
    }
    pending_.reset();
    frame_changed();
    mark_unsorted();
}

void PfsrState::apply_pauli(const PauliString &sigma) {
    if (sigma.num_qubits() != num_qubits_) {
        throw DimensionError("Pauli and state sizes differ");
    }
    flush_relabel();
    Bits c = commutation_vector(frame_, sigma);
    for (auto &e : entries_) {
        e.label ^= c;
        e.history.left_multiply(sigma);
    }
    if (c.any()) {
        mark_unsorted();
    }
}

void PfsrState::merge_entries(std::vector<Entry> &raw) {
    std::vector<Entry> out;
    out.reserve(raw.size());
    if (raw.size() <= 1) {
        out = std::move(raw);
    } else {
        // Open addressing over indices into `out`.
        std::size_t cap = 16;
        while (cap < 2 * raw.size()) {
            cap *= 2;
        }
        constexpr std::uint32_t kEmpty = ~std::uint32_t{0};
        std::vector<std::uint32_t> table(cap, kEmpty);
        const FrameSolver &sol = solver();
        for (auto &e : raw) {
            std::uint64_t h = e.label.hash();
            h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
            h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
            std::size_t slot = (h ^ (h >> 31)) & (cap - 1);
            while (table[slot] != kEmpty && out[table[slot]].label != e.label) {
                slot = (slot + 1) & (cap - 1);
            }
            if (table[slot] == kEmpty) {
                table[slot] = static_cast<std::uint32_t>(out.size());
                out.push_back(std::move(e));
            } else {
                Entry &ref = out[table[slot]];
                ref.amplitude += e.amplitude * i_pow(sol.relative_phase(ref.history, e.history));
            }
        }
    }
    std::erase_if(out, [](const Entry &e) { return std::norm(e.amplitude) < kZeroAmplitude * kZeroAmplitude; });
    entries_ = std::move(out);
    mark_unsorted();
    note_size();
}

void PfsrState::apply_pauli_sum(std::span<const PauliTerm> terms, bool renormalize) {
    flush_relabel();
    std::vector<Bits> shifts;
    shifts.reserve(terms.size());
    for (const auto &t : terms) {
        if (t.pauli.num_qubits() != num_qubits_) {
            throw DimensionError("Pauli and state sizes differ");
        }
        shifts.push_back(commutation_vector(frame_, t.pauli));
    }
    const double before = norm_squared();
    // A leading identity term keeps every entry in place (and first in merge order), so it is applied
    // by scaling and only the other terms produce new entries.
    const bool identity_first = terms.front().pauli.is_identity() && terms.front().coefficient != Complex(0, 0);
    std::vector<Entry> raw;
    raw.reserve(entries_.size() * terms.size());
    const std::size_t own = entries_.size();
    std::vector<Complex> base(own);
    for (std::size_t i = 0; i < own; i++) {
        base[i] = entries_[i].amplitude;
    }
    if (identity_first) {
        for (auto &e : entries_) {
            raw.push_back({std::move(e.label), terms.front().coefficient * e.amplitude, std::move(e.history)});
        }
    }
    // `raw` has room for every image, so references into it stay valid while appending.
    for (std::size_t i = 0; i < own; i++) {
        const Entry &e = identity_first ? raw[i] : entries_[i];
        for (std::size_t k = identity_first ? 1 : 0; k < terms.size(); k++) {
            if (terms[k].coefficient == Complex(0, 0)) {
                continue;
            }
            raw.push_back({e.label ^ shifts[k], terms[k].coefficient * base[i], terms[k].pauli * e.history});
        }
    }
    merge_entries(raw);
    const double after = norm_squared();
    if (renormalize) {
        if (after <= 0) {
            throw NormError("linear combination annihilated the state");
        }
        renormalize_to(after);
    } else if (std::abs(after - before) > 1e-8 * std::max(1.0, before)) {
        throw NormError("linear combination is not norm preserving on this state");
    }
}

double PfsrState::norm_squared() const {
    double total = 0;
    for (const auto &e : entries_) {
        total += std::norm(e.amplitude);
    }
    return total;
}

void PfsrState::renormalize_to(double norm_sq) {
    const double scale = 1 / std::sqrt(norm_sq);
    for (auto &e : entries_) {
        e.amplitude *= scale;
    }
}

void PfsrState::renormalize() {
    const double n2 = norm_squared();
    if (n2 <= 0) {
        throw NormError("cannot renormalize an empty state");
    }
    renormalize_to(n2);
}

double PfsrState::expectation(const PauliString &p) {
    if (p.num_qubits() != num_qubits_) {
        throw DimensionError("Pauli and state sizes differ");
    }
    require_hermitian(p);
    flush_relabel();
    Bits c = commutation_vector(frame_, p);
    double value = 0;
    if (!c.any()) {
        FrameDecomposition dec = solver().decompose(p);
        const double sign = dec.phase == 0 ? 1.0 : -1.0;
        for (const auto &e : entries_) {
            value += std::norm(e.amplitude) * (e.label.dot(dec.subset) ? -sign : sign);
        }
    } else {
        const FrameSolver &sol = solver();
        ensure_sorted();
        Complex acc = 0;
        for (const auto &e : entries_) {
            Bits target = e.label ^ c;
            auto it = std::lower_bound(
                entries_.begin(), entries_.end(), target, [](const Entry &x, const Bits &b) { return x.label < b; });
            if (it == entries_.end() || it->label != target) {
                continue;
            }
            PauliString image = p * e.history;
            acc += std::conj(it->amplitude) * e.amplitude * i_pow(sol.relative_phase(it->history, image));
        }
        value = acc.real();
    }
    return std::clamp(value, -1.0, 1.0);
}

MeasurementOutcome PfsrState::measure(const PauliString &p, std::optional<int> forced, Rng &rng) {
    if (p.num_qubits() != num_qubits_) {
        throw DimensionError("Pauli and state sizes differ");
    }
    require_hermitian(p);
    if (forced && *forced != 1 && *forced != -1) {
        throw PreconditionError("forced outcome must be +1 or -1");
    }
    const double plus = std::clamp((1 + expectation(p)) / 2, 0.0, 1.0);
    int outcome;
    if (forced) {
        outcome = *forced;
    } else {
        outcome = uniform01(rng) < plus ? 1 : -1;
    }
    const double prob = outcome == 1 ? plus : 1 - plus;
    if (prob < 1e-12) {
        if (forced) {
            throw ImpossiblePostselectionError(
                "outcome " + std::to_string(outcome) + " of " + p.to_string() + " has probability " + std::to_string(prob));
        }
        throw NormError("sampled an outcome of vanishing probability");
    }
    return project(p, outcome, prob, forced.has_value());
}

MeasurementOutcome PfsrState::measure_forced(const PauliString &p, int outcome) {
    Rng unused(0);
    return measure(p, outcome, unused);
}

MeasurementOutcome PfsrState::project(const PauliString &p, int outcome, double probability, bool forced) {
    Bits c = commutation_vector(frame_, p);
    if (!c.any()) {
        FrameDecomposition dec = solver().decompose(p);
        const int sign = dec.phase == 0 ? 1 : -1;
        std::erase_if(entries_, [&](const Entry &e) { return (e.label.dot(dec.subset) ? -sign : sign) != outcome; });
        renormalize();
        return {outcome, probability, forced};
    }

    const std::size_t n = num_qubits_;
    std::size_t r = 0;
    while (!c[r]) {
        r++;
    }
    std::vector<PauliString> frame = frame_;
    for (std::size_t j = r + 1; j < n; j++) {
        if (c[j]) {
            frame[j] *= frame[r];
        }
    }
    std::vector<PauliString> others;
    others.reserve(n - 1);
    for (std::size_t j = 0; j < n; j++) {
        if (j != r) {
            others.push_back(frame[j]);
        }
    }
    CliffordTableau u = frame_reduction_clifford(others, frame[r], p);
    frame[r] = p;
    frame_ = std::move(frame);
    frame_changed();

    // In the reduced frame the old reference is |0..0>|+> and the new one |0..0>|0>.
    const std::size_t last = n - 1;
    const double h = 1 / std::sqrt(2.0);
    std::vector<Entry> raw;
    raw.reserve(entries_.size());
    for (auto &e : entries_) {
        PauliString reduced = u.conjugate(e.history);
        const char letter = reduced.letter(last);
        Complex coef;
        switch (letter) {
            case 'Z':
                coef = outcome == 1 ? Complex(h, 0) : Complex(-h, 0);
                break;
            case 'Y':
                coef = outcome == 1 ? Complex(0, -h) : Complex(0, h);
                break;
            default:
                coef = Complex(h, 0);
        }
        reduced.set_letter(last, outcome == 1 ? 'I' : 'X');
        PauliString q = u.conjugate_inverse(reduced);
        Bits label = commutation_vector(frame_, q);
        raw.push_back({std::move(label), coef * e.amplitude, std::move(q)});
    }
    merge_entries(raw);
    renormalize();
    return {outcome, probability, forced};
}

std::size_t PfsrState::truncate(double epsilon) {
    flush_relabel();
    if (epsilon <= 0 || entries_.empty()) {
        return 0;
    }
    std::size_t largest = 0;
    for (std::size_t k = 1; k < entries_.size(); k++) {
        if (std::norm(entries_[k].amplitude) > std::norm(entries_[largest].amplitude)) {
            largest = k;
        }
    }
    const std::size_t before = entries_.size();
    std::vector<Entry> kept;
    kept.reserve(before);
    for (std::size_t k = 0; k < before; k++) {
        if (std::norm(entries_[k].amplitude) >= epsilon * epsilon) {
            kept.push_back(std::move(entries_[k]));
        }
    }
    if (kept.empty()) {
        kept.push_back(std::move(entries_[largest]));
        log_.truncation_fallbacks++;
    }
    const std::size_t removed = before - kept.size();
    entries_ = std::move(kept);
    if (removed) {
        log_.truncated_entries += removed;
        renormalize();
    }
    return removed;
}

std::size_t oracle_max_qubits() {
    if (const char *env = std::getenv("PFSR_ORACLE_MAX_QUBITS")) {
        char *end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') {
            return static_cast<std::size_t>(v);
        }
    }
    return 12;
}

std::vector<Complex> apply_pauli_dense(const PauliString &p, std::span<const Complex> v) {
    const std::size_t n = p.num_qubits();
    std::uint64_t xmask = 0;
    std::uint64_t zmask = 0;
    unsigned ys = 0;
    for (std::size_t q = 0; q < n; q++) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        if (p.x()[q]) {
            xmask |= bit;
        }
        if (p.z()[q]) {
            zmask |= bit;
        }
        if (p.x()[q] && p.z()[q]) {
            ys++;
        }
    }
    const Complex global = i_pow(p.phase() + ys);
    std::vector<Complex> out(v.size());
    for (std::uint64_t b = 0; b < v.size(); b++) {
        const double sign = (std::popcount(b & zmask) & 1) ? -1.0 : 1.0;
        out[b ^ xmask] += global * sign * v[b];
    }
    return out;
}

std::vector<Complex> PfsrState::to_dense(std::optional<std::size_t> max_qubits) const {
    const std::size_t limit = max_qubits.value_or(oracle_max_qubits());
    if (num_qubits_ > limit || num_qubits_ >= 63) {
        throw DimensionError("state has " + std::to_string(num_qubits_) + " qubits, dense limit is " + std::to_string(limit));
    }
    if (pending_) {
        PfsrState copy = *this;
        copy.flush_relabel();
        return copy.to_dense(limit);
    }
    const std::size_t dim = std::size_t{1} << num_qubits_;
    std::vector<Complex> ref;
    for (std::size_t seed = 0; seed < dim; seed++) {
        ref.assign(dim, Complex(0, 0));
        ref[seed] = 1;
        for (const auto &s : frame_) {
            auto image = apply_pauli_dense(s, ref);
            for (std::size_t b = 0; b < dim; b++) {
                ref[b] = (ref[b] + image[b]) * 0.5;
            }
        }
        double n2 = 0;
        for (auto a : ref) {
            n2 += std::norm(a);
        }
        if (n2 > 1e-12) {
            for (auto &a : ref) {
                a /= std::sqrt(n2);
            }
            break;
        }
    }
    std::vector<Complex> psi(dim);
    for (const auto &e : entries_) {
        auto image = apply_pauli_dense(e.history, ref);
        for (std::size_t b = 0; b < dim; b++) {
            psi[b] += e.amplitude * image[b];
        }
    }
    double n2 = 0;
    for (auto a : psi) {
        n2 += std::norm(a);
    }
    if (n2 > 0) {
        for (auto &a : psi) {
            a /= std::sqrt(n2);
        }
    }
    return psi;
}

std::string PfsrState::dump() const {
    std::string out;
    for (const auto &s : frame_) {
        out += "S:" + s.to_string() + "\n";
    }
    char buf[96];
    for (const auto &e : entries()) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g", e.amplitude.real(), e.amplitude.imag());
        out += e.label.to_string() + "\t" + buf + "\t" + e.history.to_string() + "\n";
    }
    return out;
}

Complex inner_product(PfsrState &a, PfsrState &b) {
    a.flush_relabel();
    b.flush_relabel();
    if (a.frame_ != b.frame_) {
        throw IncompatibleFrameError("inner product needs identical frames");
    }
    const FrameSolver &sol = a.solver();
    a.ensure_sorted();
    b.ensure_sorted();
    Complex acc = 0;
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() && ib != b.entries_.end()) {
        if (ia->label < ib->label) {
            ++ia;
        } else if (ib->label < ia->label) {
            ++ib;
        } else {
            acc += std::conj(ia->amplitude) * ib->amplitude * i_pow(sol.relative_phase(ia->history, ib->history));
            ++ia;
            ++ib;
        }
    }
    return acc;
}

}  // namespace pfsr

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

#include "pfsr/circuit.hpp"

#include <numeric>

#include "pfsr/errors.hpp"

namespace pfsr {

std::string memory_mode_name(MemoryMode m) {
    switch (m) {
        case MemoryMode::Phenomenological:
            return "phenomenological";
        case MemoryMode::CircuitLayered:
            return "circuit_layered";
        case MemoryMode::CircuitParallel:
            return "circuit_parallel";
    }
    return "?";
}

MemoryMode parse_memory_mode(const std::string &text) {
    for (auto m : {MemoryMode::Phenomenological, MemoryMode::CircuitLayered, MemoryMode::CircuitParallel}) {
        if (memory_mode_name(m) == text) {
            return m;
        }
    }
    throw ConfigError("unknown mode '" + text + "'");
}

std::string basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

Basis parse_basis(const std::string &text) {
    if (text == "Z" || text == "z") {
        return Basis::Z;
    }
    if (text == "X" || text == "x") {
        return Basis::X;
    }
    throw ConfigError("unknown basis '" + text + "'");
}

namespace {

class CircuitBuilder {
   public:
    CircuitBuilder(const RotatedSurfaceCode &code, Basis basis, std::size_t num_qubits, std::size_t rounds) : code_(code) {
        c_.num_qubits = num_qubits;
        c_.num_stabilizers = code.num_stabilizers();
        c_.rounds = rounds;
        for (std::size_t k = 0; k < code.num_stabilizers(); k++) {
            c_.observables.push_back(code.stabilizer_pauli(k, num_qubits));
        }
        c_.observables.push_back(basis == Basis::Z ? code.logical_z(num_qubits) : code.logical_x(num_qubits));
        if (num_qubits > code.num_data()) {
            for (const auto &s : code.stabilizers()) {
                c_.observables.push_back(PauliString::single(num_qubits, s.ancilla, 'Z'));
            }
        }
    }

    void noise(std::size_t q) { push_location({OpKind::Noise, Gate::I, u32(q)}, FaultKind::Channel); }

    void gate(const GateOp &g) {
        c_.ops.push_back({OpKind::Gate, g.gate, u32(g.q0), u32(g.q1)});
        noise(g.q0);
        if (is_two_qubit(g.gate)) {
            noise(g.q1);
        }
    }

    void reset(std::size_t q) {
        c_.ops.push_back({OpKind::Reset, Gate::I, u32(q)});
        push_location({OpKind::ResetFlip, Gate::I, u32(q)}, FaultKind::BitFlip);
    }

    void measure_stabilizer(std::size_t round, std::size_t k, bool noisy) {
        CircuitOp op{OpKind::Measure, Gate::I, 0, 0, u32(k), record(round, k), noisy};
        if (noisy) {
            push_location(op, FaultKind::MeasurementFlip);
        } else {
            c_.ops.push_back(op);
        }
    }

    void measure_ancilla(std::size_t round, std::size_t k) {
        const auto a = code_.stabilizer(k).ancilla;
        noise(a);
        CircuitOp op{OpKind::Measure, Gate::I, u32(a), 0, u32(code_.num_stabilizers() + 1 + k), record(round, k), true};
        push_location(op, FaultKind::MeasurementFlip);
    }

    void ancilla_cycle(std::size_t round, std::size_t k) {
        reset(code_.stabilizer(k).ancilla);
        for (const auto &g : ancilla_cycle_gates(code_, k)) {
            gate(g);
        }
        measure_ancilla(round, k);
    }

    void expand(std::size_t round, const ScheduleStep &step) {
        switch (step.kind) {
            case ScheduleStep::Kind::NoiseOn:
                for (auto q : step.qubits) {
                    noise(q);
                }
                break;
            case ScheduleStep::Kind::MeasureStabilizer:
                measure_stabilizer(round, step.index, true);
                break;
            case ScheduleStep::Kind::AncillaCycle:
                ancilla_cycle(round, step.index);
                break;
            case ScheduleStep::Kind::ResetLayer:
                for (auto q : step.qubits) {
                    reset(q);
                }
                break;
            case ScheduleStep::Kind::GateLayer:
                for (const auto &g : step.gates) {
                    gate(g);
                }
                break;
            case ScheduleStep::Kind::MeasureLayer:
                for (auto q : step.qubits) {
                    measure_ancilla(round, q - code_.num_data());
                }
                break;
        }
    }

    Circuit finish() {
        for (std::size_t k = 0; k < code_.num_stabilizers(); k++) {
            measure_stabilizer(c_.rounds, k, false);
        }
        c_.ops.push_back(
            {OpKind::Measure, Gate::I, 0, 0, u32(code_.num_stabilizers()), static_cast<std::int32_t>(c_.logical_record()), false});
        return std::move(c_);
    }

   private:
    static std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }
    std::int32_t record(std::size_t round, std::size_t k) const {
        return static_cast<std::int32_t>(round * code_.num_stabilizers() + k);
    }
    void push_location(CircuitOp op, FaultKind kind) {
        op.location = static_cast<std::int32_t>(c_.locations.size());
        c_.locations.push_back({c_.ops.size(), kind});
        c_.ops.push_back(op);
    }

    const RotatedSurfaceCode &code_;
    Circuit c_;
};

}  // namespace

Circuit build_phenomenological_circuit(
    const RotatedSurfaceCode &code, Basis basis, std::size_t rounds, std::span<const std::size_t> order) {
    CircuitBuilder b(code, basis, code.num_data(), rounds);
    const auto steps = phenomenological_schedule(code, order);
    for (std::size_t r = 0; r < rounds; r++) {
        for (const auto &step : steps) {
            b.expand(r, step);
        }
    }
    return b.finish();
}

Circuit build_memory_circuit(const RotatedSurfaceCode &code, Basis basis, MemoryMode mode, std::size_t rounds) {
    if (mode == MemoryMode::Phenomenological) {
        return build_phenomenological_circuit(code, basis, rounds, sweep_order(code));
    }
    CircuitBuilder b(code, basis, code.num_qubits(), rounds);
    const auto steps = circuit_level_schedule(code, mode == MemoryMode::CircuitLayered);
    for (std::size_t r = 0; r < rounds; r++) {
        for (const auto &step : steps) {
            b.expand(r, step);
        }
    }
    return b.finish();
}

namespace {

std::vector<char> fault_table(const Circuit &circuit, std::span<const InjectedFault> faults) {
    std::vector<char> table(circuit.locations.size(), 0);
    for (const auto &f : faults) {
        if (f.location >= table.size()) {
            throw PreconditionError("fault location out of range");
        }
        table[f.location] = circuit.locations[f.location].kind == FaultKind::Channel ? f.pauli : 'X';
    }
    return table;
}

}  // namespace

ExecutionResult execute(const Circuit &circuit, PfsrState &state, const ExecutionOptions &options, Rng &rng) {
    if (state.num_qubits() != circuit.num_qubits) {
        throw DimensionError("state and circuit sizes differ");
    }
    ExecutionResult result;
    result.records.assign(circuit.num_records(), 0);
    const bool injected = options.faults != nullptr;
    std::vector<char> faults;
    if (injected) {
        faults = fault_table(circuit, *options.faults);
    }
    const std::size_t n = circuit.num_qubits;
    auto fault_at = [&](const CircuitOp &op) -> char { return injected && op.location >= 0 ? faults[op.location] : 0; };

    for (const auto &op : circuit.ops) {
        switch (op.kind) {
            case OpKind::Gate:
                state.apply_gate(op.gate, op.q0, op.q1);
                break;
            case OpKind::Noise: {
                if (injected) {
                    if (char f = fault_at(op)) {
                        state.apply_pauli(PauliString::single(n, op.q0, f));
                    }
                    break;
                }
                const std::size_t before = state.num_entries();
                apply_noise(state, op.q0, options.channel, rng, result.weight);
                if (options.epsilon > 0 && state.num_entries() > before) {
                    state.truncate(options.epsilon);
                }
                break;
            }
            case OpKind::ResetFlip:
                if (injected ? fault_at(op) != 0 : (options.flip_probability > 0 && bernoulli(rng, options.flip_probability))) {
                    state.apply_pauli(PauliString::single(n, op.q0, 'X'));
                }
                break;
            case OpKind::Reset: {
                const auto z = PauliString::single(n, op.q0, 'Z');
                if (state.measure(z, std::nullopt, rng).eigenvalue == -1) {
                    state.apply_pauli(PauliString::single(n, op.q0, 'X'));
                }
                break;
            }
            case OpKind::Measure: {
                auto out = state.measure(circuit.observables[op.observable], std::nullopt, rng);
                std::uint8_t bit = out.eigenvalue == -1 ? 1 : 0;
                if (op.noisy) {
                    if (injected ? fault_at(op) != 0 : (options.flip_probability > 0 && bernoulli(rng, options.flip_probability))) {
                        bit ^= 1;
                    }
                }
                result.records[op.record] = bit;
                break;
            }
        }
    }
    result.max_entries = state.log().max_entries;
    result.truncation_fallbacks = state.log().truncation_fallbacks;
    return result;
}

std::vector<std::uint8_t> propagate_faults(const Circuit &circuit, std::span<const InjectedFault> faults) {
    const auto table = fault_table(circuit, faults);
    PauliString frame(circuit.num_qubits);
    std::vector<std::uint8_t> records(circuit.num_records(), 0);
    for (const auto &op : circuit.ops) {
        const char f = op.location >= 0 ? table[op.location] : 0;
        switch (op.kind) {
            case OpKind::Gate:
                conjugate_by_gate(frame, op.gate, op.q0, op.q1);
                break;
            case OpKind::Noise:
                if (f) {
                    frame *= PauliString::single(circuit.num_qubits, op.q0, f);
                }
                break;
            case OpKind::ResetFlip:
                if (f) {
                    frame *= PauliString::single(circuit.num_qubits, op.q0, 'X');
                }
                break;
            case OpKind::Reset:
                frame.set_letter(op.q0, 'I');
                break;
            case OpKind::Measure:
                records[op.record] = (anticommutes(frame, circuit.observables[op.observable]) ? 1 : 0) ^ (f ? 1 : 0);
                break;
        }
    }
    return records;
}

PfsrState prepare_logical_state(const RotatedSurfaceCode &code, Basis basis, std::size_t num_qubits) {
    auto state = PfsrState::init_zero(num_qubits);
    if (basis == Basis::X) {
        for (std::size_t q = 0; q < code.num_data(); q++) {
            state.apply_gate(Gate::H, q);
        }
    }
    for (std::size_t k = 0; k < code.num_stabilizers(); k++) {
        state.measure_forced(code.stabilizer_pauli(k, num_qubits), 1);
    }
    state.log() = TrajectoryLog{};
    return state;
}

}  // namespace pfsr

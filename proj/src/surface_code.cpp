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

#include "pfsr/surface_code.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "pfsr/errors.hpp"

namespace pfsr {

char pauli_type_letter(PauliType t) { return t == PauliType::X ? 'X' : 'Z'; }

RotatedSurfaceCode build_code(std::size_t d) {
    if (d < 3 || d % 2 == 0) {
        throw PreconditionError("code distance must be odd and at least 3, got " + std::to_string(d));
    }
    const int di = static_cast<int>(d);
    RotatedSurfaceCode code;
    code.d_ = d;
    for (int i = -1; i < di; i++) {
        for (int j = -1; j < di; j++) {
            const PauliType type = ((i + j) % 2 == 0) ? PauliType::X : PauliType::Z;
            const bool top_bottom = i == -1 || i == di - 1;
            const bool left_right = j == -1 || j == di - 1;
            if (top_bottom && left_right) {
                continue;
            }
            if (top_bottom && type != PauliType::Z) {
                continue;
            }
            if (left_right && type != PauliType::X) {
                continue;
            }
            Stabilizer s{type, {}, {-1, -1, -1, -1}, 0, i, j};
            const int rows[4] = {i, i, i + 1, i + 1};
            const int cols[4] = {j, j + 1, j, j + 1};
            for (int c = 0; c < 4; c++) {
                if (rows[c] >= 0 && rows[c] < di && cols[c] >= 0 && cols[c] < di) {
                    s.corners[c] = rows[c] * di + cols[c];
                    s.support.push_back(static_cast<std::size_t>(s.corners[c]));
                }
            }
            std::sort(s.support.begin(), s.support.end());
            code.stabilizers_.push_back(std::move(s));
        }
    }
    // Plaquettes were generated row-major; stable sort keeps that as the tie break.
    std::stable_sort(code.stabilizers_.begin(), code.stabilizers_.end(), [](const Stabilizer &a, const Stabilizer &b) {
        return a.support.back() < b.support.back();
    });
    for (std::size_t k = 0; k < code.stabilizers_.size(); k++) {
        code.stabilizers_[k].ancilla = d * d + k;
    }
    return code;
}

PauliString RotatedSurfaceCode::stabilizer_pauli(std::size_t k, std::size_t register_size) const {
    const auto &s = stabilizers_.at(k);
    return PauliString::on_support(register_size, s.support, pauli_type_letter(s.type));
}

std::vector<std::size_t> RotatedSurfaceCode::logical_x_support() const {
    std::vector<std::size_t> out(d_);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<std::size_t> RotatedSurfaceCode::logical_z_support() const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < d_; r++) {
        out.push_back(r * d_);
    }
    return out;
}

PauliString RotatedSurfaceCode::logical_x(std::size_t register_size) const {
    return PauliString::on_support(register_size, logical_x_support(), 'X');
}

PauliString RotatedSurfaceCode::logical_z(std::size_t register_size) const {
    return PauliString::on_support(register_size, logical_z_support(), 'Z');
}

std::vector<std::size_t> RotatedSurfaceCode::stabilizers_of_type(PauliType t) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < stabilizers_.size(); k++) {
        if (stabilizers_[k].type == t) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<std::size_t> sweep_order(const RotatedSurfaceCode &code) {
    const std::size_t d = code.distance();
    std::vector<std::size_t> visit(code.num_data());
    std::iota(visit.begin(), visit.end(), 0);
    std::stable_sort(visit.begin(), visit.end(), [d](std::size_t a, std::size_t b) {
        return std::tuple(a % d / 2, a / d, a % d) < std::tuple(b % d / 2, b / d, b % d);
    });
    std::vector<std::size_t> when(code.num_data());
    for (std::size_t t = 0; t < visit.size(); t++) {
        when[visit[t]] = t;
    }
    std::vector<std::size_t> order(code.num_stabilizers());
    std::iota(order.begin(), order.end(), 0);
    auto ready = [&](std::size_t k) {
        std::size_t t = 0;
        for (auto q : code.stabilizer(k).support) {
            t = std::max(t, when[q]);
        }
        return t;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ready(a) < ready(b); });
    return order;
}

std::vector<ScheduleStep> phenomenological_schedule(const RotatedSurfaceCode &code) {
    return phenomenological_schedule(code, sweep_order(code));
}

namespace {

// Emits a NoiseOn step for the not-yet-noised qubits of `support`, if any.
void noise_unvisited(std::vector<ScheduleStep> &steps, std::vector<bool> &noised, const std::vector<std::size_t> &support) {
    ScheduleStep step{ScheduleStep::Kind::NoiseOn, {}, 0, {}};
    for (auto q : support) {
        if (!noised[q]) {
            noised[q] = true;
            step.qubits.push_back(q);
        }
    }
    if (!step.qubits.empty()) {
        steps.push_back(std::move(step));
    }
}

}  // namespace

std::vector<ScheduleStep> phenomenological_schedule(const RotatedSurfaceCode &code, std::span<const std::size_t> order) {
    std::vector<ScheduleStep> steps;
    std::vector<bool> noised(code.num_data(), false);
    for (auto k : order) {
        noise_unvisited(steps, noised, code.stabilizer(k).support);
        steps.push_back({ScheduleStep::Kind::MeasureStabilizer, {}, k, {}});
    }
    std::vector<std::size_t> rest;
    for (std::size_t q = 0; q < code.num_data(); q++) {
        if (!noised[q]) {
            rest.push_back(q);
        }
    }
    noise_unvisited(steps, noised, rest);
    return steps;
}

std::array<Corner, 4> cnot_order(PauliType t) {
    if (t == PauliType::Z) {
        return {kNW, kNE, kSW, kSE};
    }
    return {kNW, kSW, kNE, kSE};
}

std::vector<GateOp> ancilla_cycle_gates(const RotatedSurfaceCode &code, std::size_t k) {
    const auto &s = code.stabilizer(k);
    std::vector<GateOp> gates;
    if (s.type == PauliType::X) {
        gates.push_back({Gate::H, s.ancilla, 0});
    }
    for (auto corner : cnot_order(s.type)) {
        const long q = s.corners[corner];
        if (q < 0) {
            continue;
        }
        if (s.type == PauliType::X) {
            gates.push_back({Gate::CNOT, s.ancilla, static_cast<std::size_t>(q)});
        } else {
            gates.push_back({Gate::CNOT, static_cast<std::size_t>(q), s.ancilla});
        }
    }
    if (s.type == PauliType::X) {
        gates.push_back({Gate::H, s.ancilla, 0});
    }
    return gates;
}

std::vector<ScheduleStep> circuit_level_schedule(const RotatedSurfaceCode &code, bool layered) {
    std::vector<ScheduleStep> steps;
    if (layered) {
        std::vector<bool> noised(code.num_data(), false);
        for (auto k : sweep_order(code)) {
            noise_unvisited(steps, noised, code.stabilizer(k).support);
            steps.push_back({ScheduleStep::Kind::AncillaCycle, {}, k, {}});
        }
        return steps;
    }
    std::vector<std::size_t> data(code.num_data());
    std::iota(data.begin(), data.end(), 0);
    std::vector<std::size_t> ancillas;
    std::vector<GateOp> hadamards;
    for (const auto &s : code.stabilizers()) {
        ancillas.push_back(s.ancilla);
        if (s.type == PauliType::X) {
            hadamards.push_back({Gate::H, s.ancilla, 0});
        }
    }
    steps.push_back({ScheduleStep::Kind::NoiseOn, data, 0, {}});
    steps.push_back({ScheduleStep::Kind::ResetLayer, ancillas, 0, {}});
    steps.push_back({ScheduleStep::Kind::GateLayer, {}, 0, hadamards});
    for (int layer = 0; layer < 4; layer++) {
        ScheduleStep step{ScheduleStep::Kind::GateLayer, {}, 0, {}};
        for (const auto &s : code.stabilizers()) {
            const long q = s.corners[cnot_order(s.type)[layer]];
            if (q < 0) {
                continue;
            }
            if (s.type == PauliType::X) {
                step.gates.push_back({Gate::CNOT, s.ancilla, static_cast<std::size_t>(q)});
            } else {
                step.gates.push_back({Gate::CNOT, static_cast<std::size_t>(q), s.ancilla});
            }
        }
        steps.push_back(std::move(step));
    }
    steps.push_back({ScheduleStep::Kind::GateLayer, {}, 0, hadamards});
    steps.push_back({ScheduleStep::Kind::MeasureLayer, ancillas, 0, {}});
    return steps;
}

void check_phenomenological_round(const RotatedSurfaceCode &code, std::span<const ScheduleStep> steps) {
    std::vector<int> noise_count(code.num_data(), 0);
    std::vector<int> measure_count(code.num_stabilizers(), 0);
    for (const auto &step : steps) {
        if (step.kind == ScheduleStep::Kind::NoiseOn) {
            for (auto q : step.qubits) {
                noise_count.at(q)++;
            }
        } else if (step.kind == ScheduleStep::Kind::MeasureStabilizer) {
            measure_count.at(step.index)++;
            for (auto q : code.stabilizer(step.index).support) {
                if (noise_count[q] != 1) {
                    throw InternalConsistencyError(
                        "stabilizer " + std::to_string(step.index) + " measured before qubit " + std::to_string(q) + " was noised");
                }
            }
        } else {
            throw InternalConsistencyError("unexpected step kind in a phenomenological round");
        }
    }
    for (std::size_t q = 0; q < noise_count.size(); q++) {
        if (noise_count[q] != 1) {
            throw InternalConsistencyError("data qubit " + std::to_string(q) + " noised " + std::to_string(noise_count[q]) + " times");
        }
    }
    for (std::size_t k = 0; k < measure_count.size(); k++) {
        if (measure_count[k] != 1) {
            throw InternalConsistencyError("stabilizer " + std::to_string(k) + " measured " + std::to_string(measure_count[k]) + " times");
        }
    }
}

std::string dump_schedule(const RotatedSurfaceCode &code, std::span<const ScheduleStep> steps) {
    std::string out;
    auto qubit_list = [](const std::vector<std::size_t> &qs) {
        std::string s;
        for (auto q : qs) {
            s += " " + std::to_string(q);
        }
        return s;
    };
    for (const auto &step : steps) {
        switch (step.kind) {
            case ScheduleStep::Kind::NoiseOn:
                out += "noise" + qubit_list(step.qubits);
                break;
            case ScheduleStep::Kind::MeasureStabilizer: {
                const auto &s = code.stabilizer(step.index);
                out += "measure " + std::to_string(step.index) + " ";
                for (auto q : s.support) {
                    out += pauli_type_letter(s.type) + std::to_string(q);
                }
                break;
            }
            case ScheduleStep::Kind::AncillaCycle:
                out += "cycle " + std::to_string(step.index);
                break;
            case ScheduleStep::Kind::ResetLayer:
                out += "reset" + qubit_list(step.qubits);
                break;
            case ScheduleStep::Kind::GateLayer:
                out += "gates";
                for (const auto &g : step.gates) {
                    out += " " + gate_name(g.gate) + ":" + std::to_string(g.q0);
                    if (is_two_qubit(g.gate)) {
                        out += ">" + std::to_string(g.q1);
                    }
                }
                break;
            case ScheduleStep::Kind::MeasureLayer:
                out += "measure_z" + qubit_list(step.qubits);
                break;
        }
        out += "\n";
    }
    return out;
}

}  // namespace pfsr

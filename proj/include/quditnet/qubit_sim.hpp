// Copyright 2026 The quditnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Qubit realization of the qudit layer.
 *
 * A d-dimensional layer runs on d-1 qubits. Gate k rotates qubit k by
 * R_y(pi - 2 theta_k) when qubits 1..k-1 are all |0>. Qubit q is bit
 * (d-1-q) of a basis index, so qubit d-1 is the least significant bit and
 * qudit entry j (j >= 1) lands on index 2^(j-1). Index 0 is entry 0; every
 * other index is an error outcome.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "quditnet/qudit_core.hpp"

namespace quditnet::qubit {

inline constexpr std::size_t kMaxSimulatedDimension = 24;

struct RyGate {
  std::size_t target = 1;  // 1-based qubit index
  double angle = 0.0;
  std::vector<std::size_t> controls;  // active on |0>
};

struct QubitCircuit {
  std::size_t qubits = 0;
  std::vector<RyGate> gates;

  void validate() const;
};

struct Statevector {
  std::size_t qubits = 0;
  std::vector<double> amplitudes;

  double norm() const;
};

/// Basis index bit that holds qubit q.
std::size_t qubit_bit(std::size_t qubits, std::size_t q);

QubitCircuit compile(const qudit::ThetaVector& theta);
Statevector simulate(const QubitCircuit& circuit);

/// Qudit entry for a basis index, or nullopt when the index is not one-hot.
std::optional<std::size_t> classify_outcome(std::size_t index, std::size_t d);
std::vector<std::optional<std::size_t>> outcome_map(std::size_t d);

/// Formats an index as a (d-1)-bit string, most significant bit first.
std::string outcome_bits(std::size_t index, std::size_t d);

struct MeasurementDistribution {
  std::vector<double> entries;  // size d
  double invalid = 0.0;
};

MeasurementDistribution measurement_distribution(const Statevector& sv, std::size_t d);

struct GateCountReport {
  std::vector<std::size_t> control_arities;
  std::size_t total_controls = 0;
  /// Each k-controlled rotation counted as 2k+1 elementary gates, the cost
  /// of a linear-depth multi-control decomposition.
  std::size_t elementary_estimate = 0;
};

GateCountReport gate_count_report(const QubitCircuit& circuit);

struct QuadraticFit {
  double a = 0.0;  // coefficient of x^2
  double b = 0.0;
  double c = 0.0;
  double max_residual = 0.0;
};

/// Least-squares y = a x^2 + b x + c.
QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

std::string circuit_to_json(const QubitCircuit& circuit);

}  // namespace quditnet::qubit

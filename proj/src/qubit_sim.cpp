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

#include "quditnet/qubit_sim.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <json.hpp>
#include <numbers>

#include "quditnet/error.hpp"

namespace quditnet::qubit {

void QubitCircuit::validate() const {
  if (qubits == 0 || qubits >= 8 * sizeof(std::size_t)) {
    throw Error(ErrorCode::InvalidArgument, "circuit needs between 1 and 63 qubits");
  }
  for (const RyGate& g : gates) {
    if (g.target < 1 || g.target > qubits) throw Error(ErrorCode::InvalidArgument, "gate target out of range");
    for (std::size_t c : g.controls) {
      if (c < 1 || c > qubits) throw Error(ErrorCode::InvalidArgument, "gate control out of range");
      if (c == g.target) throw Error(ErrorCode::InvalidArgument, "gate controls its own target");
    }
    if (!std::isfinite(g.angle)) throw Error(ErrorCode::NonFinite, "gate angle is not finite");
  }
}

double Statevector::norm() const {
  double s = 0.0;
  for (double a : amplitudes) s += a * a;
  return std::sqrt(s);
}

std::size_t qubit_bit(std::size_t qubits, std::size_t q) { return qubits - q; }

QubitCircuit compile(const qudit::ThetaVector& theta) {
  const std::size_t d = theta.dimension();
  if (d > kMaxSimulatedDimension) {
    throw Error(ErrorCode::DimensionTooLarge,
                "d = " + std::to_string(d) + " exceeds the simulation cap of " + std::to_string(kMaxSimulatedDimension));
  }
  QubitCircuit circuit;
  circuit.qubits = d - 1;
  for (std::size_t k = 1; k < d; ++k) {
    RyGate g;
    g.target = k;
    g.angle = std::numbers::pi - 2.0 * theta.angles()[k - 1];
    for (std::size_t c = 1; c < k; ++c) g.controls.push_back(c);
    circuit.gates.push_back(std::move(g));
  }
  return circuit;
}

Statevector simulate(const QubitCircuit& circuit) {
  circuit.validate();
  if (circuit.qubits + 1 > kMaxSimulatedDimension) {
    throw Error(ErrorCode::DimensionTooLarge, "too many qubits to simulate");
  }
  const std::size_t n = circuit.qubits;
  Statevector sv;
  sv.qubits = n;
  sv.amplitudes.assign(std::size_t{1} << n, 0.0);
  sv.amplitudes[0] = 1.0;

  for (const RyGate& g : circuit.gates) {
    const std::size_t tbit = std::size_t{1} << qubit_bit(n, g.target);
    std::size_t cmask = 0;
    for (std::size_t c : g.controls) cmask |= std::size_t{1} << qubit_bit(n, c);
    const double co = std::cos(0.5 * g.angle);
    const double si = std::sin(0.5 * g.angle);
    for (std::size_t i = 0; i < sv.amplitudes.size(); ++i) {
      if ((i & tbit) != 0 || (i & cmask) != 0) continue;
      const double a0 = sv.amplitudes[i];
      const double a1 = sv.amplitudes[i | tbit];
      sv.amplitudes[i] = co * a0 - si * a1;
      sv.amplitudes[i | tbit] = si * a0 + co * a1;
    }
  }
  return sv;
}

std::optional<std::size_t> classify_outcome(std::size_t index, std::size_t d) {
  if (d < 2 || index >= (std::size_t{1} << (d - 1))) return std::nullopt;
  if (index == 0) return 0;
  if ((index & (index - 1)) != 0) return std::nullopt;
  return static_cast<std::size_t>(std::countr_zero(index)) + 1;
}

std::vector<std::optional<std::size_t>> outcome_map(std::size_t d) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "outcome map needs d >= 2");
  if (d > kMaxSimulatedDimension) throw Error(ErrorCode::DimensionTooLarge, "outcome map too large");
  std::vector<std::optional<std::size_t>> out(std::size_t{1} << (d - 1));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = classify_outcome(i, d);
  return out;
}

std::string outcome_bits(std::size_t index, std::size_t d) {
  std::string s(d - 1, '0');
  for (std::size_t b = 0; b + 1 < d; ++b) {
    if ((index >> b) & 1U) s[d - 2 - b] = '1';
  }
  return s;
}

MeasurementDistribution measurement_distribution(const Statevector& sv, std::size_t d) {
  if (sv.qubits + 1 != d) throw Error(ErrorCode::DimensionMismatch, "statevector does not hold d-1 qubits");
  MeasurementDistribution out;
  out.entries.assign(d, 0.0);
  for (std::size_t i = 0; i < sv.amplitudes.size(); ++i) {
    const double p = sv.amplitudes[i] * sv.amplitudes[i];
    if (auto entry = classify_outcome(i, d)) {
      out.entries[*entry] += p;
    } else {
      out.invalid += p;
    }
  }
  return out;
}

GateCountReport gate_count_report(const QubitCircuit& circuit) {
  circuit.validate();
  GateCountReport r;
  for (const RyGate& g : circuit.gates) {
    r.control_arities.push_back(g.controls.size());
    r.total_controls += g.controls.size();
    r.elementary_estimate += 2 * g.controls.size() + 1;
  }
  return r;
}

QuadraticFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "quadratic fit needs at least three matching points");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd V(n, 3);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    V(i, 0) = xi * xi;
    V(i, 1) = xi;
    V(i, 2) = 1.0;
    Y(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d coef = V.colPivHouseholderQr().solve(Y);
  QuadraticFit fit{coef(0), coef(1), coef(2), 0.0};
  fit.max_residual = (V * coef - Y).cwiseAbs().maxCoeff();
  return fit;
}

std::string circuit_to_json(const QubitCircuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const RyGate& g : circuit.gates) {
    gates.push_back({{"target", g.target}, {"angle", g.angle}, {"controls", g.controls}});
  }
  nlohmann::json j{{"qubits", circuit.qubits}, {"control_state", 0}, {"gates", gates}};
  return j.dump(2) + "\n";
}

}  // namespace quditnet::qubit

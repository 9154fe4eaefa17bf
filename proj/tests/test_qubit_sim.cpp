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

#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <numbers>
#include <random>

#include "quditnet/error.hpp"
#include "quditnet/qubit_sim.hpp"

using namespace quditnet;
using namespace quditnet::qubit;
using std::numbers::pi;

namespace {

std::vector<double> random_angles(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.01, pi - 0.01);
  std::vector<double> a(d - 1);
  for (double& v : a) v = u(rng);
  return a;
}

// Dense 2^n x 2^n matrix of a controlled R_y, applied by matrix-vector
// product: an oracle independent of the in-place pair updates.
Eigen::VectorXd apply_dense(const RyGate& g, std::size_t n, const Eigen::VectorXd& v) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  const std::size_t t = std::size_t{1} << (n - g.target);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto c = static_cast<std::size_t>(col);
    bool active = true;
    for (std::size_t q : g.controls) active = active && ((c >> (n - q)) & 1U) == 0;
    if (!active) {
      m(col, col) = 1.0;
      continue;
    }
    const double co = std::cos(g.angle / 2);
    const double si = std::sin(g.angle / 2);
    const auto zero = static_cast<Eigen::Index>(c & ~t);
    const auto one = static_cast<Eigen::Index>(c | t);
    if ((c & t) == 0) {
      m(zero, col) = co;
      m(one, col) = si;
    } else {
      m(zero, col) = -si;
      m(one, col) = co;
    }
  }
  return m * v;
}

}  // namespace

TEST_CASE("compiled gates") {
  const QubitCircuit one = compile(qudit::ThetaVector({0.4}));
  REQUIRE(one.gates.size() == 1);
  CHECK(one.gates[0].controls.empty());
  CHECK(one.gates[0].angle == doctest::Approx(pi - 0.8));

  const QubitCircuit five = compile(qudit::ThetaVector({0.1, 0.2, 0.3, 0.4}));
  CHECK(five.qubits == 4);
  REQUIRE(five.gates.size() == 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    CHECK(five.gates[k - 1].target == k);
    CHECK(five.gates[k - 1].controls.size() == k - 1);
    CHECK(five.gates[k - 1].angle == doctest::Approx(pi - 0.2 * static_cast<double>(k)));
  }
  CHECK_THROWS_AS(compile(qudit::ThetaVector(std::vector<double>(24, 0.3))), Error);
}

TEST_CASE("single-qubit states") {
  const Statevector id = simulate(compile(qudit::ThetaVector({pi / 2})));
  CHECK(id.amplitudes[0] == doctest::Approx(1.0));
  CHECK(std::abs(id.amplitudes[1]) < 1e-15);
  const Statevector s = simulate(compile(qudit::ThetaVector({pi / 3})));
  CHECK(s.amplitudes[0] == doctest::Approx(std::sin(pi / 3)));
  CHECK(s.amplitudes[1] == doctest::Approx(0.5));
}

TEST_CASE("three-level hand case fixes the bit order") {
  const double t1 = 0.7, t2 = 1.9;
  const Statevector sv = simulate(compile(qudit::ThetaVector({t1, t2})));
  CHECK(sv.amplitudes[0] == doctest::Approx(std::sin(t1) * std::sin(t2)));  // |00>
  CHECK(sv.amplitudes[1] == doctest::Approx(std::sin(t1) * std::cos(t2)));  // |01>, entry 1
  CHECK(sv.amplitudes[2] == doctest::Approx(std::cos(t1)));                 // |10>, entry 2
  CHECK(std::abs(sv.amplitudes[3]) < 1e-15);
}

TEST_CASE("five-level amplitudes match the closed form") {
  std::mt19937_64 rng(6);
  const qudit::ThetaVector theta(random_angles(5, rng));
  const Statevector sv = simulate(compile(theta));
  const auto amp = qudit::output_state_closed_form(theta).amplitudes;
  CHECK(std::abs(sv.amplitudes[0] - amp[0]) < 1e-12);
  std::size_t zeros = 0;
  for (std::size_t i = 1; i < 16; ++i) {
    if (auto entry = classify_outcome(i, 5)) {
      CHECK(std::abs(sv.amplitudes[i] - amp[*entry]) < 1e-12);
    } else {
      CHECK(std::abs(sv.amplitudes[i]) < 1e-12);
      ++zeros;
    }
  }
  CHECK(zeros == 11);
}

TEST_CASE("simulation agrees with dense gate matrices") {
  std::mt19937_64 rng(10);
  for (std::size_t d = 2; d <= 7; ++d) {
    const QubitCircuit c = compile(qudit::ThetaVector(random_angles(d, rng)));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(std::size_t{1} << c.qubits));
    v(0) = 1.0;
    for (const auto& g : c.gates) v = apply_dense(g, c.qubits, v);
    const Statevector sv = simulate(c);
    for (Eigen::Index i = 0; i < v.size(); ++i) CHECK(std::abs(sv.amplitudes[static_cast<std::size_t>(i)] - v(i)) < 1e-14);
  }
}

TEST_CASE("outcome map") {
  CHECK(classify_outcome(0b0000, 5) == 0u);
  CHECK(classify_outcome(0b0001, 5) == 1u);
  CHECK(classify_outcome(0b1000, 5) == 4u);
  CHECK_FALSE(classify_outcome(0b0011, 5).has_value());
  CHECK(outcome_bits(0b1000, 5) == "1000");
  const auto two = outcome_map(2);
  CHECK(two.size() == 2);
  CHECK(two[0] == 0u);
  CHECK(two[1] == 1u);
  const auto five = outcome_map(5);
  std::size_t invalid = 0;
  for (const auto& e : five) invalid += e.has_value() ? 0 : 1;
  CHECK(invalid == 11);
}

TEST_CASE("qubit and qudit probabilities agree") {
  std::mt19937_64 rng(14);
  for (std::size_t d = 2; d <= 12; ++d) {
    for (int t = 0; t < 100; ++t) {
      const qudit::ThetaVector theta(random_angles(d, rng));
      const Statevector sv = simulate(compile(theta));
      CHECK(std::abs(sv.norm() - 1.0) <= 1e-12);
      const auto dist = measurement_distribution(sv, d);
      const auto probs = qudit::outcome_probabilities(theta).probs;
      for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(dist.entries[j] - probs[j]) <= 1e-12);
      CHECK(dist.invalid < 1e-12);
    }
  }
}

TEST_CASE("corrupted state shows invalid mass") {
  std::mt19937_64 rng(15);
  Statevector sv = simulate(compile(qudit::ThetaVector(random_angles(5, rng))));
  sv.amplitudes[3] = 0.1;
  CHECK(measurement_distribution(sv, 5).invalid == doctest::Approx(0.01));
}

TEST_CASE("control arity totals") {
  CHECK(gate_count_report(compile(qudit::ThetaVector({0.3}))).total_controls == 0);
  const auto five = gate_count_report(compile(qudit::ThetaVector({0.1, 0.2, 0.3, 0.4})));
  CHECK(five.control_arities == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(five.total_controls == 6);
  std::vector<double> ds, sums;
  for (std::size_t d = 2; d <= 12; ++d) {
    const auto r = gate_count_report(compile(qudit::ThetaVector(std::vector<double>(d - 1, 0.5))));
    CHECK(r.total_controls == (d - 1) * (d - 2) / 2);
    ds.push_back(static_cast<double>(d));
    sums.push_back(static_cast<double>(r.total_controls));
  }
  const QuadraticFit fit = fit_quadratic(ds, sums);
  CHECK(fit.a == doctest::Approx(0.5));
  CHECK(fit.a > 0.0);
}

TEST_CASE("circuit json") {
  const auto j = nlohmann::json::parse(circuit_to_json(compile(qudit::ThetaVector({0.1, 0.2, 0.3}))));
  CHECK(j["qubits"] == 3);
  REQUIRE(j["gates"].size() == 3);
  CHECK(j["gates"][2]["target"] == 3);
  CHECK(j["gates"][2]["controls"] == nlohmann::json::array({1, 2}));
}

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

#include "quditnet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "quditnet/poly_features.hpp"
#include "quditnet/qubit_sim.hpp"
#include "quditnet/qudit_core.hpp"

namespace quditnet::verify {

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.name;
  }
  return {};
}

namespace {

constexpr double kAngleMargin = 0.01;

qudit::ThetaVector random_theta(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(kAngleMargin, std::numbers::pi - kAngleMargin);
  std::vector<double> a(d - 1);
  for (double& v : a) v = angle(rng);
  return qudit::ThetaVector(std::move(a));
}

CheckResult finish(CheckResult r) {
  r.passed = r.passed && r.max_error <= r.tolerance;
  return r;
}

CheckResult check_normalization(const VerifyOptions& opt, std::mt19937_64& rng) {
  CheckResult r{"normalization", true, 0, 0.0, 1e-12, {}};
  const std::size_t span = opt.max_dimension - 1;
  for (std::size_t i = 0; i < opt.normalization_samples; ++i) {
    const std::size_t d = 2 + i % span;
    const qudit::ThetaVector theta = random_theta(d, rng);
    const double aux_sum = qudit::normalization_sum(qudit::compute_aux(theta));
    const auto probs = qudit::outcome_probabilities(theta).probs;
    double prob_sum = 0.0;
    for (double p : probs) prob_sum += p;
    r.max_error = std::max({r.max_error, std::abs(aux_sum - 1.0), std::abs(prob_sum - 1.0)});
    ++r.cases;
  }
  r.detail = "d in [2, " + std::to_string(opt.max_dimension) + "]";
  return finish(r);
}

void dense_checks(const VerifyOptions& opt, std::mt19937_64& rng, CheckResult& cayley, CheckResult& orth,
                  CheckResult& bcol) {
  std::size_t skipped = 0;
  for (std::size_t d = 2; d <= opt.max_dimension; ++d) {
    for (std::size_t s = 0; s < opt.dense_samples_per_dimension; ++s) {
      const qudit::ThetaVector theta = random_theta(d, rng);
      if (std::abs(qudit::compute_aux(theta).s(1) - 1.0) <= qudit::kDegeneracyThreshold) {
        ++skipped;
        continue;
      }
      const Eigen::MatrixXd A = qudit::build_skew_matrix(theta, opt.denominator_offset);
      const Eigen::MatrixXd U = qudit::cayley_unitary(A);
      const auto state = qudit::output_state_closed_form(theta).amplitudes;
      double err = 0.0;
      for (std::size_t l = 0; l < d; ++l) err = std::max(err, std::abs(U(static_cast<Eigen::Index>(l), 0) - state[l]));
      cayley.max_error = std::max(cayley.max_error, err);
      orth.max_error = std::max(orth.max_error, qudit::orthogonality_defect(U));

      const auto closed = qudit::b_column_closed_form(theta);
      const auto dense = qudit::b_column_dense(A);
      double berr = 0.0;
      for (std::size_t l = 0; l < d; ++l) berr = std::max(berr, std::abs(closed[l] - dense[l]));
      bcol.max_error = std::max(bcol.max_error, berr);
      ++cayley.cases;
      ++orth.cases;
      ++bcol.cases;
    }
  }
  if (skipped > 0) cayley.detail = std::to_string(skipped) + " degenerate draws skipped";
}

CheckResult check_qubit(const VerifyOptions& opt, std::mt19937_64& rng) {
  CheckResult r{"qubit_equivalence", true, 0, 0.0, 1e-12, {}};
  double invalid = 0.0;
  double norm_err = 0.0;
  for (std::size_t d = 2; d <= opt.qubit_max_dimension; ++d) {
    for (std::size_t s = 0; s < opt.qubit_samples_per_dimension; ++s) {
      const qudit::ThetaVector theta = random_theta(d, rng);
      const qubit::Statevector sv = qubit::simulate(qubit::compile(theta));
      const auto dist = qubit::measurement_distribution(sv, d);
      const auto probs = qudit::outcome_probabilities(theta).probs;
      for (std::size_t j = 0; j < d; ++j) r.max_error = std::max(r.max_error, std::abs(dist.entries[j] - probs[j]));
      invalid = std::max(invalid, dist.invalid);
      norm_err = std::max(norm_err, std::abs(sv.norm() - 1.0));
      ++r.cases;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max invalid mass %.3g, max norm error %.3g", invalid, norm_err);
  r.detail = buf;
  r.passed = invalid < 1e-12 && norm_err <= 1e-12;
  return finish(r);
}

CheckResult check_gate_counts(const VerifyOptions& opt) {
  CheckResult r{"gate_counts", true, 0, 0.0, 0.0, {}};
  std::vector<double> ds;
  std::vector<double> sums;
  for (std::size_t d = 2; d <= opt.qubit_max_dimension; ++d) {
    const qudit::ThetaVector theta(std::vector<double>(d - 1, 1.0));
    const auto report = qubit::gate_count_report(qubit::compile(theta));
    const std::size_t expected = (d - 1) * (d - 2) / 2;
    if (report.total_controls != expected || report.control_arities.size() != d - 1) r.passed = false;
    ds.push_back(static_cast<double>(d));
    sums.push_back(static_cast<double>(report.total_controls));
    ++r.cases;
  }
  const auto fit = qubit::fit_quadratic(ds, sums);
  char buf[96];
  std::snprintf(buf, sizeof buf, "control sum ~ %.4g d^2 %+.4g d %+.4g", fit.a, fit.b, fit.c);
  r.detail = buf;
  if (!(fit.a > 0.0) || fit.max_residual > 1e-9) r.passed = false;
  return r;
}

CheckResult check_feature_counts() {
  struct Row {
    std::size_t p, L, weights;
  };
  static constexpr Row kTable[] = {
      {10, 1, 11},  {10, 2, 66},  {10, 3, 286},  {20, 1, 21},  {20, 2, 231}, {20, 3, 1771},
      {30, 1, 31},  {30, 2, 496}, {30, 3, 5456}, {40, 1, 41},  {40, 2, 861}, {40, 3, 12341},
  };
  CheckResult r{"feature_counts", true, 0, 0.0, 0.0, {}};
  std::ostringstream detail;
  for (const Row& row : kTable) {
    const std::size_t got = feature_count(FeatureMap{row.p, row.L, FeatureVariant::Multivariable});
    if (got != row.weights) r.passed = false;
    detail << (r.cases ? " " : "") << "(" << row.p << "," << row.L << ")=" << got
           << (got == row.weights ? "" : "!=" + std::to_string(row.weights));
    ++r.cases;
  }
  r.detail = detail.str();
  return r;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  std::mt19937_64 rng(options.seed);
  report.checks.push_back(check_normalization(options, rng));

  CheckResult cayley{"cayley_equivalence", true, 0, 0.0, 1e-10, {}};
  CheckResult orth{"orthogonality", true, 0, 0.0, 1e-10, {}};
  CheckResult bcol{"b_column", true, 0, 0.0, 1e-10, {}};
  dense_checks(options, rng, cayley, orth, bcol);
  report.checks.push_back(finish(cayley));
  report.checks.push_back(finish(orth));
  report.checks.push_back(finish(bcol));

  report.checks.push_back(check_qubit(options, rng));
  report.checks.push_back(check_gate_counts(options));
  report.checks.push_back(check_feature_counts());
  return report;
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-4s %-20s cases=%-6zu max_error=%-10.3g tol=%.0e", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.cases, c.max_error, c.tolerance);
    out << buf;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  return out.str();
}

}  // namespace quditnet::verify

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

// Reference solver for small SVM problems: accelerated projected gradient on
// the dual
//   min 1/2 a'Qa - sum(a)   s.t. 0 <= a_i <= C, sum y_i a_i = 0,
// with an exact line search over the bias for the recovered primal point.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

namespace quditnet::testing {

struct OracleResult {
  Eigen::VectorXd w;
  double b = 0.0;
  double primal = 0.0;  // upper bound on the optimum
  double dual = 0.0;    // lower bound on the optimum
};

inline double svm_primal(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C, const Eigen::VectorXd& w,
                         double b) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) loss += std::max(0.0, 1.0 - y(i) * (X.row(i).dot(w) + b));
  return 0.5 * w.squaredNorm() + C * loss;
}

// Euclidean projection onto the box intersected with the hyperplane, by
// bisection on the hyperplane multiplier.
inline Eigen::VectorXd project_dual(const Eigen::VectorXd& v, const Eigen::VectorXd& y, double C) {
  auto clipped = [&](double tau) {
    Eigen::VectorXd a(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) a(i) = std::clamp(v(i) - tau * y(i), 0.0, C);
    return a;
  };
  double lo = -(v.cwiseAbs().maxCoeff() + C + 1.0);
  double hi = -lo;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (y.dot(clipped(mid)) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clipped(0.5 * (lo + hi));
}

inline double best_bias(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C, const Eigen::VectorXd& w) {
  // The hinge sum is piecewise linear in b; its minimum sits at a kink.
  double best_b = 0.0;
  double best = svm_primal(X, y, C, w, 0.0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double b = y(i) - X.row(i).dot(w);
    const double v = svm_primal(X, y, C, w, b);
    if (v < best) {
      best = v;
      best_b = b;
    }
  }
  return best_b;
}

/// X holds only the non-constant columns.
inline OracleResult solve_svm_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double C,
                                     int iterations = 20000) {
  const Eigen::MatrixXd Z = y.asDiagonal() * X;
  const Eigen::MatrixXd Q = Z * Z.transpose();
  const double L = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues().maxCoeff();
  const double step = 1.0 / std::max(L, 1e-12);
  const Eigen::Index n = X.rows();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  auto dual_obj = [&](const Eigen::VectorXd& a) { return 0.5 * a.dot(Q * a) - a.sum(); };
  Eigen::VectorXd a = project_dual(Eigen::VectorXd::Zero(n), y, C);
  Eigen::VectorXd z = a;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd next = project_dual(z - step * (Q * z - ones), y, C);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (dual_obj(next) > dual_obj(a)) {
      // Restart the momentum when the objective goes up.
      z = a;
      t = 1.0;
      continue;
    }
    z = next + ((t - 1.0) / t_next) * (next - a);
    a = next;
    t = t_next;
  }
  OracleResult r;
  r.w = Z.transpose() * a;
  r.b = best_bias(X, y, C, r.w);
  r.primal = svm_primal(X, y, C, r.w, r.b);
  r.dual = -dual_obj(a);
  return r;
}

}  // namespace quditnet::testing

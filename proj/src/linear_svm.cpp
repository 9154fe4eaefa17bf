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

#include "quditnet/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "quditnet/error.hpp"

namespace quditnet::svm {

std::string_view to_string(Loss loss) noexcept { return loss == Loss::Hinge ? "hinge" : "squared_hinge"; }

Loss parse_loss(std::string_view text) {
  if (text == "hinge") return Loss::Hinge;
  if (text == "squared_hinge") return Loss::SquaredHinge;
  throw Error(ErrorCode::InvalidArgument, "unknown loss '" + std::string(text) + "'");
}

void SolverConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw Error(ErrorCode::InvalidArgument, "C must be positive");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (max_epochs < 1) throw Error(ErrorCode::InvalidArgument, "max_epochs must be >= 1");
  if (!(positive_weight > 0.0) || !(negative_weight > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "class weights must be positive");
  }
}

SvmProblem::SvmProblem(const Matrix& features, std::vector<std::int8_t> labels, SolverConfig config,
                       std::vector<std::size_t> rows)
    : features_(&features), labels_(std::move(labels)), config_(config), rows_(std::move(rows)) {
  config_.validate();
  if (features.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "feature matrix has no columns");
  const std::size_t expected = rows_.empty() ? static_cast<std::size_t>(features.rows()) : rows_.size();
  if (labels_.size() != expected) {
    throw Error(ErrorCode::DimensionMismatch, "label count does not match the selected rows");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (auto y : labels_) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw Error(ErrorCode::InvalidArgument, "labels must be -1 or +1");
  }
  if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClass, "both labels must be present");
  for (std::size_t r : rows_) {
    if (r >= static_cast<std::size_t>(features.rows())) {
      throw Error(ErrorCode::DimensionMismatch, "row index out of range");
    }
  }
  for (std::size_t k = 0; k < size(); ++k) {
    if (!features.row(static_cast<Eigen::Index>(row(k))).allFinite()) {
      throw Error(ErrorCode::NonFinite, "feature row " + std::to_string(row(k)) + " is not finite");
    }
  }
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += a[j] * b[j];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) y[j] += alpha * x[j];
}

double loss_term(Loss loss, double margin_violation) {
  const double t = std::max(0.0, margin_violation);
  return loss == Loss::Hinge ? t : t * t;
}

// Dual coordinate descent state shared by all proximal stages.
class DualSolver {
 public:
  explicit DualSolver(const SvmProblem& problem)
      : problem_(problem),
        cfg_(problem.config()),
        n_(problem.size()),
        dim_(static_cast<std::size_t>(problem.features().cols()) - 1),
        alpha_(n_, 0.0),
        upper_(n_),
        diag_(n_),
        qd_(n_),
        w_(dim_, 0.0),
        rng_(cfg_.seed) {
    double mean_sq_norm = 0.0;
    for (std::size_t i = 0; i < n_; ++i) mean_sq_norm += dot(x(i), x(i), dim_);
    mean_sq_norm /= static_cast<double>(n_);
    // Bias feature on the same scale as the data keeps the bias coordinate
    // as well conditioned as the others.
    bias_feature_ = std::max(1.0, std::sqrt(mean_sq_norm));

    for (std::size_t i = 0; i < n_; ++i) {
      const double ci = cfg_.C * (y(i) > 0 ? cfg_.positive_weight : cfg_.negative_weight);
      if (cfg_.loss == Loss::Hinge) {
        upper_[i] = ci;
        diag_[i] = 0.0;
      } else {
        upper_[i] = std::numeric_limits<double>::infinity();
        diag_[i] = 0.5 / ci;
      }
      qd_[i] = dot(x(i), x(i), dim_) + bias_feature_ * bias_feature_ + diag_[i];
    }
  }

  SvmFit run() {
    SvmFit fit;
    std::vector<double> e(n_);
    std::vector<std::size_t> active(n_);

    const std::size_t max_stages = 200;
    bool converged = false;
    std::size_t epoch = 0;
    std::size_t stage = 0;
    for (; stage < max_stages && epoch < cfg_.max_epochs; ++stage) {
      for (std::size_t i = 0; i < n_; ++i) e[i] = 1.0 - y(i) * center_;
      const bool solved = run_stage(stage, e, active, epoch, fit.trace);
      center_ = best_bias();
      if (solved) {
        // Relative to the certified lower bound, so the gap to the true
        // optimum is within tolerance of the optimum itself.
        const double lower = balanced_dual();
        if (original_primal(center_) - lower <= cfg_.tolerance * std::max(lower, 1e-12)) {
          converged = true;
          ++stage;
          break;
        }
      }
    }

    // Every stage ends by recentering on the best bias for the current w.
    fit.solution.w = w_;
    fit.solution.b = center_;
    for (double v : fit.solution.w) {
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "SVM weights diverged");
    }
    if (!std::isfinite(fit.solution.b)) throw Error(ErrorCode::NonFinite, "SVM bias diverged");
    fit.converged = converged;
    fit.epochs = epoch;
    fit.stages = stage;
    fit.objective = original_primal(fit.solution.b);
    return fit;
  }

 private:
  const double* x(std::size_t i) const {
    return problem_.features().row(static_cast<Eigen::Index>(problem_.row(i))).data() + 1;
  }
  double y(std::size_t i) const { return problem_.labels()[i]; }

  // One proximal stage: coordinate descent with liblinear-style shrinking
  // until the stage's duality gap meets the tolerance. Returns false when
  // the epoch budget runs out first.
  bool run_stage(std::size_t stage, const std::vector<double>& e, std::vector<std::size_t>& active,
                 std::size_t& epoch, std::vector<EpochRecord>& trace) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    active.resize(n_);
    std::iota(active.begin(), active.end(), std::size_t{0});
    std::size_t active_size = n_;
    double pg_max_old = kInf;
    double pg_min_old = -kInf;
    double pg_eps = kInf;
    std::size_t since_check = 0;

    while (epoch < cfg_.max_epochs) {
      std::shuffle(active.begin(), active.begin() + static_cast<std::ptrdiff_t>(active_size), rng_);
      double pg_max = -kInf;
      double pg_min = kInf;
      for (std::size_t s = 0; s < active_size;) {
        const std::size_t i = active[s];
        const double yi = y(i);
        const double* xi = x(i);
        const double g = gradient(i, e);

        double pg = 0.0;
        if (alpha_[i] <= 0.0) {
          if (g > pg_max_old) {
            std::swap(active[s], active[--active_size]);
            continue;
          }
          pg = std::min(g, 0.0);
        } else if (alpha_[i] >= upper_[i]) {
          if (g < pg_min_old) {
            std::swap(active[s], active[--active_size]);
            continue;
          }
          pg = std::max(g, 0.0);
        } else {
          pg = g;
        }
        pg_max = std::max(pg_max, pg);
        pg_min = std::min(pg_min, pg);

        if (pg != 0.0) {
          const double old = alpha_[i];
          const double updated = std::min(std::max(old - g / qd_[i], 0.0), upper_[i]);
          const double delta = (updated - old) * yi;
          if (delta != 0.0) {
            alpha_[i] = updated;
            axpy(delta, xi, w_.data(), dim_);
            beta_ += delta * bias_feature_;
          }
        }
        ++s;
      }
      ++epoch;
      ++since_check;
      const bool check_due = since_check >= kGapInterval || epoch == cfg_.max_epochs;
      if (check_due) polish_free_face(e);

      EpochRecord record{stage, dual_objective(e), std::numeric_limits<double>::quiet_NaN()};
      if (!std::isfinite(record.dual_objective)) throw Error(ErrorCode::NonFinite, "SVM objective diverged");

      const bool spread_small = pg_max - pg_min <= pg_eps || active_size == 0;
      if (spread_small || check_due) {
        since_check = 0;
        const double primal = stage_primal();
        record.duality_gap = primal + record.dual_objective;
        trace.push_back(record);
        if (record.duality_gap <= cfg_.tolerance * std::max(std::abs(primal), 1e-12)) return true;
        if (spread_small) {
          // The shrunk problem looks solved but the full one is not: bring
          // every coordinate back and demand a tighter spread next time.
          active_size = n_;
          pg_eps = std::isfinite(pg_eps) ? 0.5 * pg_eps : 0.5 * (pg_max - pg_min);
          pg_max_old = kInf;
          pg_min_old = -kInf;
          continue;
        }
      } else {
        trace.push_back(record);
      }
      if (!std::isfinite(pg_eps)) pg_eps = 0.1 * (pg_max - pg_min);
      pg_max_old = pg_max > 0.0 ? pg_max : kInf;
      pg_min_old = pg_min < 0.0 ? pg_min : -kInf;
    }
    return false;
  }

  double gradient(std::size_t i, const std::vector<double>& e) const {
    return y(i) * (dot(w_.data(), x(i), dim_) + bias_feature_ * beta_) - e[i] + diag_[i] * alpha_[i];
  }

  // out = H p on the free coordinates, H = Z_F Z_F^T + diag_F with rows
  // z_i = y_i (x_i, B).
  void apply_face_hessian(const std::vector<std::size_t>& face, const std::vector<double>& p,
                          std::vector<double>& out) const {
    std::vector<double> v(dim_, 0.0);
    double vb = 0.0;
    for (std::size_t k = 0; k < face.size(); ++k) {
      axpy(p[k] * y(face[k]), x(face[k]), v.data(), dim_);
      vb += p[k] * y(face[k]) * bias_feature_;
    }
    for (std::size_t k = 0; k < face.size(); ++k) {
      const std::size_t i = face[k];
      out[k] = y(i) * (dot(v.data(), x(i), dim_) + bias_feature_ * vb) + diag_[i] * p[k];
    }
  }

  // Coordinate descent crawls when the free face is badly conditioned. A
  // conjugate-gradient Newton step on that face, clipped to the box by an
  // exact line search, closes most of the remaining gap. The dual never
  // increases: the step is skipped unless it is a descent direction.
  void polish_free_face(const std::vector<double>& e) {
    std::vector<std::size_t> face;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > 0.0 && alpha_[i] < upper_[i]) face.push_back(i);
    }
    const std::size_t m = face.size();
    if (m == 0) return;
    std::vector<double> g(m);
    for (std::size_t k = 0; k < m; ++k) g[k] = gradient(face[k], e);

    std::vector<double> d(m, 0.0);
    std::vector<double> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = -g[k];
    std::vector<double> p = r;
    std::vector<double> hp(m);
    double rr = dot(r.data(), r.data(), m);
    const double rr0 = rr;
    if (!(rr > 0.0)) return;
    const std::size_t max_iter = std::min<std::size_t>({m, dim_ + 2, 64});
    // Keep the step within half the coordinate work between gap checks.
    if (2 * max_iter * m > kGapInterval * n_ / 2) return;
    for (std::size_t it = 0; it < max_iter; ++it) {
      apply_face_hessian(face, p, hp);
      const double php = dot(p.data(), hp.data(), m);
      if (!(php > 1e-14 * rr)) break;
      const double a = rr / php;
      axpy(a, p.data(), d.data(), m);
      axpy(-a, hp.data(), r.data(), m);
      const double rr_new = dot(r.data(), r.data(), m);
      if (rr_new <= 1e-24 * rr0) break;
      for (std::size_t k = 0; k < m; ++k) p[k] = r[k] + (rr_new / rr) * p[k];
      rr = rr_new;
    }

    const double slope = dot(g.data(), d.data(), m);
    if (!(slope < 0.0)) return;
    apply_face_hessian(face, d, hp);
    const double curvature = dot(d.data(), hp.data(), m);
    double t = curvature > 0.0 ? -slope / curvature : std::numeric_limits<double>::infinity();
    std::size_t blocking = m;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = face[k];
      double limit = std::numeric_limits<double>::infinity();
      if (d[k] > 0.0) limit = (upper_[i] - alpha_[i]) / d[k];
      else if (d[k] < 0.0) limit = -alpha_[i] / d[k];
      if (limit < t) {
        t = limit;
        blocking = k;
      }
    }
    if (!(t > 0.0) || !std::isfinite(t)) return;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = face[k];
      double updated = std::clamp(alpha_[i] + t * d[k], 0.0, upper_[i]);
      if (k == blocking) updated = d[k] > 0.0 ? upper_[i] : 0.0;
      const double delta = (updated - alpha_[i]) * y(i);
      alpha_[i] = updated;
      axpy(delta, x(i), w_.data(), dim_);
      beta_ += delta * bias_feature_;
    }
  }

  // Exact minimizer over b of the original primal with w fixed. The loss is
  // convex and piecewise (linear or quadratic) between the kinks y_i - f_i.
  double best_bias() const {
    std::vector<double> f(n_);
    std::vector<double> kinks(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      f[i] = dot(w_.data(), x(i), dim_);
      kinks[i] = y(i) - f[i];
    }
    auto loss_at = [&](double b) {
      double total = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double ci = cfg_.C * (y(i) > 0 ? cfg_.positive_weight : cfg_.negative_weight);
        total += ci * loss_term(cfg_.loss, 1.0 - y(i) * (f[i] + b));
      }
      return total;
    };
    std::sort(kinks.begin(), kinks.end());
    std::size_t lo = 0;
    std::size_t hi = n_ - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (loss_at(kinks[mid]) <= loss_at(kinks[mid + 1])) hi = mid;
      else lo = mid + 1;
    }
    double best = kinks[lo];
    if (cfg_.loss == Loss::Hinge) return best;

    // Squared hinge: the minimum may sit strictly inside a neighbouring
    // interval, where the active set is fixed and the optimum is closed form.
    double best_value = loss_at(best);
    const double span = std::max(1.0, kinks.back() - kinks.front());
    const double left = lo > 0 ? kinks[lo - 1] : kinks[lo] - span;
    const double right = lo + 1 < n_ ? kinks[lo + 1] : kinks[lo] + span;
    for (const auto& [a, b] : {std::pair{left, kinks[lo]}, std::pair{kinks[lo], right}}) {
      const double probe = 0.5 * (a + b);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (1.0 - y(i) * (f[i] + probe) <= 0.0) continue;
        const double ci = cfg_.C * (y(i) > 0 ? cfg_.positive_weight : cfg_.negative_weight);
        num += ci * (y(i) - f[i]);
        den += ci;
      }
      if (den <= 0.0) continue;
      const double candidate = std::clamp(num / den, a, b);
      const double value = loss_at(candidate);
      if (value < best_value) {
        best_value = value;
        best = candidate;
      }
    }
    return best;
  }

  // Dual value of the free-bias problem at alpha rescaled per class so that
  // sum_i y_i alpha_i = 0. Feasible, hence a lower bound on the optimum.
  double balanced_dual() const {
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t i = 0; i < n_; ++i) (y(i) > 0 ? pos : neg) += alpha_[i];
    if (pos <= 0.0 || neg <= 0.0) return 0.0;
    const double pos_scale = pos > neg ? neg / pos : 1.0;
    const double neg_scale = neg > pos ? pos / neg : 1.0;
    std::vector<double> w(dim_, 0.0);
    double value = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double a = alpha_[i] * (y(i) > 0 ? pos_scale : neg_scale);
      if (a == 0.0) continue;
      axpy(a * y(i), x(i), w.data(), dim_);
      value += a - 0.5 * diag_[i] * a * a;
    }
    return value - 0.5 * dot(w.data(), w.data(), dim_);
  }

  double dual_objective(const std::vector<double>& e) const {
    double value = 0.5 * (dot(w_.data(), w_.data(), dim_) + beta_ * beta_);
    for (std::size_t i = 0; i < n_; ++i) value += 0.5 * diag_[i] * alpha_[i] * alpha_[i] - alpha_[i] * e[i];
    return value;
  }

  double loss_sum(double b) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double ci = cfg_.C * (y(i) > 0 ? cfg_.positive_weight : cfg_.negative_weight);
      total += ci * loss_term(cfg_.loss, 1.0 - y(i) * (dot(w_.data(), x(i), dim_) + b));
    }
    return total;
  }

  double stage_primal() const {
    return 0.5 * (dot(w_.data(), w_.data(), dim_) + beta_ * beta_) +
           loss_sum(center_ + bias_feature_ * beta_);
  }

  double original_primal(double b) const { return 0.5 * dot(w_.data(), w_.data(), dim_) + loss_sum(b); }

  static constexpr std::size_t kGapInterval = 10;

  const SvmProblem& problem_;
  const SolverConfig& cfg_;
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> alpha_;
  std::vector<double> upper_;
  std::vector<double> diag_;
  std::vector<double> qd_;
  std::vector<double> w_;
  double beta_ = 0.0;
  double center_ = 0.0;
  double bias_feature_ = 1.0;
  std::mt19937_64 rng_;
};

}  // namespace

SvmFit train(const SvmProblem& problem) { return DualSolver(problem).run(); }

std::vector<double> decision_values(const SvmSolution& solution, const Matrix& features,
                                    std::span<const std::size_t> rows) {
  const std::size_t dim = solution.w.size();
  if (static_cast<std::size_t>(features.cols()) != dim + 1) {
    throw Error(ErrorCode::DimensionMismatch, "feature matrix has " + std::to_string(features.cols()) +
                                                  " columns, solution expects " + std::to_string(dim + 1));
  }
  const std::size_t n = rows.empty() ? static_cast<std::size_t>(features.rows()) : rows.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto r = static_cast<Eigen::Index>(rows.empty() ? k : rows[k]);
    out[k] = dot(solution.w.data(), features.row(r).data() + 1, dim) + solution.b;
  }
  return out;
}

std::vector<double> decision_values(const SvmSolution& solution, const Matrix& features) {
  return decision_values(solution, features, {});
}

double hinge_loss(std::span<const double> labels, std::span<const double> decisions) {
  if (labels.size() != decisions.size()) {
    throw Error(ErrorCode::DimensionMismatch, "labels and decision values differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) total += std::max(0.0, 1.0 - labels[i] * decisions[i]);
  return total;
}

double hinge_loss(std::span<const std::int8_t> labels, std::span<const double> decisions) {
  if (labels.size() != decisions.size()) {
    throw Error(ErrorCode::DimensionMismatch, "labels and decision values differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    total += std::max(0.0, 1.0 - static_cast<double>(labels[i]) * decisions[i]);
  }
  return total;
}

double primal_objective(const SvmProblem& problem, const SvmSolution& solution) {
  const auto& cfg = problem.config();
  const std::vector<double> yhat = decision_values(solution, problem.features(), problem.rows());
  double value = 0.5 * dot(solution.w.data(), solution.w.data(), solution.w.size());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const double y = problem.labels()[i];
    const double ci = cfg.C * (y > 0 ? cfg.positive_weight : cfg.negative_weight);
    value += ci * loss_term(cfg.loss, 1.0 - y * yhat[i]);
  }
  return value;
}

}  // namespace quditnet::svm

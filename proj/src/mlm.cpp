#include "commlens/mlm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace commlens {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense symmetric solve/inverse for the small fixed-effect dimension.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t p) : p_(p), a_(p * p, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * p_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * p_ + j]; }
  std::size_t dim() const { return p_; }

  // Cholesky A = LL'. Returns false when not positive definite.
  bool factor() {
    l_ = a_;
    for (std::size_t j = 0; j < p_; ++j) {
      double d = l_[j * p_ + j];
      for (std::size_t k = 0; k < j; ++k) d -= l_[j * p_ + k] * l_[j * p_ + k];
      if (d <= 0.0 || !std::isfinite(d)) return false;
      const double lj = std::sqrt(d);
      l_[j * p_ + j] = lj;
      for (std::size_t i = j + 1; i < p_; ++i) {
        double v = l_[i * p_ + j];
        for (std::size_t k = 0; k < j; ++k) v -= l_[i * p_ + k] * l_[j * p_ + k];
        l_[i * p_ + j] = v / lj;
      }
    }
    return true;
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    std::vector<double> y(p_);
    for (std::size_t i = 0; i < p_; ++i) {
      double v = b[i];
      for (std::size_t k = 0; k < i; ++k) v -= l_[i * p_ + k] * y[k];
      y[i] = v / l_[i * p_ + i];
    }
    std::vector<double> x(p_);
    for (std::size_t ii = p_; ii-- > 0;) {
      double v = y[ii];
      for (std::size_t k = ii + 1; k < p_; ++k) v -= l_[k * p_ + ii] * x[k];
      x[ii] = v / l_[ii * p_ + ii];
    }
    return x;
  }

  double log_det() const {
    double s = 0.0;
    for (std::size_t j = 0; j < p_; ++j) s += std::log(l_[j * p_ + j]);
    return 2.0 * s;
  }

  std::vector<double> inverse_diagonal() const {
    std::vector<double> diag(p_);
    std::vector<double> e(p_, 0.0);
    for (std::size_t j = 0; j < p_; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1.0;
      diag[j] = solve(e)[j];
    }
    return diag;
  }

 private:
  std::size_t p_;
  std::vector<double> a_;
  std::vector<double> l_;
};

struct GroupBlock {
  double n = 0.0;
  std::vector<double> xtx;     // p*p
  std::vector<double> xty;     // p
  std::vector<double> colsum;  // X' 1
  double ysum = 0.0;
  double yy = 0.0;
};

struct Objective {
  std::vector<GroupBlock> groups;
  std::size_t p = 0;
  double n_total = 0.0;
  bool reml = false;

  struct Eval {
    bool ok = false;
    double loglik = -std::numeric_limits<double>::infinity();
    double sigma2 = 0.0;
    std::vector<double> beta;
    SymMatrix a{1};
  };

  Eval eval(double lambda) const {
    Eval out;
    SymMatrix a(p);
    std::vector<double> b(p, 0.0);
    double yterm = 0.0, logdet_w = 0.0;
    for (const GroupBlock& g : groups) {
      const double c = lambda / (1.0 + g.n * lambda);
      logdet_w += std::log(1.0 + g.n * lambda);
      for (std::size_t i = 0; i < p; ++i) {
        b[i] += g.xty[i] - c * g.colsum[i] * g.ysum;
        for (std::size_t j = 0; j < p; ++j)
          a.at(i, j) += g.xtx[i * p + j] - c * g.colsum[i] * g.colsum[j];
      }
      yterm += g.yy - c * g.ysum * g.ysum;
    }
    SymMatrix a_copy = a;
    if (!a_copy.factor()) return out;
    out.beta = a_copy.solve(b);

    double rss = yterm;
    for (std::size_t i = 0; i < p; ++i) {
      rss -= 2.0 * out.beta[i] * b[i];
      for (std::size_t j = 0; j < p; ++j) rss += out.beta[i] * a.at(i, j) * out.beta[j];
    }
    rss = std::max(rss, 0.0);

    const double dof = reml ? n_total - static_cast<double>(p) : n_total;
    if (rss <= 0.0) return out;  // degenerate handled by the caller
    out.sigma2 = rss / dof;
    out.loglik = -0.5 * (dof * std::log(2.0 * kPi) + dof * std::log(out.sigma2) + logdet_w + dof);
    if (reml) out.loglik -= 0.5 * a_copy.log_det();
    out.a = std::move(a_copy);
    out.ok = true;
    return out;
  }
};

}  // namespace

double icc(double tau2, double sigma2) {
  const double total = tau2 + sigma2;
  return total > 0.0 ? tau2 / total : 0.0;
}

double percent_change(double v_empty, double v_model) {
  return 100.0 * (v_model - v_empty) / v_empty;
}

std::pair<double, double> variance_change(const MlmFit& empty, const MlmFit& model) {
  return {percent_change(empty.tau2, model.tau2), percent_change(empty.sigma2, model.sigma2)};
}

MlmFit fit_random_intercept(std::span<const MlmObservation> rows,
                            std::span<const std::string> predictor_names,
                            const MlmOptions& opts) {
  const std::size_t k = predictor_names.size();
  const std::size_t p = k + 1;
  if (rows.empty()) throw std::invalid_argument("fit_random_intercept: no data");
  for (const auto& r : rows)
    if (r.x.size() != k)
      throw std::invalid_argument("fit_random_intercept: predictor length mismatch");

  std::map<std::string, GroupBlock> grouped;
  double ysum_all = 0.0, yy_all = 0.0;
  for (const auto& r : rows) {
    GroupBlock& g = grouped[r.group];
    if (g.xtx.empty()) {
      g.xtx.assign(p * p, 0.0);
      g.xty.assign(p, 0.0);
      g.colsum.assign(p, 0.0);
    }
    g.n += 1.0;
    std::vector<double> xi(p);
    xi[0] = 1.0;
    for (std::size_t i = 0; i < k; ++i) xi[i + 1] = r.x[i];
    for (std::size_t i = 0; i < p; ++i) {
      g.colsum[i] += xi[i];
      g.xty[i] += xi[i] * r.y;
      for (std::size_t j = 0; j < p; ++j) g.xtx[i * p + j] += xi[i] * xi[j];
    }
    g.ysum += r.y;
    g.yy += r.y * r.y;
    ysum_all += r.y;
    yy_all += r.y * r.y;
  }
  if (grouped.size() < 2) throw std::invalid_argument("fit_random_intercept: need >= 2 groups");

  MlmFit fit;
  fit.n_obs = rows.size();
  fit.n_groups = grouped.size();

  Objective obj;
  obj.p = p;
  obj.n_total = static_cast<double>(rows.size());
  obj.reml = opts.reml;
  obj.groups.reserve(grouped.size());
  for (auto& [name, g] : grouped) obj.groups.push_back(std::move(g));

  const auto name_of = [&](std::size_t i) {
    return i == 0 ? std::string("(intercept)") : predictor_names[i - 1];
  };

  // Constant outcome: point-mass limit, variances zero.
  const double y_var = yy_all - ysum_all * ysum_all / obj.n_total;
  if (y_var <= 0.0) {
    auto e = obj.eval(0.0);  // not ok (rss == 0); recover beta by plain solve
    fit.degenerate = true;
    fit.converged = true;
    fit.tau2 = 0.0;
    fit.sigma2 = 0.0;
    fit.icc = 0.0;
    fit.loglik = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p; ++i)
      fit.fixed.push_back({name_of(i), e.beta.empty() ? 0.0 : e.beta[i], 0.0, 0.0, 1.0});
    return fit;
  }

  double best_lambda = 0.0;
  auto best = obj.eval(0.0);
  if (!opts.fixed_lambda) {
    // Coarse scan on log scale, then golden-section refinement around the
    // best bracket. The profile is smooth in log-lambda.
    constexpr double u_lo = -30.0, u_hi = 8.0;
    constexpr int grid = 77;
    std::vector<double> us(grid);
    int best_idx = -1;
    for (int i = 0; i < grid; ++i) {
      us[i] = u_lo + (u_hi - u_lo) * i / (grid - 1);
      const auto e = obj.eval(std::exp(us[i]));
      if (e.ok && e.loglik > best.loglik) {
        best = e;
        best_lambda = std::exp(us[i]);
        best_idx = i;
      }
    }
    if (best_idx >= 0) {
      double lo = us[std::max(0, best_idx - 1)];
      double hi = us[std::min(grid - 1, best_idx + 1)];
      const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
      auto f1 = obj.eval(std::exp(x1)), f2 = obj.eval(std::exp(x2));
      for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        if (f1.loglik >= f2.loglik) {
          hi = x2;
          x2 = x1;
          f2 = std::move(f1);
          x1 = hi - phi * (hi - lo);
          f1 = obj.eval(std::exp(x1));
        } else {
          lo = x1;
          x1 = x2;
          f1 = std::move(f2);
          x2 = lo + phi * (hi - lo);
          f2 = obj.eval(std::exp(x2));
        }
      }
      const auto& fbest = f1.loglik >= f2.loglik ? f1 : f2;
      const double ubest = f1.loglik >= f2.loglik ? x1 : x2;
      if (fbest.ok && fbest.loglik > best.loglik) {
        best = fbest;
        best_lambda = std::exp(ubest);
      }
    }
    // Boundary snap: anything this small is tau2 = 0.
    if (best_lambda < 1e-10) {
      best_lambda = 0.0;
      best = obj.eval(0.0);
    }
  } else {
    best_lambda = *opts.fixed_lambda;
    best = obj.eval(best_lambda);
  }

  if (!best.ok) {
    fit.converged = false;
    return fit;
  }

  fit.converged = true;
  fit.sigma2 = best.sigma2;
  fit.tau2 = std::max(0.0, best_lambda * best.sigma2);
  fit.icc = icc(fit.tau2, fit.sigma2);
  fit.loglik = best.loglik;

  const auto cov_diag = best.a.inverse_diagonal();
  for (std::size_t i = 0; i < p; ++i) {
    FixedEffect fe;
    fe.name = name_of(i);
    fe.estimate = best.beta[i];
    fe.se = std::sqrt(std::max(0.0, fit.sigma2 * cov_diag[i]));
    if (fe.se > 0.0) {
      fe.z = fe.estimate / fe.se;
      fe.p = std::erfc(std::fabs(fe.z) / std::sqrt(2.0));
    } else {
      fe.z = 0.0;
      fe.p = 1.0;
    }
    fit.fixed.push_back(std::move(fe));
  }
  return fit;
}

}  // namespace commlens

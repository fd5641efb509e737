#include "scs/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "scs/kernels.hpp"
#include "scs/rng.hpp"

namespace scs {

namespace {

constexpr double kIntensity = 255.0;
constexpr double kLambdaScale = 200.0;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double tv_of(std::span<const double> gx, std::span<const double> gy) {
  double s = 0.0;
  for (std::size_t i = 0; i < gx.size(); ++i) s += std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
  return s;
}

// Mean squared row norm ||Phi||_F^2 / rows from a fixed set of Rademacher
// probes: E ||Phi z||^2 = ||Phi||_F^2.
double mean_row_norm2(const LinearOperator& op) {
  constexpr int kProbes = 4;
  std::vector<double> z(op.cols());
  std::vector<double> pz(op.rows());
  double acc = 0.0;
  for (int p = 0; p < kProbes; ++p) {
    SplitMix64 rng(substream_seed(0x5eed'7e57ULL, static_cast<std::uint64_t>(p)));
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j % 64 == 0) bits = rng.next();
      z[j] = (bits >> (j % 64)) & 1 ? -1.0 : 1.0;
    }
    op.apply(z, pz);
    acc += dot(pz, pz);
  }
  return acc / kProbes / static_cast<double>(op.rows());
}

void check_problem(const TvProblem& p) {
  if (p.op == nullptr) throw std::invalid_argument("TV problem has no operator");
  if (p.width <= 0 || p.height <= 0 ||
      p.op->cols() != static_cast<std::size_t>(p.width) * static_cast<std::size_t>(p.height)) {
    throw std::invalid_argument("TV problem: operator columns do not match the target resolution");
  }
  if (p.y.size() != p.op->rows()) throw std::invalid_argument("TV problem: measurement count mismatch");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) throw std::invalid_argument("TV problem: lambda must be positive");
  if (p.max_iters <= 0) throw std::invalid_argument("TV problem: max_iters must be positive");
  for (double v : p.y) {
    if (!std::isfinite(v)) throw std::invalid_argument("TV problem: non-finite measurement");
  }
}

}  // namespace

double tv_norm(std::span<const double> pixels, int width, int height) {
  std::vector<double> gx(pixels.size());
  std::vector<double> gy(pixels.size());
  kernels::omp::gradient(pixels, width, height, gx, gy);
  return tv_of(gx, gy);
}

double tv_norm(const Image& img) { return tv_norm(img.pixels(), img.width(), img.height()); }

double tv_objective(const TvProblem& problem, std::span<const double> x) {
  const std::vector<double> ax = problem.op->apply(x);
  double r2 = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) r2 += (ax[i] - problem.y[i]) * (ax[i] - problem.y[i]);
  return tv_norm(x, problem.width, problem.height) + 0.5 * problem.lambda * r2;
}

TvSolution solve_tv(const TvProblem& problem) {
  check_problem(problem);
  const LinearOperator& op = *problem.op;
  const int w = problem.width;
  const int h = problem.height;
  const std::size_t n = op.cols();
  const std::size_t m = op.rows();

  // Scaled problem: x~ = x / 255, A = Phi / a, y~ = y / (255 a) with a^2 the
  // mean squared row norm. Then J(x) = 255 [TV(x~) + (mu / 2) ||A x~ - y~||^2]
  // with mu = lambda * 255 * a^2.
  const double a2 = mean_row_norm2(op);
  const double a = std::sqrt(a2);
  const double mu = problem.lambda * kIntensity * a2;
  const TvSolverParams& prm = problem.params;
  const double inv_a = 1.0 / a;

  std::vector<double> yt(m);
  for (std::size_t i = 0; i < m; ++i) yt[i] = problem.y[i] / (kIntensity * a);

  // x0 = Phi^T y * n / ||Phi||_F^2, i.e. Phi^T y / rows for +/-1 operators.
  std::vector<double> x = op.apply_adjoint(yt);
  for (double& v : x) v *= inv_a * static_cast<double>(n) / (static_cast<double>(m));

  auto apply_a = [&](std::span<const double> in, std::span<double> out) {
    op.apply(in, out);
    for (double& v : out) v *= inv_a;
  };
  auto apply_at = [&](std::span<const double> in, std::span<double> out) {
    op.apply_adjoint(in, out);
    for (double& v : out) v *= inv_a;
  };

  // Splitting: w = grad x (shrinkage), z = A x (closed-form data prox), each
  // with a scaled multiplier; the x-step is a few conjugate-gradient steps on
  // (beta G^T G + rho A^T A) x = beta G^T (w - u) + rho A^T (z - v).
  const double rho = std::clamp(mu, prm.rho_min, prm.rho_max);
  const double beta = std::min(prm.beta, rho * prm.beta_ratio);

  std::vector<double> ax(m), z(m), v(m, 0.0), dres(m), ap(m);
  std::vector<double> gx(n), gy(n), wx(n), wy(n), ux(n, 0.0), uy(n, 0.0);
  std::vector<double> tx(n), ty(n), grad(n), p(n), q(n), atap(n), lap(n), x_prev(n);

  auto scaled_objective = [&] {
    double r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) r2 += (ax[i] - yt[i]) * (ax[i] - yt[i]);
    return tv_of(gx, gy) + 0.5 * mu * r2;
  };

  apply_a(x, ax);
  kernels::omp::gradient(x, w, h, gx, gy);

  TvSolution sol;
  std::vector<double> best = x;
  double best_obj = scaled_objective();

  int it = 0;
  for (; it < problem.max_iters; ++it) {
    x_prev = x;

    // w-step: isotropic shrinkage of grad x + u with threshold 1 / beta.
    const double thresh = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) {
      const double vx = gx[i] + ux[i];
      const double vy = gy[i] + uy[i];
      const double mag = std::sqrt(vx * vx + vy * vy);
      const double s = mag > thresh ? (mag - thresh) / mag : 0.0;
      wx[i] = s * vx;
      wy[i] = s * vy;
    }
    // z-step: prox of (mu / 2) ||z - y~||^2.
    for (std::size_t i = 0; i < m; ++i) z[i] = (mu * yt[i] + rho * (ax[i] + v[i])) / (mu + rho);

    // x-step.
    for (std::size_t i = 0; i < n; ++i) {
      tx[i] = gx[i] - wx[i] + ux[i];
      ty[i] = gy[i] - wy[i] + uy[i];
    }
    kernels::omp::gradient_adjoint(tx, ty, w, h, grad);
    for (std::size_t i = 0; i < m; ++i) dres[i] = ax[i] - z[i] + v[i];
    apply_at(dres, atap);
    for (std::size_t i = 0; i < n; ++i) grad[i] = beta * grad[i] + rho * atap[i];

    double rr = dot(grad, grad);
    for (std::size_t i = 0; i < n; ++i) p[i] = -grad[i];
    for (int cg = 0; cg < prm.cg_steps && rr > 0.0; ++cg) {
      kernels::omp::gradient(p, w, h, tx, ty);
      apply_a(p, ap);
      const double pq = beta * (dot(tx, tx) + dot(ty, ty)) + rho * dot(ap, ap);
      if (!(pq > 0.0)) break;
      const double alpha = rr / pq;
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
      for (std::size_t i = 0; i < m; ++i) ax[i] += alpha * ap[i];
      if (cg + 1 == prm.cg_steps) break;
      kernels::omp::gradient_adjoint(tx, ty, w, h, lap);
      apply_at(ap, atap);
      for (std::size_t i = 0; i < n; ++i) grad[i] += alpha * (beta * lap[i] + rho * atap[i]);
      const double rr_new = dot(grad, grad);
      const double gamma = rr_new / rr;
      rr = rr_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = -grad[i] + gamma * p[i];
    }

    // A x is updated incrementally; resynchronize periodically.
    if ((it + 1) % 50 == 0) apply_a(x, ax);

    // Multiplier updates.
    kernels::omp::gradient(x, w, h, gx, gy);
    for (std::size_t i = 0; i < n; ++i) {
      ux[i] += gx[i] - wx[i];
      uy[i] += gy[i] - wy[i];
    }
    for (std::size_t i = 0; i < m; ++i) v[i] += ax[i] - z[i];

    const double obj = scaled_objective();
    if (obj <= best_obj) {
      best_obj = obj;
      best = x;
    }
    sol.objective_history.push_back(best_obj * kIntensity);

    double dx2 = 0.0;
    double x2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dx2 += (x[i] - x_prev[i]) * (x[i] - x_prev[i]);
      x2 += x[i] * x[i];
    }
    if (it + 1 >= prm.min_iters && dx2 <= problem.tol * problem.tol * std::max(x2, 1e-300)) {
      sol.converged = true;
      ++it;
      break;
    }
  }

  for (double& v : best) v *= kIntensity;
  sol.iterations_run = it;
  sol.final_objective = tv_objective(problem, best);
  sol.image = Image(w, h, std::move(best));
  return sol;
}

double lambda_for_noise(double noise_variance, std::size_t measurements, std::size_t pixels) {
  if (measurements == 0) throw std::invalid_argument("lambda_for_noise: no measurements");
  // lambda = c n / (m Delta^2) with the equivalent uniform step Delta^2 = 12 sigma_q^2.
  const double step2 = 12.0 * std::max(noise_variance, 1e-12);
  return kLambdaScale * static_cast<double>(pixels) / (static_cast<double>(measurements) * step2);
}

Image recover_base(std::span<const double> y_base, double noise_variance, const DssOperator& dss,
                   const RecoveryOptions& options) {
  const SensingConfig& c = dss.config();
  TvProblem p;
  p.op = &dss;
  p.y = y_base;
  p.width = c.base_width;
  p.height = c.base_height;
  p.lambda = lambda_for_noise(noise_variance, dss.rows(), dss.cols());
  p.max_iters = options.max_iters;
  p.tol = options.tol;
  p.params = options.params;
  return solve_tv(p).image;
}

Image recover_enhancement(std::span<const double> residual, std::span<const double> y_pred, double noise_variance,
                          const RademacherOperator& phi_enh, const SensingConfig& config,
                          const RecoveryOptions& options) {
  if (residual.size() != y_pred.size()) throw std::invalid_argument("residual and prediction lengths differ");
  std::vector<double> y(residual.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = residual[i] + y_pred[i];
  TvProblem p;
  p.op = &phi_enh;
  p.y = y;
  p.width = config.width;
  p.height = config.height;
  p.lambda = lambda_for_noise(noise_variance, phi_enh.rows(), phi_enh.cols());
  p.max_iters = options.max_iters;
  p.tol = options.tol;
  p.params = options.params;
  return solve_tv(p).image;
}

}  // namespace scs

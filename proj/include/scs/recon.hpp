#pragma once

#include <span>
#include <vector>

#include "scs/image.hpp"
#include "scs/linear_operator.hpp"
#include "scs/sensing.hpp"

namespace scs {

/// Isotropic total variation with forward differences; differences past the
/// last row or column are zero.
double tv_norm(const Image& img);
double tv_norm(std::span<const double> pixels, int width, int height);

/// Internal parameters of the TV solver, in units where intensities are
/// divided by 255 and the operator is scaled to unit mean row norm.
struct TvSolverParams {
  double rho_min = 1.0;   // data-split penalty rho = clamp(mu, rho_min, rho_max)
  double rho_max = 16.0;
  double beta = 8.0;          // gradient-split penalty, at most beta_ratio * rho
  double beta_ratio = 0.5;
  int cg_steps = 1;           // conjugate-gradient steps on x per outer iteration
  int min_iters = 10;
};

/// min_x TV(x) + (lambda / 2) ||Phi x - y||^2 at the given resolution.
struct TvProblem {
  const LinearOperator* op = nullptr;
  std::span<const double> y;
  int width = 0;
  int height = 0;
  double lambda = 1.0;
  int max_iters = 300;
  double tol = 1e-4;  // relative image change between outer iterations
  TvSolverParams params{};
};

struct TvSolution {
  Image image;
  int iterations_run = 0;
  double final_objective = 0.0;
  bool converged = false;
  /// Objective of the recorded iterate after each outer iteration. The
  /// recorded iterate is the lowest-objective one visited so far.
  std::vector<double> objective_history;
};

/// Objective value TV(x) + (lambda / 2) ||Phi x - y||^2.
double tv_objective(const TvProblem& problem, std::span<const double> x);

/// Alternating-direction augmented Lagrangian solver: isotropic shrinkage on
/// the gradient field, conjugate-gradient steps on the image.
TvSolution solve_tv(const TvProblem& problem);

/// Data-fidelity weight for measurements carrying independent noise of the
/// given per-measurement variance.
double lambda_for_noise(double noise_variance, std::size_t measurements, std::size_t pixels);

/// Solver settings shared by the decoders.
struct RecoveryOptions {
  int max_iters = 300;
  double tol = 1e-4;
  TvSolverParams params{};
};

/// Base layer: TV recovery at base resolution with the (non-augmented) DSS operator.
Image recover_base(std::span<const double> y_base, double noise_variance, const DssOperator& dss,
                   const RecoveryOptions& options = {});

/// Enhancement layer: y_E = residual + y_pred, then TV recovery at full resolution with Phi_E.
Image recover_enhancement(std::span<const double> residual, std::span<const double> y_pred, double noise_variance,
                          const RademacherOperator& phi_enh, const SensingConfig& config,
                          const RecoveryOptions& options = {});

}  // namespace scs

#include "survscore/score_process.hpp"

#include <algorithm>
#include <cmath>

#include "survscore/errors.hpp"
#include "survscore/kolmogorov.hpp"

namespace survscore {

namespace {

Vector interpolate(const std::vector<double>& grid, const Matrix& rows, double u) {
  const std::size_t k = grid.size() - 1;
  u = std::clamp(u, 0.0, 1.0);
  const double scaled = u * static_cast<double>(k);
  auto j = static_cast<std::size_t>(std::floor(scaled));
  if (j >= k) return rows.row(static_cast<Eigen::Index>(k)).transpose();
  const double frac = scaled - static_cast<double>(j);
  const auto a = rows.row(static_cast<Eigen::Index>(j)).transpose();
  const auto b = rows.row(static_cast<Eigen::Index>(j + 1)).transpose();
  return a + frac * (b - a);
}

}  // namespace

Vector ScoreProcessTrace::value_at(double u) const { return interpolate(grid, values, u); }

Vector ScoreProcessTrace::standardized_at(double u) const {
  if (!standardized_values) throw SingularMatrix("trace has no standardized values");
  return interpolate(grid, *standardized_values, u);
}

ScoreProcessTrace score_process(const TransformedDataset& data, const Vector& beta0) {
  const std::size_t k = data.k_n();
  if (k < 2) throw DegenerateData("score process needs at least two informative failures");
  const Eigen::Index p = data.dimension();
  if (beta0.size() != p) throw DomainError("score_process: beta0 has wrong dimension");

  ScoreProcessTrace trace;
  trace.beta0 = beta0;
  trace.grid.resize(k + 1);
  trace.values = Matrix::Zero(static_cast<Eigen::Index>(k + 1), p);
  trace.increments.resize(static_cast<Eigen::Index>(k), p);

  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  Matrix cov_sum = Matrix::Zero(p, p);
  const std::vector<WeightedMoments> moments = sweep_grid_moments(data, beta0);
  for (std::size_t i = 0; i < k; ++i) {
    const WeightedMoments& wm = moments[i];
    const Vector residual = failing_covariate(data, i) - wm.mean;
    Vector whitened(p);
    if (p == 1) {
      if (!eigenvalues_positive(Vector::Constant(1, wm.cov(0, 0))))
        throw DegenerateRiskSet("risk-set variance is zero at an informative failure");
      whitened(0) = residual(0) / std::sqrt(wm.cov(0, 0));
    } else {
      whitened = sym_matrix_power(wm.cov, MatrixPower::InverseSqrt) * residual;
    }
    cov_sum += wm.cov;
    const auto row = static_cast<Eigen::Index>(i);
    trace.increments.row(row) = whitened.transpose();
    trace.values.row(row + 1) = trace.values.row(row) + scale * whitened.transpose();
    trace.grid[i + 1] = data.grid()[i].t;
  }

  const Matrix sigma = cov_sum / static_cast<double>(k);
  try {
    SigmaHat sh{sigma, sym_matrix_power(sigma, MatrixPower::InverseSqrt)};
    trace.standardized_values = trace.values * sh.inv_sqrt;  // inv_sqrt is symmetric
    trace.sigma = std::move(sh);
  } catch (const SingularMatrix&) {
  }
  return trace;
}

Vector expected_drift(const TemporalEffect& effect, const Vector& beta0, const Matrix& sigma,
                      std::size_t k_n, double t) {
  const Vector cumulative = effect.integral(t) - t * beta0;
  return std::sqrt(static_cast<double>(k_n)) * sym_matrix_power(sigma, MatrixPower::Sqrt) *
         cumulative;
}

namespace {

double column_norm(const ScoreProcessTrace& trace, Eigen::Index i) {
  return trace.sigma->inv_sqrt.col(i).norm();
}

// Bridge s_i(t_j) - t_j s_i(1) at every grid point.
Vector bridge(const ScoreProcessTrace& trace, Eigen::Index i) {
  const Matrix& s = *trace.standardized_values;
  const Eigen::Index last = s.rows() - 1;
  Vector b(s.rows());
  for (Eigen::Index j = 0; j <= last; ++j)
    b(j) = s(j, i) - trace.grid[static_cast<std::size_t>(j)] * s(last, i);
  return b;
}

void require_standardized(const ScoreProcessTrace& trace, Eigen::Index component) {
  if (!trace.standardized()) throw SingularMatrix("Sigma-hat is singular; no standardized process");
  if (component < 0 || component >= trace.dimension())
    throw DomainError("component index out of range");
}

}  // namespace

double bridge_sup_statistic(const ScoreProcessTrace& trace, Eigen::Index component) {
  require_standardized(trace, component);
  // The bridge is piecewise linear, so its sup is attained on the grid.
  return bridge(trace, component).cwiseAbs().maxCoeff() / column_norm(trace, component);
}

std::vector<ConfidenceBand> confidence_bands(const ScoreProcessTrace& trace, double alpha) {
  const double a = kolmogorov_quantile(alpha);
  std::vector<ConfidenceBand> bands;
  for (Eigen::Index i = 0; i < trace.dimension(); ++i) {
    require_standardized(trace, i);
    ConfidenceBand band;
    band.component = i;
    band.alpha = alpha;
    band.slope = (*trace.standardized_values)(trace.standardized_values->rows() - 1, i);
    band.half_width = column_norm(trace, i) * a;

    const Vector b = bridge(trace, i);
    for (Eigen::Index j = 1; j < b.size(); ++j) {
      if (std::abs(b(j)) <= band.half_width) continue;
      band.crossed = true;
      const double b0 = b(j - 1);
      const double b1 = b(j);
      const double edge = b1 > 0.0 ? band.half_width : -band.half_width;
      const double frac = std::clamp((edge - b0) / (b1 - b0), 0.0, 1.0);
      const double t0 = trace.grid[static_cast<std::size_t>(j - 1)];
      const double t1 = trace.grid[static_cast<std::size_t>(j)];
      band.first_crossing = t0 + frac * (t1 - t0);
      break;
    }
    bands.push_back(band);
  }
  return bands;
}

}  // namespace survscore

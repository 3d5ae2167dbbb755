#include "survscore/moments.hpp"

#include <cmath>
#include <limits>

#include "survscore/errors.hpp"

namespace survscore {

WeightedMoments weighted_moments(const Eigen::Ref<const Matrix>& rows,
                                 const Eigen::Ref<const Eigen::VectorXd>& multiplicity,
                                 const Vector& beta) {
  const Eigen::Index m = rows.rows();
  const Eigen::Index p = rows.cols();
  const bool counted = multiplicity.size() > 0;

  WeightedMoments out{Vector::Zero(p), Matrix::Zero(p, p), -std::numeric_limits<double>::infinity()};
  if (m == 0) return out;

  Vector eta = rows * beta;
  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < m; ++j)
    if (!counted || multiplicity(j) > 0.0) shift = std::max(shift, eta(j));
  if (!std::isfinite(shift)) return out;

  Vector w(m);
  double total = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mult = counted ? multiplicity(j) : 1.0;
    w(j) = mult > 0.0 ? mult * std::exp(eta(j) - shift) : 0.0;
    total += w(j);
  }
  w /= total;

  out.mean.noalias() = rows.transpose() * w;
  // Centered second moment; avoids cancellation under large location shifts.
  const Matrix centered = rows.rowwise() - out.mean.transpose();
  out.cov.noalias() = centered.transpose() * w.asDiagonal() * centered;
  out.log_normalizer = shift + std::log(total);
  return out;
}

WeightedMoments weighted_moments(const Eigen::Ref<const Matrix>& rows, const Vector& beta) {
  return weighted_moments(rows, Eigen::VectorXd(), beta);
}

namespace {

// Risk-set rows of grid point i for datasets with time-dependent covariates.
Matrix evaluated_rows(const TransformedDataset& data, std::size_t i) {
  const auto& g = data.grid()[i];
  const std::size_t n = data.order().size();
  Matrix rows(static_cast<Eigen::Index>(n - g.position), data.dimension());
  for (std::size_t pos = g.position; pos < n; ++pos)
    rows.row(static_cast<Eigen::Index>(pos - g.position)) = data.covariate(pos, i).transpose();
  return rows;
}

}  // namespace

WeightedMoments grid_moments(const TransformedDataset& data, std::size_t i, const Vector& beta) {
  const auto& g = data.grid().at(i);
  if (data.grouped()) {
    const Eigen::VectorXd counts = data.group_counts().row(static_cast<Eigen::Index>(i))
                                       .transpose()
                                       .cast<double>();
    return weighted_moments(data.group_values(), counts, beta);
  }
  if (data.fixed_covariates()) {
    const auto n = static_cast<Eigen::Index>(data.order().size());
    const auto pos = static_cast<Eigen::Index>(g.position);
    return weighted_moments(data.sorted_covariates().bottomRows(n - pos), beta);
  }
  return weighted_moments(evaluated_rows(data, i), beta);
}

std::vector<WeightedMoments> sweep_grid_moments(const TransformedDataset& data,
                                                const std::vector<Vector>& betas) {
  const std::size_t k = data.k_n();
  if (betas.size() != k) throw DomainError("sweep_grid_moments: one beta per grid point required");
  std::vector<WeightedMoments> out(k);
  if (!data.fixed_covariates() || data.grouped()) {
    for (std::size_t i = 0; i < k; ++i) out[i] = grid_moments(data, i, betas[i]);
    return out;
  }

  const Matrix& z = data.sorted_covariates();
  const Eigen::Index p = z.cols();
  const Vector center = z.colwise().mean().transpose();
  const auto n = static_cast<Eigen::Index>(data.order().size());
  const Matrix zc = z.rowwise() - center.transpose();

  std::size_t i = k;
  while (i > 0) {
    // Run [first, i) of grid points sharing one beta.
    std::size_t first = i - 1;
    while (first > 0 && betas[first - 1] == betas[i - 1]) --first;
    const Vector& beta = betas[i - 1];
    const Vector eta = zc * beta;
    const double shift = eta.maxCoeff();

    double s0 = 0.0;
    Vector s1 = Vector::Zero(p);
    Matrix s2 = Matrix::Zero(p, p);
    Eigen::Index next = n;  // rows [next, n) are accumulated
    for (std::size_t g = i; g-- > first;) {
      const auto pos = static_cast<Eigen::Index>(data.grid()[g].position);
      for (Eigen::Index r = next - 1; r >= pos; --r) {
        const double w = std::exp(eta(r) - shift);
        s0 += w;
        s1.noalias() += w * zc.row(r).transpose();
        s2.noalias() += (w * zc.row(r).transpose()) * zc.row(r);
      }
      next = pos;
      WeightedMoments& wm = out[g];
      const Vector m = s1 / s0;
      wm.mean = m + center;
      wm.cov = s2 / s0 - m * m.transpose();
      wm.cov = 0.5 * (wm.cov + wm.cov.transpose());
      wm.log_normalizer = shift + std::log(s0) + center.dot(beta);
    }
    i = first;
  }
  return out;
}

std::vector<WeightedMoments> sweep_grid_moments(const TransformedDataset& data,
                                                const Vector& beta) {
  return sweep_grid_moments(data, std::vector<Vector>(data.k_n(), beta));
}

Vector failing_covariate(const TransformedDataset& data, std::size_t i) {
  const auto& g = data.grid().at(i);
  return data.covariate(g.position, i);
}

const Matrix& RiskSetMoments::inv_sqrt() const {
  if (!cov_inv_sqrt) throw DegenerateRiskSet("risk-set covariance is not positive definite");
  return *cov_inv_sqrt;
}

RiskSetMoments riskset_moments(const TransformedDataset& data, std::size_t i, const Vector& beta) {
  if (i >= data.k_n()) throw DomainError("riskset_moments: grid index out of range");
  if (beta.size() != data.dimension()) throw DomainError("riskset_moments: beta has wrong dimension");

  const auto& g = data.grid()[i];
  const std::size_t n = data.order().size();
  Matrix rows(static_cast<Eigen::Index>(n - g.position), data.dimension());
  RiskSetMoments out;
  out.time = g.t;
  out.at_risk.reserve(n - g.position);
  for (std::size_t pos = g.position; pos < n; ++pos) {
    out.at_risk.push_back(data.order()[pos]);
    rows.row(static_cast<Eigen::Index>(pos - g.position)) = data.covariate(pos, i).transpose();
  }

  const Vector eta = rows * beta;
  const double shift = eta.maxCoeff();
  out.pi = (eta.array() - shift).exp().matrix();
  out.pi /= out.pi.sum();

  const WeightedMoments wm = weighted_moments(rows, beta);
  out.mean = wm.mean;
  out.cov = wm.cov;
  const SymmetricEigen eig = jacobi_eigen(out.cov);
  out.cov_sqrt = sym_matrix_power(eig, MatrixPower::Sqrt);
  if (eigenvalues_positive(eig.values))
    out.cov_inv_sqrt = sym_matrix_power(eig, MatrixPower::InverseSqrt);
  return out;
}

RiskSetMoments riskset_moments(const TransformedDataset& data, std::size_t i,
                               const TemporalEffect& effect) {
  return riskset_moments(data, i, effect(data.grid().at(i).t));
}

SigmaHat sigma_hat(const TransformedDataset& data, const Vector& beta0) {
  if (data.k_n() == 0) throw NoInformativeFailures();
  Matrix acc = Matrix::Zero(data.dimension(), data.dimension());
  for (const auto& wm : sweep_grid_moments(data, beta0)) acc += wm.cov;
  acc /= static_cast<double>(data.k_n());
  return SigmaHat{acc, sym_matrix_power(acc, MatrixPower::InverseSqrt)};
}

}  // namespace survscore

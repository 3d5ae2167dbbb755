#pragma once

// Independent reference computations for tests. Deliberately naive: direct
// loops over the raw dataset, no sorting tricks, no shared code paths with
// the library beyond the data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "survscore/effect.hpp"
#include "survscore/survival.hpp"

namespace oracle {

using survscore::Matrix;
using survscore::SurvivalDataset;
using survscore::Vector;

struct Moments {
  Vector pi;
  Vector mean;
  Matrix cov;
};

inline Moments moments(const std::vector<Vector>& rows, const Vector& beta) {
  const std::size_t m = rows.size();
  const Eigen::Index p = rows.front().size();
  Moments out;
  out.pi.resize(static_cast<Eigen::Index>(m));
  long double total = 0.0L;
  for (std::size_t i = 0; i < m; ++i) {
    const long double w = std::exp(static_cast<long double>(beta.dot(rows[i])));
    out.pi(static_cast<Eigen::Index>(i)) = static_cast<double>(w);
    total += w;
  }
  for (std::size_t i = 0; i < m; ++i)
    out.pi(static_cast<Eigen::Index>(i)) =
        static_cast<double>(out.pi(static_cast<Eigen::Index>(i)) / total);
  out.mean = Vector::Zero(p);
  for (std::size_t i = 0; i < m; ++i) out.mean += out.pi(static_cast<Eigen::Index>(i)) * rows[i];
  out.cov = Matrix::Zero(p, p);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector d = rows[i] - out.mean;
    out.cov += out.pi(static_cast<Eigen::Index>(i)) * d * d.transpose();
  }
  return out;
}

// Does subject a leave the risk set no later than subject b? Tie rule:
// (time, failures first, id).
inline bool precedes(const survscore::Subject& a, const survscore::Subject& b) {
  if (a.observed_time != b.observed_time) return a.observed_time < b.observed_time;
  if (a.status != b.status) return a.status > b.status;
  return a.id < b.id;
}

// Covariate rows of the risk set just before subject f fails.
inline std::vector<Vector> risk_rows(const SurvivalDataset& d, std::size_t f) {
  std::vector<Vector> rows;
  for (std::size_t j = 0; j < d.size(); ++j)
    if (j == f || precedes(d.subjects[f], d.subjects[j]))
      rows.push_back(d.subjects[j].covariates.at(d.subjects[f].observed_time));
  return rows;
}

// Failures in time order with a PD risk-set covariance at beta = 0.
inline std::vector<std::size_t> informative_failures(const SurvivalDataset& d) {
  std::vector<std::size_t> fails;
  for (std::size_t j = 0; j < d.size(); ++j)
    if (d.subjects[j].status == 1) fails.push_back(j);
  std::sort(fails.begin(), fails.end(),
            [&](std::size_t a, std::size_t b) { return precedes(d.subjects[a], d.subjects[b]); });
  std::vector<std::size_t> out;
  for (std::size_t f : fails) {
    const auto rows = risk_rows(d, f);
    const Moments m = moments(rows, Vector::Zero(d.dimension));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.cov);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo > 1e-10 * (1.0 + hi)) out.push_back(f);
  }
  return out;
}

// Log partial likelihood of beta(t) = loading * B(t), p = 1, over informative
// failures at t_i = i / k.
inline double loglik_1d(const SurvivalDataset& d, const survscore::Basis& b, double loading) {
  const auto fails = informative_failures(d);
  const double k = static_cast<double>(fails.size());
  double ll = 0.0;
  for (std::size_t i = 0; i < fails.size(); ++i) {
    const double beta = loading * survscore::evaluate_basis(b, static_cast<double>(i + 1) / k);
    const auto rows = risk_rows(d, fails[i]);
    long double s = 0.0L;
    for (const Vector& r : rows) s += std::exp(static_cast<long double>(beta * r(0)));
    ll += beta * d.subjects[fails[i]].covariates.at(0.0)(0) - static_cast<double>(std::log(s));
  }
  return ll;
}

inline double golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double tol = 1e-10) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), e = a + g * (b - a);
  double fc = f(c), fe = f(e);
  while (b - a > tol) {
    if (fc > fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + g * (b - a);
      fe = f(e);
    }
  }
  return 0.5 * (a + b);
}

// U*(beta0, t_j), p = 1, by direct summation.
inline std::vector<double> score_process_1d(const SurvivalDataset& d, double beta0) {
  const auto fails = informative_failures(d);
  const double k = static_cast<double>(fails.size());
  std::vector<double> u{0.0};
  for (std::size_t f : fails) {
    const Moments m = moments(risk_rows(d, f), Vector::Constant(1, beta0));
    const double r = d.subjects[f].covariates.at(0.0)(0) - m.mean(0);
    u.push_back(u.back() + r / std::sqrt(m.cov(0, 0)) / std::sqrt(k));
  }
  return u;
}

// Two-sample Kolmogorov-Smirnov p-value, asymptotic with the Stephens
// small-sample correction.
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double q = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    q += term;
    if (std::abs(term) < 1e-14) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

// Random fixed-covariate dataset with distinct times and some censoring.
inline SurvivalDataset random_dataset(std::mt19937_64& gen, std::size_t n, Eigen::Index p,
                                      bool discrete = false, double censor = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(static_cast<Eigen::Index>(n), p);
  std::vector<double> times(n);
  std::vector<int> status(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j)
      z(static_cast<Eigen::Index>(i), j) = discrete ? (u(gen) < 0.5 ? 1.0 : 0.0) : g(gen);
    times[i] = -std::log(1.0 - u(gen)) + 1e-9 * static_cast<double>(i);
    status[i] = u(gen) < censor ? 0 : 1;
  }
  status[0] = 1;
  return survscore::make_dataset(times, status, z);
}

}  // namespace oracle

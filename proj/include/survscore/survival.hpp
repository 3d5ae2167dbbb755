#pragma once

#include <cstddef>
#include <istream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "survscore/linalg.hpp"

namespace survscore {

/// Covariate process of one subject: either a fixed vector or a
/// right-continuous step function of original time.
class CovariatePath {
 public:
  CovariatePath() = default;
  static CovariatePath fixed(Vector values);
  /// `steps` holds (breakpoint, value) pairs with strictly increasing
  /// breakpoints; the first value also applies before the first breakpoint.
  static CovariatePath step(std::vector<std::pair<double, Vector>> steps);

  bool is_fixed() const { return steps_.empty(); }
  Eigen::Index dimension() const { return fixed_.size(); }
  Vector at(double time) const;
  const Vector& fixed_value() const { return fixed_; }
  const std::vector<std::pair<double, Vector>>& steps() const { return steps_; }

 private:
  Vector fixed_;  // for step paths: value of the first step
  std::vector<std::pair<double, Vector>> steps_;
};

struct Subject {
  std::string id;
  double observed_time = 0.0;
  int status = 0;  // 1 = failure, 0 = censored
  CovariatePath covariates;
};

struct SurvivalDataset {
  std::vector<Subject> subjects;
  Eigen::Index dimension = 1;

  std::size_t size() const { return subjects.size(); }
  bool has_fixed_covariates() const;
};

struct Violation {
  std::string subject;  // empty for dataset-level violations
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const SurvivalDataset& data);

/// Reads `id,time,status,z1,...,zp` (header required). Cells may be
/// double-quoted; blank lines and lines starting with # are skipped.
SurvivalDataset read_dataset_csv(std::istream& in);
SurvivalDataset read_dataset_csv_file(const std::string& path);

/// Convenience constructor for fixed covariates; `z` is n x p.
SurvivalDataset make_dataset(const std::vector<double>& times, const std::vector<int>& status,
                             const Matrix& z, std::vector<std::string> ids = {});

/// One informative failure on the [0,1] grid.
struct GridPoint {
  double t = 0.0;              // i / k_n
  std::size_t subject = 0;     // index into the source dataset
  std::size_t position = 0;    // position of the failing subject in `order`
  double original_time = 0.0;  // X of the failing subject
};

/// The dataset re-indexed on the rank time scale. Immutable once built.
class TransformedDataset {
 public:
  const SurvivalDataset& source() const { return *source_; }
  std::size_t k_n() const { return grid_.size(); }
  Eigen::Index dimension() const { return source_->dimension; }

  const std::vector<GridPoint>& grid() const { return grid_; }
  const std::vector<double>& transformed_times() const { return phi_; }
  const std::vector<std::string>& excluded_failures() const { return excluded_; }

  /// Subject indices sorted by (time, failures first, id).
  const std::vector<std::size_t>& order() const { return order_; }

  /// Covariate of subject at sorted position `pos`, evaluated at grid point i.
  Vector covariate(std::size_t pos, std::size_t grid_index) const;

  /// Fixed-covariate fast path: rows of covariates in sorted order.
  bool fixed_covariates() const { return fixed_; }
  const Matrix& sorted_covariates() const { return z_sorted_; }

  /// Grouped representation for discrete fixed covariates. When present,
  /// `group_counts()(i, g)` is the number of subjects with covariate row
  /// `group_values().row(g)` in the risk set of grid point i.
  bool grouped() const { return group_values_.rows() > 0; }
  const Matrix& group_values() const { return group_values_; }
  const Eigen::MatrixXi& group_counts() const { return group_counts_; }
  Eigen::Index failing_group(std::size_t grid_index) const { return failing_group_[grid_index]; }

 private:
  friend TransformedDataset time_transform(const SurvivalDataset&, const Vector&);
  friend TransformedDataset time_transform(std::shared_ptr<const SurvivalDataset>, const Vector&);

  std::shared_ptr<const SurvivalDataset> source_;
  std::vector<std::size_t> order_;
  std::vector<GridPoint> grid_;
  std::vector<double> phi_;
  std::vector<std::string> excluded_;
  bool fixed_ = true;
  Matrix z_sorted_;
  Matrix group_values_;
  Eigen::MatrixXi group_counts_;
  std::vector<Eigen::Index> failing_group_;
};

/// Subject indices sorted by (time, status with failures first, id).
std::vector<std::size_t> tie_broken_order(const SurvivalDataset& data);

/// Number of failures whose risk-set covariance, at `beta_eval`, passes the
/// positive-definite test. Returns 0 when every risk set is degenerate.
std::size_t count_informative_failures(const SurvivalDataset& data, const Vector& beta_eval);
std::size_t count_informative_failures(const SurvivalDataset& data);

/// The rank time map phi_n with an explicit normaliser k: failures go to
/// Nbar/k and censored subjects are spread uniformly between the images of
/// adjacent failures. Indexed like `data.subjects`.
std::vector<double> rank_time_map(const SurvivalDataset& data, std::size_t k);

/// Throws NoInformativeFailures when k_n = 0.
TransformedDataset time_transform(const SurvivalDataset& data, const Vector& beta_eval);
TransformedDataset time_transform(std::shared_ptr<const SurvivalDataset> data,
                                  const Vector& beta_eval);
TransformedDataset time_transform(const SurvivalDataset& data);

}  // namespace survscore

#include "survscore/survival.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "survscore/errors.hpp"
#include "survscore/moments.hpp"

namespace survscore {

CovariatePath CovariatePath::fixed(Vector values) {
  CovariatePath path;
  path.fixed_ = std::move(values);
  return path;
}

CovariatePath CovariatePath::step(std::vector<std::pair<double, Vector>> steps) {
  if (steps.empty()) throw DomainError("step covariate path needs at least one step");
  CovariatePath path;
  path.fixed_ = steps.front().second;
  if (steps.size() == 1) return path;
  path.steps_ = std::move(steps);
  return path;
}

Vector CovariatePath::at(double time) const {
  if (steps_.empty()) return fixed_;
  // Right-continuous: the last step whose breakpoint is <= time.
  auto it = std::upper_bound(steps_.begin(), steps_.end(), time,
                             [](double t, const auto& s) { return t < s.first; });
  if (it == steps_.begin()) return steps_.front().second;
  return std::prev(it)->second;
}

bool SurvivalDataset::has_fixed_covariates() const {
  return std::all_of(subjects.begin(), subjects.end(),
                     [](const Subject& s) { return s.covariates.is_fixed(); });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    if (!v.subject.empty()) os << "subject " << v.subject << ": ";
    os << v.message << "\n";
  }
  return os.str();
}

ValidationReport validate(const SurvivalDataset& data) {
  ValidationReport report;
  auto add = [&](std::string subject, std::string message) {
    report.violations.push_back({std::move(subject), std::move(message)});
  };

  if (data.dimension < 1) add("", "dimension must be at least 1");
  if (data.subjects.empty()) add("", "empty dataset");

  std::set<std::string> seen;
  bool any_failure = false;
  for (const auto& s : data.subjects) {
    if (!seen.insert(s.id).second) add(s.id, "duplicate id");
    if (!std::isfinite(s.observed_time))
      add(s.id, "non-finite time");
    else if (s.observed_time < 0.0)
      add(s.id, "negative time");
    if (s.status != 0 && s.status != 1) add(s.id, "status must be 0 or 1");
    if (s.status == 1) any_failure = true;

    const auto& path = s.covariates;
    if (path.dimension() != data.dimension) {
      add(s.id, "dimension mismatch");
      continue;
    }
    if (!path.fixed_value().allFinite()) add(s.id, "non-finite covariate");
    const auto& steps = path.steps();
    for (std::size_t k = 0; k < steps.size(); ++k) {
      if (steps[k].second.size() != data.dimension) add(s.id, "dimension mismatch in step path");
      else if (!steps[k].second.allFinite()) add(s.id, "non-finite covariate");
      if (k > 0 && !(steps[k].first > steps[k - 1].first))
        add(s.id, "step breakpoints not strictly increasing");
    }
  }
  if (!data.subjects.empty() && !any_failure) add("", "no failures");
  return report;
}

namespace {

// Comma-separated cells; double-quoted cells may contain commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false, was_quoted = false;
  auto finish = [&] {
    if (!was_quoted) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      cell = b == std::string::npos ? std::string() : cell.substr(b, e - b + 1);
    }
    out.push_back(std::move(cell));
    cell.clear();
    was_quoted = false;
  };
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"' && cell.find_first_not_of(" \t") == std::string::npos) {
      cell.clear();
      quoted = was_quoted = true;
    } else if (ch == ',') {
      finish();
    } else if (!(was_quoted && (ch == '\r' || ch == ' ' || ch == '\t'))) {
      cell += ch;
    }
  }
  if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quoted field");
  finish();
  return out;
}

bool skippable(const std::string& line) {
  const auto b = line.find_first_not_of(" \t\r");
  return b == std::string::npos || line[b] == '#';
}

double parse_double(const std::string& s, std::size_t line, const char* what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty())
    throw InputError("line " + std::to_string(line) + ": cannot parse " + what + " '" + s + "'");
  return v;
}

}  // namespace

SurvivalDataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    header = split_csv_line(line, line_no);
    break;
  }
  if (header.size() < 4 || header[0] != "id" || header[1] != "time" || header[2] != "status")
    throw InputError("CSV header must be id,time,status,z1,...,zp");
  for (std::size_t c = 3; c < header.size(); ++c)
    if (header[c] != "z" + std::to_string(c - 2))
      throw InputError("CSV header column " + std::to_string(c + 1) + " must be z" +
                       std::to_string(c - 2));

  SurvivalDataset data;
  data.dimension = static_cast<Eigen::Index>(header.size() - 3);
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto cells = split_csv_line(line, line_no);
    if (cells.size() != header.size())
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " columns, found " +
                       std::to_string(cells.size()));
    Subject s;
    s.id = cells[0];
    s.observed_time = parse_double(cells[1], line_no, "time");
    if (cells[2] == "1")
      s.status = 1;
    else if (cells[2] == "0")
      s.status = 0;
    else
      throw InputError("line " + std::to_string(line_no) + ": status must be 0 or 1");
    Vector z(data.dimension);
    for (Eigen::Index j = 0; j < data.dimension; ++j)
      z(j) = parse_double(cells[static_cast<std::size_t>(3 + j)], line_no, "covariate");
    s.covariates = CovariatePath::fixed(std::move(z));
    data.subjects.push_back(std::move(s));
  }
  return data;
}

SurvivalDataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_dataset_csv(in);
}

SurvivalDataset make_dataset(const std::vector<double>& times, const std::vector<int>& status,
                             const Matrix& z, std::vector<std::string> ids) {
  const std::size_t n = times.size();
  if (status.size() != n || static_cast<std::size_t>(z.rows()) != n)
    throw DomainError("make_dataset: times, status and covariates differ in length");
  if (!ids.empty() && ids.size() != n) throw DomainError("make_dataset: wrong number of ids");
  SurvivalDataset data;
  data.dimension = z.cols();
  data.subjects.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Subject s;
    s.id = ids.empty() ? std::to_string(i + 1) : ids[i];
    s.observed_time = times[i];
    s.status = status[i];
    s.covariates = CovariatePath::fixed(z.row(static_cast<Eigen::Index>(i)).transpose());
    data.subjects.push_back(std::move(s));
  }
  return data;
}

std::vector<std::size_t> tie_broken_order(const SurvivalDataset& data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = data.subjects[a];
    const auto& sb = data.subjects[b];
    if (sa.observed_time != sb.observed_time) return sa.observed_time < sb.observed_time;
    if (sa.status != sb.status) return sa.status > sb.status;
    return sa.id < sb.id;
  });
  return order;
}

namespace {

struct Layout {
  std::vector<std::size_t> order;
  std::vector<bool> informative;  // by sorted position
  std::size_t k_n = 0;
  bool fixed = true;
  Matrix z_sorted;
};

// Risk-set covariance at the failure in sorted position `pos`.
Matrix risk_cov(const SurvivalDataset& data, const Layout& lay, std::size_t pos,
                const Vector& beta) {
  const std::size_t n = lay.order.size();
  if (lay.fixed) {
    const auto rows = static_cast<Eigen::Index>(n - pos);
    return weighted_moments(lay.z_sorted.bottomRows(rows), beta).cov;
  }
  const double x = data.subjects[lay.order[pos]].observed_time;
  Matrix rows(static_cast<Eigen::Index>(n - pos), data.dimension);
  for (std::size_t q = pos; q < n; ++q)
    rows.row(static_cast<Eigen::Index>(q - pos)) =
        data.subjects[lay.order[q]].covariates.at(x).transpose();
  return weighted_moments(rows, beta).cov;
}

Layout build_layout(const SurvivalDataset& data, const Vector& beta_eval) {
  const ValidationReport report = validate(data);
  if (!report.ok()) throw InputError("invalid dataset:\n" + report.to_string());
  if (beta_eval.size() != data.dimension)
    throw DomainError("evaluation parameter has wrong dimension");

  Layout lay;
  lay.order = tie_broken_order(data);
  const std::size_t n = lay.order.size();
  lay.fixed = data.has_fixed_covariates();
  if (lay.fixed) {
    lay.z_sorted.resize(static_cast<Eigen::Index>(n), data.dimension);
    for (std::size_t pos = 0; pos < n; ++pos)
      lay.z_sorted.row(static_cast<Eigen::Index>(pos)) =
          data.subjects[lay.order[pos]].covariates.fixed_value().transpose();
  }

  lay.informative.assign(n, false);
  if (lay.fixed) {
    // Risk sets are nested, so once a risk set is non-degenerate every
    // earlier one is too: scan failures backwards to the first PD one.
    std::size_t boundary = 0;  // failures at positions < boundary are informative
    for (std::size_t q = n; q-- > 0;) {
      if (data.subjects[lay.order[q]].status != 1) continue;
      if (is_positive_definite(risk_cov(data, lay, q, beta_eval))) {
        boundary = q + 1;
        break;
      }
    }
    for (std::size_t q = 0; q < boundary; ++q)
      lay.informative[q] = data.subjects[lay.order[q]].status == 1;
  } else {
    for (std::size_t q = 0; q < n; ++q)
      if (data.subjects[lay.order[q]].status == 1)
        lay.informative[q] = is_positive_definite(risk_cov(data, lay, q, beta_eval));
  }
  lay.k_n = static_cast<std::size_t>(std::count(lay.informative.begin(), lay.informative.end(), true));
  return lay;
}

// phi_n by sorted position, normaliser k. Censored subjects are spread
// uniformly between the images of adjacent failures; failures after the last
// informative one keep their count-based image above 1.
std::vector<double> phi_by_position(const SurvivalDataset& data, const Layout& lay, std::size_t k) {
  const std::size_t n = lay.order.size();
  std::size_t last_informative = 0;
  bool have_informative = false;
  for (std::size_t q = 0; q < n; ++q)
    if (lay.informative[q]) {
      last_informative = q;
      have_informative = true;
    }

  std::vector<std::size_t> nbar(n);
  std::size_t count = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const bool failure = data.subjects[lay.order[q]].status == 1;
    if (lay.informative[q] || (failure && (!have_informative || q > last_informative))) ++count;
    nbar[q] = count;
  }

  std::vector<double> phi(n);
  const double kd = static_cast<double>(k);
  std::size_t q = 0;
  while (q < n) {
    std::size_t end = q;
    while (end < n && nbar[end] == nbar[q]) ++end;
    const double members = static_cast<double>(end - q);
    for (std::size_t r = q; r < end; ++r) {
      const bool counted_failure =
          data.subjects[lay.order[r]].status == 1 &&
          (lay.informative[r] || !have_informative || r > last_informative);
      const double frac = counted_failure ? 0.0 : static_cast<double>(r - q) / members;
      phi[r] = (static_cast<double>(nbar[r]) + frac) / kd;
    }
    q = end;
  }
  return phi;
}

}  // namespace

std::size_t count_informative_failures(const SurvivalDataset& data, const Vector& beta_eval) {
  return build_layout(data, beta_eval).k_n;
}

std::size_t count_informative_failures(const SurvivalDataset& data) {
  return count_informative_failures(data, Vector::Zero(data.dimension));
}

std::vector<double> rank_time_map(const SurvivalDataset& data, std::size_t k) {
  if (k == 0) throw DomainError("rank_time_map: normaliser must be positive");
  const Layout lay = build_layout(data, Vector::Zero(data.dimension));
  const std::vector<double> by_pos = phi_by_position(data, lay, k);
  std::vector<double> phi(data.size());
  for (std::size_t q = 0; q < lay.order.size(); ++q) phi[lay.order[q]] = by_pos[q];
  return phi;
}

TransformedDataset time_transform(std::shared_ptr<const SurvivalDataset> source,
                                  const Vector& beta_eval) {
  const SurvivalDataset& data = *source;
  Layout lay = build_layout(data, beta_eval);
  if (lay.k_n == 0) throw NoInformativeFailures();

  TransformedDataset out;
  out.source_ = std::move(source);
  const std::size_t n = lay.order.size();
  const std::vector<double> by_pos = phi_by_position(data, lay, lay.k_n);

  out.phi_.resize(n);
  std::size_t rank = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t subject = lay.order[q];
    out.phi_[subject] = by_pos[q];
    if (lay.informative[q]) {
      ++rank;
      out.grid_.push_back(GridPoint{static_cast<double>(rank) / static_cast<double>(lay.k_n),
                                    subject, q, data.subjects[subject].observed_time});
    } else if (data.subjects[subject].status == 1) {
      out.excluded_.push_back(data.subjects[subject].id);
    }
  }

  out.fixed_ = lay.fixed;
  if (lay.fixed) {
    // Discrete covariates: collapse the risk sets onto distinct rows.
    constexpr std::size_t kMaxGroups = 64;
    std::map<std::vector<double>, Eigen::Index> groups;
    std::vector<Eigen::Index> group_of(n);
    bool grouped = true;
    for (std::size_t q = 0; q < n && grouped; ++q) {
      const auto row = lay.z_sorted.row(static_cast<Eigen::Index>(q));
      std::vector<double> key(static_cast<std::size_t>(row.size()));
      for (Eigen::Index j = 0; j < row.size(); ++j) key[static_cast<std::size_t>(j)] = row(j);
      auto [it, inserted] = groups.emplace(std::move(key), static_cast<Eigen::Index>(groups.size()));
      group_of[q] = it->second;
      if (groups.size() > kMaxGroups || groups.size() * 4 > n + 4) grouped = false;
    }
    if (grouped) {
      const auto g = static_cast<Eigen::Index>(groups.size());
      out.group_values_.resize(g, data.dimension);
      for (const auto& [key, id] : groups)
        for (Eigen::Index j = 0; j < data.dimension; ++j)
          out.group_values_(id, j) = key[static_cast<std::size_t>(j)];
      out.group_counts_.setZero(static_cast<Eigen::Index>(lay.k_n), g);
      Eigen::VectorXi suffix = Eigen::VectorXi::Zero(g);
      std::size_t next = out.grid_.size();
      for (std::size_t q = n; q-- > 0;) {
        ++suffix(group_of[q]);
        if (next > 0 && out.grid_[next - 1].position == q) {
          --next;
          out.group_counts_.row(static_cast<Eigen::Index>(next)) = suffix.transpose();
        }
      }
      out.failing_group_.reserve(lay.k_n);
      for (const auto& gp : out.grid_) out.failing_group_.push_back(group_of[gp.position]);
    }
    out.z_sorted_ = std::move(lay.z_sorted);
  }
  out.order_ = std::move(lay.order);
  return out;
}

TransformedDataset time_transform(const SurvivalDataset& data, const Vector& beta_eval) {
  return time_transform(std::make_shared<const SurvivalDataset>(data), beta_eval);
}

TransformedDataset time_transform(const SurvivalDataset& data) {
  return time_transform(data, Vector::Zero(data.dimension));
}

Vector TransformedDataset::covariate(std::size_t pos, std::size_t grid_index) const {
  if (fixed_) return z_sorted_.row(static_cast<Eigen::Index>(pos)).transpose();
  return source_->subjects[order_[pos]].covariates.at(grid_[grid_index].original_time);
}

}  // namespace survscore

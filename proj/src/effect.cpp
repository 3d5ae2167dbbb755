#include "survscore/effect.hpp"

#include <cmath>
#include <sstream>

#include "survscore/errors.hpp"

namespace survscore {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t table_segment(const basis::Table& tab, double t) {
  std::size_t k = 0;
  while (k < tab.breaks.size() && t > tab.breaks[k]) ++k;
  return k;
}

}  // namespace

double evaluate_basis(const Basis& b, double t) {
  return std::visit(
      overloaded{
          [](const basis::Constant&) { return 1.0; },
          [t](const basis::Changepoint& c) { return t <= c.t0 ? 1.0 : c.ratio; },
          [t](const basis::Power& pw) { return std::pow(1.0 - t, pw.k); },
          [t](const basis::OneMinusSquare&) { return 1.0 - t * t; },
          [t](const basis::LogT&) { return std::log(t); },
          [t](const basis::Table& tab) { return tab.values[table_segment(tab, t)]; },
          [t](const basis::Custom& c) { return c.shape(t); },
      },
      b);
}

double integrate_basis(const Basis& b, double t) {
  return std::visit(
      overloaded{
          [t](const basis::Constant&) { return t; },
          [t](const basis::Changepoint& c) {
            return std::min(t, c.t0) + c.ratio * std::max(0.0, t - c.t0);
          },
          [t](const basis::Power& pw) {
            return (1.0 - std::pow(1.0 - t, pw.k + 1.0)) / (pw.k + 1.0);
          },
          [t](const basis::OneMinusSquare&) { return t - t * t * t / 3.0; },
          [t](const basis::LogT&) { return t > 0.0 ? t * std::log(t) - t : 0.0; },
          [t](const basis::Table& tab) {
            double acc = 0.0;
            double lo = 0.0;
            for (std::size_t k = 0; k <= tab.breaks.size(); ++k) {
              const double hi = k < tab.breaks.size() ? tab.breaks[k] : t;
              const double seg_hi = std::min(hi, t);
              if (seg_hi > lo) acc += tab.values[k] * (seg_hi - lo);
              if (hi >= t) break;
              lo = hi;
            }
            return acc;
          },
          [t](const basis::Custom& c) {
            constexpr int kPoints = 1024;
            if (t <= 0.0) return 0.0;
            const double h = t / kPoints;
            double acc = 0.5 * (c.shape(0.0) + c.shape(t));
            for (int k = 1; k < kPoints; ++k) acc += c.shape(k * h);
            return acc * h;
          },
      },
      b);
}

std::string describe_basis(const Basis& b) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const basis::Constant&) { os << "constant"; },
                 [&](const basis::Changepoint& c) {
                   os << "changepoint(t0=" << c.t0 << ",ratio=" << c.ratio << ")";
                 },
                 [&](const basis::Power& pw) { os << "power(k=" << pw.k << ")"; },
                 [&](const basis::OneMinusSquare&) { os << "one_minus_sq"; },
                 [&](const basis::LogT&) { os << "log_t"; },
                 [&](const basis::Table& tab) {
                   os << "table(";
                   for (std::size_t k = 0; k < tab.values.size(); ++k) {
                     if (k > 0) os << "|" << tab.breaks[k - 1] << "|";
                     os << tab.values[k];
                   }
                   os << ")";
                 },
                 [&](const basis::Custom& c) { os << c.label; },
             },
             b);
  return os.str();
}

bool is_constant_basis(const Basis& b) { return std::holds_alternative<basis::Constant>(b); }

TemporalEffect::TemporalEffect(Vector loadings, std::vector<Basis> shapes)
    : loadings_(std::move(loadings)), shapes_(std::move(shapes)) {
  if (static_cast<Eigen::Index>(shapes_.size()) != loadings_.size())
    throw DomainError("TemporalEffect: one basis per component required");
  for (const auto& s : shapes_) {
    if (const auto* tab = std::get_if<basis::Table>(&s)) {
      if (tab->values.size() != tab->breaks.size() + 1)
        throw DomainError("table basis: values must have one more entry than breaks");
      for (std::size_t k = 1; k < tab->breaks.size(); ++k)
        if (!(tab->breaks[k] > tab->breaks[k - 1]))
          throw DomainError("table basis: breaks must be strictly increasing");
    }
    if (const auto* c = std::get_if<basis::Custom>(&s); c && !c->shape)
      throw DomainError("custom basis without a shape function");
  }
}

TemporalEffect TemporalEffect::constant(Vector loadings) {
  std::vector<Basis> shapes(static_cast<std::size_t>(loadings.size()), basis::Constant{});
  return TemporalEffect(std::move(loadings), std::move(shapes));
}

TemporalEffect TemporalEffect::zero(Eigen::Index p) { return constant(Vector::Zero(p)); }

Vector TemporalEffect::shape_at(double t) const {
  Vector out(dimension());
  for (Eigen::Index j = 0; j < dimension(); ++j)
    out(j) = evaluate_basis(shapes_[static_cast<std::size_t>(j)], t);
  return out;
}

Vector TemporalEffect::operator()(double t) const {
  Vector out(dimension());
  for (Eigen::Index j = 0; j < dimension(); ++j)
    out(j) = loadings_(j) == 0.0
                 ? 0.0
                 : loadings_(j) * evaluate_basis(shapes_[static_cast<std::size_t>(j)], t);
  return out;
}

Vector TemporalEffect::integral(double t) const {
  Vector out(dimension());
  for (Eigen::Index j = 0; j < dimension(); ++j)
    out(j) = loadings_(j) == 0.0
                 ? 0.0
                 : loadings_(j) * integrate_basis(shapes_[static_cast<std::size_t>(j)], t);
  return out;
}

TemporalEffect TemporalEffect::with_loadings(Vector loadings) const {
  return TemporalEffect(std::move(loadings), shapes_);
}

bool TemporalEffect::is_zero() const { return loadings_.size() == 0 || loadings_.isZero(0.0); }

std::string TemporalEffect::describe() const {
  std::ostringstream os;
  for (Eigen::Index j = 0; j < dimension(); ++j) {
    if (j > 0) os << "; ";
    os << loadings_(j) << "*" << describe_basis(shapes_[static_cast<std::size_t>(j)]);
  }
  return os.str();
}

}  // namespace survscore

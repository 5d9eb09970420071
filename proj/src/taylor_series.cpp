#include "focalfluc/taylor_series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace focalfluc {

TaylorSeries::TaylorSeries(std::size_t size, double constant) : c_(size, 0.0) {
  if (size > 0) c_[0] = constant;
}

TaylorSeries TaylorSeries::variable(std::size_t size, double value) {
  TaylorSeries s(size, value);
  if (size > 1) s.c_[1] = 1.0;
  return s;
}

TaylorSeries& TaylorSeries::operator+=(const TaylorSeries& o) {
  c_.resize(std::min(c_.size(), o.c_.size()));
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

TaylorSeries& TaylorSeries::operator-=(const TaylorSeries& o) {
  c_.resize(std::min(c_.size(), o.c_.size()));
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

TaylorSeries& TaylorSeries::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

TaylorSeries& TaylorSeries::operator+=(double s) {
  if (!c_.empty()) c_[0] += s;
  return *this;
}

TaylorSeries operator*(const TaylorSeries& a, const TaylorSeries& b) {
  const std::size_t n = std::min(a.size(), b.size());
  TaylorSeries r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.c_[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

TaylorSeries TaylorSeries::reciprocal() const {
  if (c_.empty() || c_[0] == 0.0)
    throw std::domain_error("TaylorSeries::reciprocal: zero constant term");
  const std::size_t n = c_.size();
  TaylorSeries r(n);
  r.c_[0] = 1.0 / c_[0];
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
    r.c_[k] = -acc * r.c_[0];
  }
  return r;
}

TaylorSeries operator/(const TaylorSeries& a, const TaylorSeries& b) {
  return a * b.reciprocal();
}

TaylorSeries TaylorSeries::pow(int n) const {
  if (n < 0) return reciprocal().pow(-n);
  TaylorSeries result(c_.size(), 1.0);
  TaylorSeries base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

TaylorSeries TaylorSeries::shift_down() const {
  if (c_.empty()) return {};
  return TaylorSeries(std::vector<double>(c_.begin() + 1, c_.end()));
}

TaylorSeries TaylorSeries::resized(std::size_t size) const {
  std::vector<double> v(c_);
  v.resize(size, 0.0);
  return TaylorSeries(std::move(v));
}

double TaylorSeries::evaluate(double t) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double TaylorSeries::derivative(double t, int order) const {
  // d^j/dt^j Σ c_k t^k = Σ_{k≥j} c_k k!/(k−j)! t^{k−j}
  double acc = 0.0;
  for (std::size_t k = c_.size(); k-- > static_cast<std::size_t>(order);) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= static_cast<double>(k - i);
    acc = acc * t + c_[k] * falling;
  }
  return acc;
}

std::pair<TaylorSeries, TaylorSeries> sin_cos(const TaylorSeries& s) {
  const std::size_t n = s.size();
  TaylorSeries sn(n), cs(n);
  if (n == 0) return {sn, cs};
  sn[0] = std::sin(s[0]);
  cs[0] = std::cos(s[0]);
  // k·sin_k = Σ j u_j cos_{k−j},  k·cos_k = −Σ j u_j sin_{k−j}
  for (std::size_t k = 1; k < n; ++k) {
    double as = 0.0, ac = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      as += static_cast<double>(j) * s[j] * cs[k - j];
      ac += static_cast<double>(j) * s[j] * sn[k - j];
    }
    sn[k] = as / static_cast<double>(k);
    cs[k] = -ac / static_cast<double>(k);
  }
  return {sn, cs};
}

TaylorSeries compose(std::span<const double> outer, const TaylorSeries& inner) {
  const std::size_t n = inner.size();
  TaylorSeries acc(n);
  for (std::size_t k = outer.size(); k-- > 0;) {
    acc = acc * inner;
    acc += outer[k];
  }
  return acc;
}

}  // namespace focalfluc

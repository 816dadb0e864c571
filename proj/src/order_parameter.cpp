#include "parisi/order_parameter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parisi/errors.hpp"

namespace parisi {

namespace {

void check_sequence(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0 || v[i] > 1.0)
      throw InvalidOrderParameter(
          std::string("model: ") + name + " out of [0,1] at index " + std::to_string(i),
          static_cast<int>(i));
    if (i > 0 && v[i] < v[i - 1])
      throw InvalidOrderParameter(
          std::string("model: non-monotone ") + name + " at index " + std::to_string(i - 1),
          static_cast<int>(i - 1));
  }
}

}  // namespace

OrderParameter::OrderParameter(int k, std::vector<double> q, std::vector<double> m) {
  if (k < 0) throw InvalidOrderParameter("model: negative k", 0);
  if (static_cast<int>(q.size()) != k)
    throw InvalidOrderParameter("model: q length does not match k", 0);
  const int expected_m = k > 0 ? k - 1 : 0;
  if (static_cast<int>(m.size()) != expected_m)
    throw InvalidOrderParameter("model: m length does not match k", 0);
  check_sequence(q, "q");
  check_sequence(m, "m");

  if (k == 0) {
    positions_ = {0.0};
    cumulative_ = {1.0};
    return;
  }
  positions_ = std::move(q);
  cumulative_ = std::move(m);
  cumulative_.push_back(1.0);
  normalize();
}

OrderParameter OrderParameter::replica_symmetric() { return single_atom(0.0); }

OrderParameter OrderParameter::dirac_at_one() { return single_atom(1.0); }

OrderParameter OrderParameter::single_atom(double q) {
  return from_atoms({q}, {1.0});
}

OrderParameter OrderParameter::from_atoms(std::vector<double> positions,
                                          std::vector<double> cumulative) {
  if (positions.empty() || positions.size() != cumulative.size())
    throw InvalidOrderParameter("model: inconsistent atom arrays", 0);
  check_sequence(positions, "q");
  check_sequence(cumulative, "m");
  if (cumulative.back() != 1.0)
    throw InvalidOrderParameter("model: cumulative masses must end at 1",
                                static_cast<int>(cumulative.size()) - 1);
  OrderParameter op;
  op.positions_ = std::move(positions);
  op.cumulative_ = std::move(cumulative);
  op.normalize();
  return op;
}

void OrderParameter::normalize() {
  // Merge atoms sharing a position (keep the larger cumulative, i.e. the
  // summed mass), then drop atoms of zero mass.
  std::vector<double> pos, cum;
  pos.reserve(positions_.size());
  cum.reserve(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!pos.empty() && positions_[i] == pos.back()) {
      cum.back() = cumulative_[i];
    } else {
      pos.push_back(positions_[i]);
      cum.push_back(cumulative_[i]);
    }
  }
  std::vector<double> pos2, cum2;
  pos2.reserve(pos.size());
  cum2.reserve(pos.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (cum[i] > prev) {
      pos2.push_back(pos[i]);
      cum2.push_back(cum[i]);
      prev = cum[i];
    }
  }
  positions_ = std::move(pos2);
  cumulative_ = std::move(cum2);
  // All mass dropped can only happen if every cumulative was 0, which the
  // trailing 1 rules out; guard anyway.
  if (positions_.empty()) {
    positions_ = {0.0};
    cumulative_ = {1.0};
  }
}

double OrderParameter::mass(int l) const {
  const auto i = static_cast<std::size_t>(l);
  return l == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
}

double OrderParameter::alpha(double s) const {
  if (s >= 1.0) return 1.0;
  // Largest atom position <= s (right-continuous).
  auto it = std::upper_bound(positions_.begin(), positions_.end(), s);
  if (it == positions_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - positions_.begin()) - 1];
}

std::vector<double> OrderParameter::level_boundaries() const {
  std::vector<double> b;
  b.reserve(positions_.size() + 2);
  b.push_back(0.0);
  b.insert(b.end(), positions_.begin(), positions_.end());
  b.push_back(1.0);
  return b;
}

std::vector<double> OrderParameter::level_values() const {
  std::vector<double> m;
  m.reserve(cumulative_.size() + 1);
  m.push_back(0.0);
  m.insert(m.end(), cumulative_.begin(), cumulative_.end());
  return m;
}

AlphaMoments alpha_moments(const OrderParameter& op, const Mixture& mix) {
  AlphaMoments a;
  const auto b = op.level_boundaries();
  const auto m = op.level_values();
  for (std::size_t l = 0; l + 1 < b.size(); ++l) {
    a.int_alpha_xi_prime += m[l] * (mix.xi(b[l + 1]) - mix.xi(b[l]));
    a.int_alpha_s_xi2 += m[l] * (mix.s_xi_second_antiderivative(b[l + 1]) -
                                 mix.s_xi_second_antiderivative(b[l]));
  }
  for (int l = 0; l < op.k(); ++l) {
    const double q = op.atom(l), w = op.mass(l);
    a.int_xi_dalpha += w * mix.xi(q);
    a.int_s_xiprime_dalpha += w * q * mix.xi_prime(q);
  }
  return a;
}

OrderParameter blend(const OrderParameter& a, const OrderParameter& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidParameter("model: blend weight outside [0,1]");
  std::vector<double> pos;
  pos.reserve(static_cast<std::size_t>(a.k() + b.k()));
  pos.insert(pos.end(), a.atoms().begin(), a.atoms().end());
  pos.insert(pos.end(), b.atoms().begin(), b.atoms().end());
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::vector<double> cum(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i)
    cum[i] = (1.0 - t) * a.alpha(pos[i]) + t * b.alpha(pos[i]);
  cum.back() = 1.0;
  return OrderParameter::from_atoms(std::move(pos), std::move(cum));
}

}  // namespace parisi

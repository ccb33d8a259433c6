#include "remest/source_model.hpp"

#include <algorithm>
#include <cmath>

#include "remest/errors.hpp"

namespace remest {

namespace {
constexpr double kStochasticTol = 1e-12;
}

MarkovSource::MarkovSource(std::vector<double> tail, double eps_tail, bool check_head)
    : tail_(std::move(tail)), eps_tail_(eps_tail) {
  if (tail_.size() < 2 || !(tail_[1] > 0.0))
    throw AssumptionError("source tail needs p_1 > 0");
  for (double v : tail_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw AssumptionError("source tail coefficients must be non-negative");
  std::size_t from = check_head ? 0 : 1;
  for (std::size_t n = from; n + 1 < tail_.size(); ++n)
    if (tail_[n] < tail_[n + 1])
      throw AssumptionError("source tail must be non-increasing (violated at p_" +
                            std::to_string(n + 1) + ")");
  double mass = tail_[0];
  for (std::size_t n = 1; n < tail_.size(); ++n) mass += 2.0 * tail_[n];
  if (std::abs(mass + eps_tail_ - 1.0) > kStochasticTol)
    throw NormalizationError("row mass p_0 + 2*sum p_n = " + std::to_string(mass) +
                             " is not 1 within 1e-12");
}

MarkovSource MarkovSource::birth_death(double p) {
  if (!(p > 0.0) || !(p < 0.5))
    throw DomainError("birth-death parameter must lie in (0, 1/2)");
  return MarkovSource({1.0 - 2.0 * p, p}, 0.0, /*check_head=*/false);
}

MarkovSource MarkovSource::banded(std::vector<double> tail) {
  return MarkovSource(std::move(tail), 0.0, /*check_head=*/true);
}

MarkovSource MarkovSource::truncated(const std::function<double(int)>& generator, int radius) {
  if (radius < 1) throw DomainError("truncation radius must be >= 1");
  std::vector<double> tail(static_cast<std::size_t>(radius) + 1);
  for (int n = 0; n <= radius; ++n) tail[static_cast<std::size_t>(n)] = generator(n);
  double mass = tail[0];
  for (int n = 1; n <= radius; ++n) mass += 2.0 * tail[static_cast<std::size_t>(n)];
  double eps = 1.0 - mass;
  if (eps < -kStochasticTol)
    throw NormalizationError("generator mass exceeds 1 at radius " + std::to_string(radius));
  return MarkovSource(std::move(tail), std::max(eps, 0.0), /*check_head=*/true);
}

double MarkovSource::exit_mass(int k, int j) const {
  // From offset j in {-(k-1)..k-1}: steps of size >= k-j leave to the right,
  // steps of size >= k+j leave to the left. Truncated tail mass also counts.
  double s = eps_tail_;
  int b = band();
  for (int n = std::max(k - j, 1); n <= b; ++n) s += tail_[static_cast<std::size_t>(n)];
  for (int n = std::max(k + j, 1); n <= b; ++n) s += tail_[static_cast<std::size_t>(n)];
  return s;
}

Distortion::Distortion(DistortionKind kind, double exponent, std::vector<double> values)
    : kind_(kind), exponent_(exponent), values_(std::move(values)) {}

Distortion Distortion::absolute_error() { return Distortion(DistortionKind::Absolute, 1.0, {}); }

Distortion Distortion::hamming() { return Distortion(DistortionKind::Hamming, 0.0, {}); }

Distortion Distortion::power(double exponent) {
  if (!(exponent > 0.0)) throw DomainError("power distortion needs a positive exponent");
  return Distortion(DistortionKind::Power, exponent, {});
}

Distortion Distortion::table(std::vector<double> values) {
  if (values.size() < 2) throw DomainError("table distortion needs values for at least 0..1");
  if (values[0] != 0.0) throw AssumptionError("distortion must satisfy d(0) = 0");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw AssumptionError("distortion must be positive away from 0");
    if (values[i] < values[i - 1])
      throw AssumptionError("distortion table must be non-decreasing");
  }
  return Distortion(DistortionKind::Table, 0.0, std::move(values));
}

double Distortion::operator()(long long e) const {
  long long a = e < 0 ? -e : e;
  switch (kind_) {
    case DistortionKind::Absolute:
      return static_cast<double>(a);
    case DistortionKind::Hamming:
      return a == 0 ? 0.0 : 1.0;
    case DistortionKind::Power:
      return a == 0 ? 0.0 : std::pow(static_cast<double>(a), exponent_);
    case DistortionKind::Table: {
      std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(a), values_.size() - 1);
      return values_[idx];
    }
  }
  return 0.0;
}

long long Distortion::cap_at() const {
  return kind_ == DistortionKind::Table ? static_cast<long long>(values_.size()) - 1 : -1;
}

AssumptionReport check_assumptions(const MarkovSource& source, const Distortion& d,
                                   int radius, double lambda) {
  if (radius < 1) throw DomainError("assumption check radius must be >= 1");
  AssumptionReport rep;
  rep.checked_range = radius;

  const auto& tail = source.tail_coeffs();
  rep.a1_ok = tail.size() >= 2 && tail[1] > 0.0;
  for (std::size_t n = 0; n + 1 < tail.size() && rep.a1_ok; ++n)
    if (tail[n] < tail[n + 1]) rep.a1_ok = false;
  for (double v : tail)
    if (!(v >= 0.0)) rep.a1_ok = false;

  rep.a2a_ok = true;
  rep.a2b_ok = d(0) == 0.0;
  double prev = d(0);
  for (long long e = 1; e <= radius; ++e) {
    double v = d(e);
    if (v != d(-e)) rep.a2a_ok = false;
    if (v < prev) rep.a2a_ok = false;
    if (!(v > 0.0)) rep.a2b_ok = false;
    prev = v;
  }

  // Built-in weight function only for the birth-death law with absolute error.
  bool is_bd = source.band() == 1 && source.tail_mass_bound() == 0.0;
  if (is_bd && d.kind() == DistortionKind::Absolute && lambda > 0.0) {
    double p = source.tail(1);
    double mu1 = 1.0;
    double mu2 = std::max(1.0 - 2.0 * p + 2.0 * p / lambda, 2.0);
    auto w = [&](long long e) { return std::max(lambda, std::abs(static_cast<double>(e))); };
    bool ok = true;
    double row0 = p * w(-1) + (1.0 - 2.0 * p) * w(0) + p * w(1);
    for (long long e = -radius; e <= radius && ok; ++e) {
      if (std::max(lambda, d(e)) > mu1 * w(e) * (1.0 + 1e-12)) ok = false;
      double rowe = p * w(e - 1) + (1.0 - 2.0 * p) * w(e) + p * w(e + 1);
      if (std::max(rowe, row0) > mu2 * w(e) * (1.0 + 1e-12)) ok = false;
    }
    if (ok)
      rep.a3_witness = "w(e) = max(lambda, |e|), mu1 = 1, mu2 = max(1 - 2p + 2p/lambda, 2)";
  }
  return rep;
}

}  // namespace remest

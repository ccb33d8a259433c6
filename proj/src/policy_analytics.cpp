#include "remest/policy_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "remest/errors.hpp"
#include "remest/linalg.hpp"
#include "remest/step_sampler.hpp"

namespace remest {

namespace {

void require_k_positive(int k) {
  if (k < 1) throw DomainError("threshold k must be >= 1 (the silent region is empty at k = 0)");
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !(beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
}

BandedMatrix system_matrix(const MarkovSource& source, int k, double beta) {
  const std::size_t n = static_cast<std::size_t>(2 * k - 1);
  const std::size_t bw = std::min<std::size_t>(static_cast<std::size_t>(source.band()), n - 1);
  BandedMatrix a(n, bw);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t jlo = i >= bw ? i - bw : 0;
    std::size_t jhi = std::min(n - 1, i + bw);
    for (std::size_t j = jlo; j <= jhi; ++j) {
      int dist = static_cast<int>(j > i ? j - i : i - j);
      double v = (i == j ? 1.0 : 0.0) - beta * source.tail(dist);
      a.set(i, j, v);
    }
  }
  return a;
}

}  // namespace

SubMatrix::SubMatrix(int k, std::vector<double> data) : k_(k), data_(std::move(data)) {}

double SubMatrix::at(int i, int j) const {
  if (std::abs(i) > k_ - 1 || std::abs(j) > k_ - 1)
    throw DomainError("submatrix index outside the silent region");
  std::size_t n = dim();
  return data_[static_cast<std::size_t>(i + k_ - 1) * n + static_cast<std::size_t>(j + k_ - 1)];
}

SubMatrix submatrix(const MarkovSource& source, int k) {
  require_k_positive(k);
  std::size_t n = static_cast<std::size_t>(2 * k - 1);
  std::vector<double> data(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int dist = static_cast<int>(j > i ? j - i : i - j);
      data[i * n + j] = source.tail(dist);
    }
  return SubMatrix(k, std::move(data));
}

std::vector<double> q_row_zero(const MarkovSource& source, int k, double beta) {
  require_k_positive(k);
  require_beta(beta);
  const std::size_t n = static_cast<std::size_t>(2 * k - 1);
  BandedMatrix a = system_matrix(source, k, beta);
  std::vector<double> y(n, 0.0);
  y[static_cast<std::size_t>(k - 1)] = 1.0;

  BandedLU lu(a);
  lu.solve_transpose(y);

  std::vector<double> r = a.apply_transpose(y);
  r[static_cast<std::size_t>(k - 1)] -= 1.0;
  double res = 0.0;
  for (double v : r) res = std::max(res, std::abs(v));
  if (!(res < 1e-8))
    throw NumericError("q-row solve residual " + std::to_string(res) + " out of tolerance", res);
  return y;
}

LMValues lm_values(const MarkovSource& source, const Distortion& d, int k, double beta) {
  std::vector<double> y = q_row_zero(source, k, beta);
  LMValues lm;
  for (int j = -(k - 1); j <= k - 1; ++j) {
    double q = y[static_cast<std::size_t>(j + k - 1)];
    lm.L += q * d(j);
    lm.M += q;
  }
  return lm;
}

PolicyMetrics policy_metrics(const MarkovSource& source, const Distortion& d, int k, double beta) {
  if (k < 0) throw DomainError("threshold k must be >= 0");
  require_beta(beta);
  PolicyMetrics pm;
  pm.k = k;
  pm.beta = beta;
  if (k == 0) return pm;  // always transmit: D = 0, N = 1

  std::vector<double> y = q_row_zero(source, k, beta);
  double exit_weighted = 0.0;
  pm.L = 0.0;
  pm.M = 0.0;
  for (int j = -(k - 1); j <= k - 1; ++j) {
    double q = y[static_cast<std::size_t>(j + k - 1)];
    pm.L += q * d(j);
    pm.M += q;
    exit_weighted += q * source.exit_mass(k, j);
  }
  pm.D = pm.L / pm.M;
  // N = 1/M - (1-beta) algebraically; evaluated through the one-step exit
  // mass, beta <y, exit>/M, which stays accurate when N << 1-beta.
  pm.N = beta * exit_weighted / pm.M;
  return pm;
}

LMEstimate lm_montecarlo(const MarkovSource& source, const Distortion& d, int k, double beta,
                         std::size_t episodes, std::uint64_t seed,
                         std::size_t max_steps, unsigned workers) {
  require_k_positive(k);
  require_beta(beta);
  if (episodes < 1) throw DomainError("at least one episode required");

  StepSampler step(source);
  std::vector<double> lvals(episodes), mvals(episodes);
  std::vector<std::uint8_t> was_capped(episodes, 0);

  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ep = lo; ep < hi; ++ep) {
      std::mt19937_64 rng(sub_seed(seed, ep));
      long long e = 0;
      double lsum = 0.0, msum = 0.0, bt = 1.0;
      std::size_t t = 0;
      for (;; ++t) {
        if (t >= max_steps) { was_capped[ep] = 1; break; }
        lsum += bt * d(e);
        msum += bt;
        bt *= beta;
        e += step(rng);
        if (e >= k || e <= -k) break;
      }
      lvals[ep] = lsum;
      mvals[ep] = msum;
    }
  };

  unsigned nw = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  nw = static_cast<unsigned>(std::min<std::size_t>(nw, episodes));
  if (nw <= 1) {
    run_range(0, episodes);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (episodes + nw - 1) / nw;
    for (unsigned w = 0; w < nw; ++w) {
      std::size_t lo = static_cast<std::size_t>(w) * chunk;
      std::size_t hi = std::min(episodes, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Merge in episode order so results do not depend on the worker count.
  LMEstimate est;
  est.episodes = episodes;
  long double lsum = 0.0L, msum = 0.0L;
  std::size_t used = 0;
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    if (was_capped[ep]) { ++est.capped; continue; }
    lsum += lvals[ep];
    msum += mvals[ep];
    ++used;
  }
  if (used == 0) throw NumericError("all Monte Carlo episodes hit the step cap", 0.0);
  est.L_hat = static_cast<double>(lsum / used);
  est.M_hat = static_cast<double>(msum / used);
  long double lvar = 0.0L, mvar = 0.0L;
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    if (was_capped[ep]) continue;
    long double dl = lvals[ep] - est.L_hat;
    long double dm = mvals[ep] - est.M_hat;
    lvar += dl * dl;
    mvar += dm * dm;
  }
  if (used > 1) {
    est.L_se = std::sqrt(static_cast<double>(lvar / (used - 1) / used));
    est.M_se = std::sqrt(static_cast<double>(mvar / (used - 1) / used));
  }
  return est;
}

}  // namespace remest

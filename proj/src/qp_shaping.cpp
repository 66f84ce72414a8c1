#include "interleave/qp_shaping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "interleave/errors.hpp"

namespace interleave {
namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_shapes(std::span<const double> a, std::span<const double> b, std::span<const int> labels) {
  if (a.size() != b.size() || a.size() != labels.size()) {
    throw InvariantViolation("rewards, scores and labels must have equal length");
  }
}

bool already_feasible(std::span<const double> s, std::span<const int> labels, double margin) {
  const double m = mean_of(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (labels[i] ? s[i] - m < margin : s[i] - m > -margin) return false;
  }
  return true;
}

// Deviation of sample i at multiplier nu.
double deviation(double t, int label, double margin, double nu) {
  return label ? std::max(t - nu, margin) : std::min(t - nu, -margin);
}

}  // namespace

std::vector<double> shape_rewards_qp(std::span<const double> scores, std::span<const int> labels,
                                     double margin, double kkt_tol) {
  const std::size_t n = scores.size();
  if (labels.size() != n) throw InvariantViolation("scores and labels must have equal length");
  if (n < 2) throw GroupTooSmall("shaping needs at least two samples");
  if (!(margin > 0)) throw ConfigError("shaping margin must be > 0");
  const auto correct = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](int g) { return g != 0; }));
  if (correct == 0 || correct == n) {
    throw Infeasible("shaping constraints are infeasible for homogeneous labels");
  }

  if (already_feasible(scores, labels, margin)) return {scores.begin(), scores.end()};

  const double m = mean_of(scores);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = scores[i] - m;

  // Correct i is free (unclamped) for nu <= t_i - margin; incorrect i is
  // free for nu >= t_i + margin.
  std::vector<double> breaks(n);
  for (std::size_t i = 0; i < n; ++i) breaks[i] = labels[i] ? t[i] - margin : t[i] + margin;
  std::sort(breaks.begin(), breaks.end());

  auto total = [&](double nu) {
    double f = 0;
    for (std::size_t i = 0; i < n; ++i) f += deviation(t[i], labels[i], margin, nu);
    return f;
  };

  // sum D(nu) is continuous and non-increasing; +inf at -inf (some correct
  // sample is free there) and -inf at +inf. Locate the interval that holds
  // its root, then solve the linear piece exactly.
  std::size_t hi = 0;
  while (hi < n && total(breaks[hi]) > 0) ++hi;
  double lo_nu, hi_nu;
  if (hi == 0) {
    lo_nu = -std::numeric_limits<double>::infinity();
    hi_nu = breaks[0];
  } else if (hi == n) {
    lo_nu = breaks[n - 1];
    hi_nu = std::numeric_limits<double>::infinity();
  } else {
    lo_nu = breaks[hi - 1];
    hi_nu = breaks[hi];
  }
  double probe;
  if (std::isinf(lo_nu)) probe = hi_nu - 1.0;
  else if (std::isinf(hi_nu)) probe = lo_nu + 1.0;
  else probe = 0.5 * (lo_nu + hi_nu);

  // Active set on the open interval: clamped samples contribute a constant.
  double clamped_sum = 0;
  double free_sum = 0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_free = labels[i] ? probe <= t[i] - margin : probe >= t[i] + margin;
    if (is_free) {
      free_sum += t[i];
      ++free_count;
    } else {
      clamped_sum += labels[i] ? margin : -margin;
    }
  }
  double nu;
  if (free_count == 0) {
    // Every sample sits on its bound; D does not depend on nu here.
    nu = std::isinf(lo_nu) ? hi_nu : lo_nu;
  } else {
    nu = (clamped_sum + free_sum) / static_cast<double>(free_count);
    nu = std::clamp(nu, lo_nu, hi_nu);
  }

  std::vector<double> rewards(n);
  for (std::size_t i = 0; i < n; ++i) rewards[i] = m + deviation(t[i], labels[i], margin, nu);

  const double residual = kkt_residual(rewards, scores, labels, margin, kkt_tol);
  if (!(residual <= kkt_tol)) {
    throw NumericalFailure("shaping KKT residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return rewards;
}

double kkt_residual(std::span<const double> rewards, std::span<const double> scores,
                    std::span<const int> labels, double margin, double active_tol) {
  check_shapes(rewards, scores, labels);
  const std::size_t n = rewards.size();
  if (n == 0) return 0.0;
  const double rbar = mean_of(rewards);

  // Stationarity: 2 d_i = lambda_i s_i - c, with s_i = +1/-1 for correct /
  // incorrect and c = mean(lambda s). Hence sum d = 0 and, for a shared
  // scalar c, lambda_i = s_i (2 d_i + c) must vanish on inactive constraints
  // and be non-negative on active ones.
  double residual = 0;
  double d_sum = 0;
  double c_lo = -std::numeric_limits<double>::infinity();
  double c_hi = std::numeric_limits<double>::infinity();
  std::vector<double> slack(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = labels[i] ? 1.0 : -1.0;
    d[i] = rewards[i] - scores[i];
    d_sum += d[i];
    slack[i] = sign * (rewards[i] - rbar) - margin;
    residual = std::max(residual, -slack[i]);
    const double pinned = -2.0 * d[i];
    if (slack[i] > active_tol) {
      c_lo = std::max(c_lo, pinned);
      c_hi = std::min(c_hi, pinned);
    } else if (labels[i]) {
      c_lo = std::max(c_lo, pinned);
    } else {
      c_hi = std::min(c_hi, pinned);
    }
  }
  residual = std::max(residual, std::abs(d_sum) / static_cast<double>(n));
  if (c_lo > c_hi) residual = std::max(residual, 0.5 * (c_lo - c_hi));

  double c = 0;
  if (std::isfinite(c_lo) && std::isfinite(c_hi)) c = 0.5 * (c_lo + c_hi);
  else if (std::isfinite(c_lo)) c = c_lo;
  else if (std::isfinite(c_hi)) c = c_hi;
  for (std::size_t i = 0; i < n; ++i) {
    if (slack[i] > active_tol) continue;
    const double sign = labels[i] ? 1.0 : -1.0;
    const double lambda = std::max(0.0, sign * (2.0 * d[i] + c));
    residual = std::max(residual, lambda * std::abs(slack[i]));
  }
  return residual;
}

bool verify_kkt(std::span<const double> rewards, std::span<const double> scores,
                std::span<const int> labels, double margin, double tol) {
  return kkt_residual(rewards, scores, labels, margin, tol) <= tol;
}

}  // namespace interleave

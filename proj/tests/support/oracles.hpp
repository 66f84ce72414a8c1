#pragma once

// Test-only reference implementations. They deliberately take different
// routes from the library code they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace interleave::testing {

// ---- latency metrics by position enumeration ------------------------------

struct BruteMetrics {
  double ari = 0, abo = 0, airw = 0;
  bool has_speak = false;
};

/// `speak[i]` is true when 1-based position i+1 is a speak token. Onsets are
/// found by looking at the predecessor; each wait is measured by walking
/// backwards from an onset to the previous speak token (or the start).
inline BruteMetrics brute_metrics(const std::vector<bool>& speak) {
  BruteMetrics m;
  long double pos_sum = 0, onset_sum = 0, wait_sum = 0;
  std::size_t n_speak = 0, n_onsets = 0, n_waits = 0;
  for (std::size_t p = 1; p <= speak.size(); ++p) {
    if (!speak[p - 1]) continue;
    pos_sum += p;
    ++n_speak;
    if (p == 1 || !speak[p - 2]) {
      onset_sum += p;
      ++n_onsets;
      std::size_t wait = 0;
      for (std::size_t q = p - 1; q >= 1 && !speak[q - 1]; --q) ++wait;
      if (wait > 0) {
        wait_sum += wait;
        ++n_waits;
      }
    }
  }
  if (n_speak == 0) return m;
  m.has_speak = true;
  m.ari = static_cast<double>(pos_sum / n_speak);
  m.abo = static_cast<double>(onset_sum / n_onsets);
  m.airw = n_waits ? static_cast<double>(wait_sum / n_waits) : 0.0;
  return m;
}

// ---- shaping QP by projected gradient on the dual --------------------------

/// Solves min sum (R - S)^2 s.t. s_i (R_i - mean R) >= margin, with
/// s_i = +1 for label 1 and -1 for label 0, by projected gradient ascent on
/// the dual (multipliers clipped at zero). Primal recovery:
/// R_i = S_i + (lambda_i s_i - mean(lambda s)) / 2.
inline std::vector<double> projected_gradient_qp(const std::vector<double>& scores, const std::vector<int>& labels,
                                                 double margin, int max_iters = 200000, double tol = 1e-13) {
  const std::size_t n = scores.size();
  std::vector<double> lambda(n, 0.0), r(n);
  auto primal = [&] {
    double c = 0;
    for (std::size_t i = 0; i < n; ++i) c += lambda[i] * (labels[i] ? 1.0 : -1.0);
    c /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = scores[i] + 0.5 * (lambda[i] * (labels[i] ? 1.0 : -1.0) - c);
  };
  const double step = 1.0;  // dual Hessian has eigenvalues in [0, 1/2]
  for (int it = 0; it < max_iters; ++it) {
    primal();
    const double rbar = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
    double change = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double slack = (labels[i] ? 1.0 : -1.0) * (r[i] - rbar) - margin;
      const double next = std::max(0.0, lambda[i] - step * slack);
      change = std::max(change, std::abs(next - lambda[i]));
      lambda[i] = next;
    }
    if (change < tol) break;
  }
  primal();
  return r;
}

// ---- random generators ------------------------------------------------------

inline std::string random_word(std::mt19937_64& rng) {
  static const std::string kAlpha = "abcdefghijklmnopqrstuvwxyz0123456789=+-().,";
  std::uniform_int_distribution<std::size_t> len(1, 8), ch(0, kAlpha.size() - 1);
  std::string w;
  for (std::size_t i = len(rng); i > 0; --i) w += kAlpha[ch(rng)];
  return w;
}

/// A block of 1-3 lines of words; single newlines and spaces only.
inline std::string random_block(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> lines(1, 3), words(1, 6);
  std::string b;
  for (int l = lines(rng); l > 0; --l) {
    if (!b.empty()) b += '\n';
    for (int w = words(rng); w > 0; --w) {
      if (!b.empty() && b.back() != '\n') b += ' ';
      b += random_word(rng);
    }
  }
  return b;
}

inline std::vector<std::string> random_blocks(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  std::vector<std::string> out(std::uniform_int_distribution<std::size_t>(lo, hi)(rng));
  for (auto& b : out) b = random_block(rng);
  return out;
}

inline std::string join_blocks(const std::vector<std::string>& blocks, const std::string& delim = "\n\n") {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += delim;
    out += blocks[i];
  }
  return out;
}

/// Random non-decreasing boundaries in [0, ka] ending at ka.
inline std::vector<std::size_t> random_boundaries(std::mt19937_64& rng, std::size_t kr, std::size_t ka) {
  std::vector<std::size_t> b(kr);
  std::uniform_int_distribution<std::size_t> d(0, ka);
  for (auto& x : b) x = d(rng);
  std::sort(b.begin(), b.end());
  b.back() = ka;
  return b;
}

inline std::vector<int> random_mixed_labels(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> labels(n);
  std::bernoulli_distribution coin(0.5);
  do {
    for (auto& g : labels) g = coin(rng) ? 1 : 0;
  } while (std::all_of(labels.begin(), labels.end(), [&](int g) { return g == labels[0]; }));
  return labels;
}

/// Scores that satisfy the shaping constraints with room to spare: deviations
/// at least margin + 0.01 on the correct side of a zero mean, rebalanced so
/// they sum to zero, then shifted by a random offset.
inline std::vector<double> random_feasible_scores(std::mt19937_64& rng, const std::vector<int>& labels,
                                                  double margin) {
  std::uniform_real_distribution<double> extra(0.01, 5.0);
  std::vector<double> d(labels.size());
  double pos = 0, neg = 0;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = (labels[i] ? 1.0 : -1.0) * (margin + extra(rng));
    (labels[i] ? pos : neg) += d[i];
    (labels[i] ? n_pos : n_neg) += 1;
  }
  // Push the lighter side further out so the deviations sum to zero.
  const double excess = pos + neg;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (excess > 0 && !labels[i]) d[i] -= excess / static_cast<double>(n_neg);
    if (excess < 0 && labels[i]) d[i] -= excess / static_cast<double>(n_pos);
  }
  const double offset = std::uniform_real_distribution<double>(-20, 20)(rng);
  for (auto& x : d) x += offset;
  return d;
}

}  // namespace interleave::testing

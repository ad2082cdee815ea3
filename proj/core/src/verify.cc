//
// Copyright 2026 The rdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "rdp/verify.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "rdp/mechanism.h"
#include "rdp/optimizer.h"
#include "rdp/privacy.h"
#include "rdp/random.h"
#include "rdp/utility.h"

namespace rdp {
namespace {

constexpr int kBootstrapReplicates = 200;
constexpr double kEntropyTolerance = 0.02;
constexpr double kSampledRelativeTolerance = 0.05;
constexpr double kDensityTolerance = 1e-6;
// Above this privacy loss the shifted histogram is too sparse next to the
// segment for the estimate to be reliable, so its check is reported but not
// enforced.
constexpr double kMaxReliableEps = 4.0;

template <class F>
void ParallelFor(int n, F&& fn) {
  const int threads = std::clamp(
      static_cast<int>(std::thread::hardware_concurrency()), 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

double Quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const size_t i = static_cast<size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

struct BinStats {
  std::vector<int64_t> c0;
  std::vector<int64_t> c1;
};

// Bins [left_first - k] for k >= 0 lie left of the segment [0, delta_q] and
// bins [right_first + k] lie right of it.
struct SideBins {
  int64_t left_first = -1;
  int64_t right_first = 0;
};

// Partial means count toward the fit only once their standard error is at
// most this fraction of their value.
constexpr double kPoolPrecision = 0.01;

// Largest fitted |log ratio| of a weighted fit that is non-increasing moving
// away from the segment on each side. At the innermost bin such a fit equals
// the maximum over k of the weighted mean of the k innermost usable bins;
// only means with relative standard error within kPoolPrecision count.
// Returns false if no bin has kMinBinCount counts in both histograms. Sets
// *precise to false when no mean reached kPoolPrecision and the fully pooled
// means were used instead.
bool MonotoneSup(const std::vector<double>& c0, const std::vector<double>& c1,
                 const SideBins& sides, double* eps, bool* precise) {
  const int64_t bins = static_cast<int64_t>(c0.size());
  bool found = false;
  bool found_precise = false;
  double best = 0.0;
  double best_pooled = 0.0;
  for (int side = 0; side < 2; ++side) {
    const int64_t start = side == 0 ? sides.left_first : sides.right_first;
    const int64_t step = side == 0 ? -1 : 1;
    const double sign = side == 0 ? 1.0 : -1.0;
    double num = 0.0;
    double den = 0.0;
    for (int64_t i = start; i >= 0 && i < bins; i += step) {
      if (c0[i] < kMinBinCount || c1[i] < kMinBinCount) continue;
      const double w = 1.0 / (1.0 / c0[i] + 1.0 / c1[i]);
      num += w * sign * std::log(c0[i] / c1[i]);
      den += w;
      const double mean = num / den;
      if (1.0 / std::sqrt(den) <= kPoolPrecision * std::abs(mean) &&
          (!found_precise || mean > best)) {
        best = mean;
        found_precise = true;
      }
    }
    if (den > 0.0 && (!found || num / den > best_pooled)) {
      best_pooled = num / den;
      found = true;
    }
  }
  *precise = found_precise;
  *eps = std::max(found_precise ? best : best_pooled, 0.0);
  return found;
}

MetricCheck WithinStandardErrors(std::string name, double analytic,
                                 double oracle, double se) {
  MetricCheck check;
  check.name = std::move(name);
  check.analytic = analytic;
  check.oracle = oracle;
  check.std_error = se;
  check.tolerance = 4.0 * se;
  check.pass = std::abs(analytic - oracle) <= check.tolerance;
  return check;
}

MetricCheck Skipped(std::string name, std::string note) {
  MetricCheck check;
  check.name = std::move(name);
  check.enforced = false;
  check.note = std::move(note);
  return check;
}

// Plug-in differential entropy of a histogram with bin width h over the full
// sample range.
double HistogramEntropy(std::vector<double> x, double h) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double entropy = 0.0;
  size_t i = 0;
  while (i < x.size()) {
    const double bin = std::floor(x[i] / h);
    size_t j = i;
    while (j < x.size() && std::floor(x[j] / h) == bin) ++j;
    const double p = static_cast<double>(j - i) / n;
    entropy -= p * std::log(p / h);
    i = j;
  }
  return entropy;
}

}  // namespace

std::vector<double> SampleNoise(const DistributionSpec& spec, int64_t n,
                                uint64_t seed, uint64_t stream_offset) {
  std::vector<double> out(static_cast<size_t>(std::max<int64_t>(n, 0)));
  const int64_t per_shard = n / kVerifyShards;
  const int64_t extra = n % kVerifyShards;
  ParallelFor(kVerifyShards, [&](int shard) {
    const int64_t begin = shard * per_shard + std::min<int64_t>(shard, extra);
    const int64_t count = per_shard + (shard < extra ? 1 : 0);
    Rng rng = Rng::ForStream(seed, stream_offset + shard);
    for (int64_t i = 0; i < count; ++i) {
      out[begin + i] = SampleCompoundLaplace(spec, rng).noise;
    }
  });
  return out;
}

absl::StatusOr<DensityPrivacyCheck> CertifyPrivacy(const DistributionSpec& spec,
                                                   double delta_q,
                                                   double grid_halfwidth,
                                                   int grid_points) {
  if (!(delta_q > 0.0 && std::isfinite(delta_q))) {
    return absl::InvalidArgumentError("delta_q must be positive");
  }
  if (!(grid_halfwidth > 0.0) || grid_points < 2) {
    return absl::InvalidArgumentError("grid must have positive width");
  }
  const double lo = -grid_halfwidth;
  const double hi = delta_q + grid_halfwidth;
  std::vector<double> grid;
  grid.reserve(grid_points + 2);
  for (int i = 0; i < grid_points; ++i) {
    grid.push_back(lo + (hi - lo) * i / (grid_points - 1));
  }
  grid.push_back(0.0);
  grid.push_back(delta_q);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  DensityPrivacyCheck out;
  out.eps_density_sup = -1.0;
  for (double x : grid) {
    const double lr =
        std::abs(LogNoisePdf(spec, x) - LogNoisePdf(spec, x - delta_q));
    if (lr > out.eps_density_sup + 1e-12) {
      out.eps_density_sup = lr;
      out.argmax_x = x;
    }
  }
  return out;
}

absl::StatusOr<SampledPrivacyCheck> CertifyPrivacySampled(
    const DistributionSpec& spec, double delta_q, int64_t n_samples,
    int n_bins, uint64_t seed) {
  if (!(delta_q > 0.0 && std::isfinite(delta_q))) {
    return absl::InvalidArgumentError("delta_q must be positive");
  }
  if (n_samples < 1000) {
    return absl::InvalidArgumentError("at least 1000 samples are required");
  }
  std::vector<double> y0 = SampleNoise(spec, n_samples, seed, 0);
  std::vector<double> y1 = SampleNoise(spec, n_samples, seed, kVerifyShards);
  for (double& y : y1) y += delta_q;

  std::vector<double> sorted0 = y0;
  std::sort(sorted0.begin(), sorted0.end());
  std::vector<double> sorted1 = y1;
  std::sort(sorted1.begin(), sorted1.end());
  const double range_lo = Quantile(sorted0, 0.0005);
  const double range_hi = Quantile(sorted1, 0.9995);

  // Bin edges sit on multiples of h, and delta_q is a whole number of bins.
  double h;
  if (n_bins > 0) {
    h = (range_hi - range_lo) / n_bins;
  } else {
    const double iqr = Quantile(sorted0, 0.75) - Quantile(sorted0, 0.25);
    h = 2.0 * iqr / std::cbrt(static_cast<double>(n_samples));
  }
  h = delta_q / std::ceil(delta_q / h);
  const int64_t first = static_cast<int64_t>(std::floor(range_lo / h));
  const int64_t last = static_cast<int64_t>(std::ceil(range_hi / h));
  const size_t bins = static_cast<size_t>(std::max<int64_t>(last - first, 1));
  std::vector<double> c0(bins, 0.0);
  std::vector<double> c1(bins, 0.0);
  auto fill = [&](const std::vector<double>& ys, std::vector<double>& c) {
    for (double y : ys) {
      const int64_t b = static_cast<int64_t>(std::floor(y / h)) - first;
      if (b >= 0 && b < static_cast<int64_t>(bins)) c[b] += 1.0;
    }
  };
  fill(y0, c0);
  fill(y1, c1);

  int usable = 0;
  for (size_t i = 0; i < bins; ++i) {
    if (c0[i] >= kMinBinCount && c1[i] >= kMinBinCount) ++usable;
  }
  if (usable == 0) {
    return absl::FailedPreconditionError(
        "no histogram bin has enough counts in both samples");
  }
  SideBins sides;
  sides.left_first = -first - 1;
  sides.right_first = std::llround(delta_q / h) - first;

  SampledPrivacyCheck out;
  out.bins_used = usable;
  out.bin_width = h;
  bool precise = false;
  if (!MonotoneSup(c0, c1, sides, &out.eps_empirical, &precise)) {
    return absl::FailedPreconditionError(
        "no histogram bin outside the segment has enough counts");
  }

  // Poisson bootstrap of the whole selection procedure.
  std::mt19937_64 engine(MixSeed(seed ^ 0x626f6f74ULL));
  double sum = 0.0;
  double sum_sq = 0.0;
  int replicates = 0;
  std::vector<double> r0(bins);
  std::vector<double> r1(bins);
  for (int b = 0; b < kBootstrapReplicates; ++b) {
    for (size_t i = 0; i < bins; ++i) {
      r0[i] = c0[i] > 0 ? std::poisson_distribution<int64_t>(c0[i])(engine) : 0;
      r1[i] = c1[i] > 0 ? std::poisson_distribution<int64_t>(c1[i])(engine) : 0;
    }
    double lr = 0.0;
    bool replicate_precise = false;
    if (!MonotoneSup(r0, r1, sides, &lr, &replicate_precise)) continue;
    sum += lr;
    sum_sq += lr * lr;
    ++replicates;
  }
  if (replicates > 1) {
    const double mean = sum / replicates;
    out.std_error =
        std::sqrt(std::max(0.0, (sum_sq - replicates * mean * mean) /
                                    (replicates - 1)));
  }

  out.low_confidence = n_samples < kConfidentSamples || !precise;
  for (int64_t i : {sides.left_first, sides.right_first}) {
    if (i < 0 || i >= static_cast<int64_t>(bins) || c0[i] < kMinBinCount ||
        c1[i] < kMinBinCount) {
      out.low_confidence = true;
    }
  }
  return out;
}

absl::StatusOr<std::vector<MetricCheck>> CertifyUtility(
    const DistributionSpec& spec, double gamma, int64_t n_samples,
    uint64_t seed) {
  if (!(gamma > 0.0 && std::isfinite(gamma))) {
    return absl::InvalidArgumentError("gamma must be positive");
  }
  if (n_samples < 1000) {
    return absl::InvalidArgumentError("at least 1000 samples are required");
  }
  const std::vector<double> y = SampleNoise(spec, n_samples, seed, 0);
  const double n = static_cast<double>(y.size());
  std::vector<MetricCheck> checks;

  {
    double hits = 0.0;
    for (double v : y) hits += std::abs(v) <= gamma ? 1.0 : 0.0;
    const double p = Usefulness(spec, gamma);
    checks.push_back(WithinStandardErrors(
        "usefulness", p, hits / n, std::sqrt(std::max(p * (1.0 - p), 1.0 / n) / n)));
  }

  // Standard errors need the next moment up: E[noise^2] = 2 E[b^2] for l1 and
  // E[noise^4] = 24 E[b^4] for l2.
  const bool second = ScaleMoment(spec, 2).ok();
  const bool fourth = ScaleMoment(spec, 4).ok();

  absl::StatusOr<double> l1 = L1Error(spec);
  if (!l1.ok()) {
    checks.push_back(Skipped("l1", "analytic value diverges"));
  } else if (!second) {
    checks.push_back(Skipped("l1", "Monte Carlo variance diverges"));
  } else {
    double s = 0.0;
    double s2 = 0.0;
    for (double v : y) {
      s += std::abs(v);
      s2 += v * v;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    checks.push_back(
        WithinStandardErrors("l1", *l1, mean, std::sqrt(var / n)));
  }

  absl::StatusOr<double> l2 = L2Error(spec);
  if (!l2.ok()) {
    checks.push_back(Skipped("l2", "analytic value diverges"));
  } else if (!fourth) {
    checks.push_back(Skipped("l2", "Monte Carlo variance diverges"));
  } else {
    double s2 = 0.0;
    double s4 = 0.0;
    for (double v : y) {
      s2 += v * v;
      s4 += v * v * v * v;
    }
    const double m2 = s2 / n;
    const double var2 = s4 / n - m2 * m2;
    const double rms = std::sqrt(m2);
    checks.push_back(WithinStandardErrors("l2", *l2, rms,
                                          std::sqrt(var2 / n) / (2.0 * rms)));
  }

  absl::StatusOr<double> entropy = EntropyTable(spec);
  if (!entropy.ok()) {
    checks.push_back(Skipped("entropy_true", "analytic value diverges"));
  } else {
    std::vector<double> sorted = y;
    std::sort(sorted.begin(), sorted.end());
    const double iqr = Quantile(sorted, 0.75) - Quantile(sorted, 0.25);
    const double h = 2.0 * iqr / std::cbrt(n);
    MetricCheck check;
    check.name = "entropy_true";
    check.analytic = *entropy + std::numbers::ln2;
    check.oracle = HistogramEntropy(std::move(sorted), h);
    check.tolerance = kEntropyTolerance;
    check.pass = std::abs(check.analytic - check.oracle) <= check.tolerance;
    checks.push_back(std::move(check));
  }
  return checks;
}

absl::StatusOr<VerificationReport> Verify(const DistributionSpec& spec,
                                          double delta_q, double gamma,
                                          int64_t n_samples, uint64_t seed) {
  absl::StatusOr<double> eps = EpsGeneral(spec, delta_q);
  if (!eps.ok()) return eps.status();
  VerificationReport report;
  report.delta_q = delta_q;
  report.gamma = gamma;
  report.n_samples = n_samples;
  report.eps_analytic = *eps;

  absl::StatusOr<DensityPrivacyCheck> density =
      CertifyPrivacy(spec, delta_q, 5.0 * delta_q);
  if (!density.ok()) return density.status();
  report.eps_density_sup = density->eps_density_sup;
  report.eps_density_argmax = density->argmax_x;
  {
    MetricCheck check;
    check.name = "eps_density_sup";
    check.analytic = *eps;
    check.oracle = density->eps_density_sup;
    check.tolerance = kDensityTolerance;
    check.pass = std::abs(check.analytic - check.oracle) <= check.tolerance;
    report.metric_checks.push_back(std::move(check));
  }

  absl::StatusOr<SampledPrivacyCheck> sampled =
      CertifyPrivacySampled(spec, delta_q, n_samples, 0, MixSeed(seed));
  MetricCheck check;
  check.name = "eps_empirical";
  check.analytic = *eps;
  check.tolerance = kSampledRelativeTolerance * *eps;
  if (sampled.ok()) {
    report.eps_empirical = sampled->eps_empirical;
    report.eps_empirical_stderr = sampled->std_error;
    report.low_confidence = sampled->low_confidence;
    check.oracle = sampled->eps_empirical;
    check.std_error = sampled->std_error;
    check.pass = std::abs(check.analytic - check.oracle) <= check.tolerance;
    if (sampled->low_confidence) {
      check.enforced = false;
      check.note = "low-confidence: too few samples or sparse bins";
    } else if (*eps > kMaxReliableEps) {
      check.enforced = false;
      check.note = "privacy loss beyond the reliable histogram range";
    }
  } else {
    report.low_confidence = true;
    check.enforced = false;
    check.pass = false;
    check.note = std::string(sampled.status().message());
  }
  report.metric_checks.push_back(std::move(check));

  absl::StatusOr<std::vector<MetricCheck>> utility =
      CertifyUtility(spec, gamma, n_samples, MixSeed(seed + 1));
  if (!utility.ok()) return utility.status();
  for (MetricCheck& c : *utility) {
    if (c.name == "usefulness") {
      report.usefulness_analytic = c.analytic;
      report.usefulness_empirical = c.oracle;
      report.usefulness_stderr = c.std_error;
    }
    report.metric_checks.push_back(std::move(c));
  }
  for (const MetricCheck& c : report.metric_checks) {
    if (c.enforced && !c.pass) report.passed = false;
  }
  return report;
}

std::vector<DistributionSpec> RegressionCorpus(uint64_t seed) {
  std::vector<DistributionSpec> corpus;
  corpus.push_back(*DistributionSpec::Of(Degenerate{1.0}));
  corpus.push_back(*DistributionSpec::Of(Gamma{2.0, 0.5}));
  corpus.push_back(*DistributionSpec::Of(Uniform{1.0, 2.0}));
  corpus.push_back(*DistributionSpec::Of(TruncGauss{2.0, 1.0, 0.5, 4.0}));
  corpus.push_back(*DistributionSpec::Of(Bernoulli{0.3, 0.5, 2.0}));

  Rng rng(seed);
  auto in = [&rng](double lo, double hi) {
    return lo + (hi - lo) * rng.Uniform();
  };
  while (corpus.size() < 10) {
    const double u_a = in(0.5, 2.0);
    const double lo = in(0.5, 2.0);
    std::vector<Term> terms = {
        {in(0.2, 1.0), Gamma{in(5.0, 20.0), in(0.02, 0.3)}},
        {in(0.2, 1.0), Uniform{u_a, u_a + in(0.2, 3.0)}},
        {in(0.2, 1.0), TruncGauss{in(0.0, 4.0), in(0.2, 2.0), lo,
                                  lo + in(0.5, 4.0)}},
    };
    const DistributionSpec shape = *DistributionSpec::Create(std::move(terms));
    absl::StatusOr<DistributionSpec> scaled =
        RescaleToEpsilon(shape, in(0.5, 3.0), 1.0);
    if (scaled.ok()) corpus.push_back(*std::move(scaled));
  }
  return corpus;
}

double KolmogorovSmirnovStatistic(std::vector<double> samples,
                                  const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace rdp

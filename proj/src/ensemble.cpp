#include "oim/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "oim/errors.hpp"
#include "oim/parallel.hpp"
#include "oim/spectral.hpp"

namespace oim {

namespace {

double choose2(double n) { return n * (n - 1) / 2.0; }
double choose3(double n) { return n * (n - 1) * (n - 2) / 6.0; }
double choose4(double n) { return n * (n - 1) * (n - 2) * (n - 3) / 24.0; }

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

MuLaw MuLaw::constant(double value) {
  if (!std::isfinite(value) || value < 0.0) throw ArgumentError("MuLaw: constant must be finite and >= 0");
  return MuLaw(true, value, value);
}

MuLaw MuLaw::uniform(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || a > b)
    throw ArgumentError("MuLaw: uniform bounds require 0 <= a <= b");
  return MuLaw(false, a, b);
}

std::string MuLaw::label() const {
  if (constant_) return "const:" + format_number(a_);
  return "uniform:" + format_number(a_) + ":" + format_number(b_);
}

void EnsembleParams::validate() const {
  if (n < 1) throw ArgumentError("ensemble: n must be >= 1");
  if (!valid_probability(p1)) throw ArgumentError("ensemble: p1 must lie in [0, 1]");
  if (!valid_probability(p2)) throw ArgumentError("ensemble: p2 must lie in [0, 1]");
  if (samples < 1) throw ArgumentError("ensemble: samples must be >= 1");
}

CouplingMatrix sample_er_couplings(std::size_t n, double p1, RandomStream& rng) {
  Matrix w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (rng.bernoulli(p1)) w(i, k) = w(k, i) = -1.0;
  return CouplingMatrix(std::move(w));
}

EnsembleInstance sample_instance(const EnsembleParams& params, std::size_t index) {
  if (index >= params.samples) throw ArgumentError("sample_instance: index out of range");
  RandomStream rng(params.master_seed, index, StreamPurpose::EnsembleSample);
  CouplingMatrix j = sample_er_couplings(params.n, params.p1, rng);
  std::vector<int> spins(params.n);
  for (int& s : spins) s = rng.bernoulli(params.p2) ? 1 : -1;
  std::vector<double> mu(params.n);
  for (double& m : mu) m = params.mu_law.draw(rng);
  return {std::move(j), SpinConfiguration(std::move(spins)), RegularizationVector(std::move(mu))};
}

SampleRecord evaluate_sample(const EnsembleParams& params, std::size_t index) {
  const EnsembleInstance inst = sample_instance(params, index);
  const SignedLaplacian l = signed_laplacian(signed_adjacency(inst.couplings, inst.spins));
  const HessianMatrix h = hessian(l, inst.mu);
  const double ham = hamiltonian(inst.couplings, inst.spins);
  if (std::abs(ham - hamiltonian_from_trace(l)) > 1e-12 * std::max(1.0, std::abs(ham)))
    throw NumericalError("ensemble: Hamiltonian/trace identity violated");

  SampleRecord rec{ham, blockwise_eigenvalues(h.matrix()), 0.0};
  rec.lambda_min = rec.eigenvalues.front();
  const double eig_sum = std::accumulate(rec.eigenvalues.begin(), rec.eigenvalues.end(), 0.0);
  const double expected = -2.0 * ham + 2.0 * inst.mu.sum();
  if (std::abs(eig_sum - expected) > 1e-8 * std::max(1.0, std::abs(expected)))
    throw NumericalError("ensemble: spectrum trace identity violated");
  return rec;
}

double adjacency_moment(unsigned k, double p1, double p2) {
  if (k < 1) throw ArgumentError("adjacency_moment: k must be >= 1");
  if (k % 2 == 0) return p1;
  const double bias = 2.0 * p2 - 1.0;
  return -p1 * bias * bias;
}

Moments hamiltonian_moments(const EnsembleParams& params) {
  const double n = static_cast<double>(params.n);
  const double mean_a = adjacency_moment(1, params.p1, params.p2);
  const double mean_a2 = adjacency_moment(2, params.p1, params.p2);
  const double mean_j = -params.p1;
  const double mean_s = 2.0 * params.p2 - 1.0;
  const double js2 = mean_j * mean_j * mean_s * mean_s;
  const double variance = choose2(n) * mean_a2 + 6.0 * choose3(n) * js2 +
                          6.0 * choose4(n) * js2 * mean_s * mean_s - choose2(n) * choose2(n) * mean_a * mean_a;
  return {-choose2(n) * mean_a, variance};
}

Moments eigenvalue_moments(const EnsembleParams& params, VarianceForm form) {
  const double n = static_cast<double>(params.n);
  const double mean_a = adjacency_moment(1, params.p1, params.p2);
  const double mean_j = -params.p1;
  const double mean_j2 = params.p1;
  const double mean_s = 2.0 * params.p2 - 1.0;
  const double mean_mu = params.mu_law.mean();
  const double var_mu = params.mu_law.variance();

  const double mean = (n - 1) * mean_a + 2.0 * mean_mu;
  double variance = (n - 1) * (n - 2) * mean_j * mean_j * mean_s * mean_s + 2.0 * (n - 1) * mean_j2 + 4.0 * var_mu;
  switch (form) {
    case VarianceForm::AsPublished:
      variance += 2.0 * (n - 1) * mean_mu * mean_a + (n - 1) * (n - 1) * mean_a * mean_a;
      break;
    case VarianceForm::DirectExpansion:
      variance -= (n - 1) * (n - 1) * mean_a * mean_a;
      break;
  }
  return {mean, variance};
}

double conditional_mean_prediction(double h, std::size_t n, double a, double b) {
  if (n < 1) throw ArgumentError("conditional_mean_prediction: n must be >= 1");
  return -2.0 * h / static_cast<double>(n) + (a + b);
}

double conditional_variance_prediction(double h, std::size_t n, double p1, double a, double b, double c) {
  if (n < 1) throw ArgumentError("conditional_variance_prediction: n must be >= 1");
  const double nn = static_cast<double>(n);
  return (c / nn - 4.0 / (nn * nn)) * h * h + (b - a) * (b - a) / 3.0 + 2.0 * (nn - 1) * p1;
}

CFit fit_c(const ConditionalBins& bins, const EnsembleParams& params) {
  const double n = static_cast<double>(params.n);
  const double a = params.mu_law.lower();
  const double b = params.mu_law.upper();
  const double intercept = 2.0 * n * (n - 1) * params.p1;
  const double mu_sq = params.mu_law.second_moment();

  struct Point {
    double h, w, y;
  };
  std::vector<Point> points;
  CFit fit;
  for (const auto& [level, bin] : bins) {
    if (bin.excluded || bin.count < params.min_bin_count) continue;
    const double h = static_cast<double>(level);
    const double t_bar = n * bin.mean_lambda_sq - 4.0 * n * mu_sq;
    points.push_back({h, static_cast<double>(bin.count), t_bar - intercept + 4.0 * (a + b) * h});
    fit.regression_set.push_back(level);
  }
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : points) {
    num += p.w * p.y * p.h * p.h;
    den += p.w * p.h * p.h * p.h * p.h;
  }
  if (points.size() < 3 || den <= 0.0) throw InsufficientDataError("fit_c: fewer than 3 admissible bins");
  fit.c = num / den;
  double rss = 0.0;
  for (const auto& p : points) {
    const double r = p.y - fit.c * p.h * p.h;
    rss += p.w * r * r;
  }
  fit.standard_error = std::sqrt(rss / static_cast<double>(points.size() - 1) / den);
  return fit;
}

LineFit fit_conditional_mean(const ConditionalBins& bins) {
  double sw = 0, sx = 0, sy = 0;
  LineFit out;
  for (const auto& [level, bin] : bins) {
    if (bin.excluded) continue;
    const double w = static_cast<double>(bin.count);
    sw += w;
    sx += w * static_cast<double>(level);
    sy += w * bin.mean_lambda;
    ++out.bins_used;
  }
  if (out.bins_used < 2) throw InsufficientDataError("fit_conditional_mean: fewer than 2 admissible bins");
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [level, bin] : bins) {
    if (bin.excluded) continue;
    const double w = static_cast<double>(bin.count);
    const double dx = static_cast<double>(level) - mx;
    const double dy = bin.mean_lambda - my;
    sxx += w * dx * dx;
    sxy += w * dx * dy;
    syy += w * dy * dy;
  }
  if (sxx <= 0.0) throw InsufficientDataError("fit_conditional_mean: degenerate energy levels");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return out;
}

EnsembleResult run_ensemble(const EnsembleParams& params, unsigned threads) {
  params.validate();
  const std::size_t samples = params.samples;
  const double n = static_cast<double>(params.n);

  EnsembleResult out;
  out.samples.resize(samples);
  parallel_for(samples, threads, [&](std::size_t index) {
    const SampleRecord rec = evaluate_sample(params, index);
    SampleSummary s{static_cast<std::int64_t>(std::llround(rec.hamiltonian_value)), 0.0, 0.0, rec.lambda_min, 0.0};
    if (std::abs(rec.hamiltonian_value - static_cast<double>(s.h)) > 1e-9)
      throw NumericalError("ensemble: non-integer Hamiltonian");
    for (double l : rec.eigenvalues) {
      s.sum_lambda += l;
      s.sum_lambda_sq += l * l;
    }
    s.sum_mu = (s.sum_lambda + 2.0 * rec.hamiltonian_value) / 2.0;
    out.samples[index] = s;
  });

  // Serial reduction in index order.
  const double count = static_cast<double>(samples);
  const double pooled = n * count;
  double sum_h = 0, sum_l = 0;
  for (const auto& s : out.samples) {
    sum_h += static_cast<double>(s.h);
    sum_l += s.sum_lambda;
  }
  const double mean_h = sum_h / count;
  const double mean_l = sum_l / pooled;

  double m2_h = 0, m4_h = 0, ss_l = 0;
  double sum_x = 0, sum_g = 0;
  for (const auto& s : out.samples) {
    const double dh = static_cast<double>(s.h) - mean_h;
    m2_h += dh * dh;
    m4_h += dh * dh * dh * dh;
    ss_l += s.sum_lambda_sq - 2.0 * mean_l * s.sum_lambda + n * mean_l * mean_l;
    sum_x += s.sum_lambda / n;
    sum_g += (s.sum_lambda_sq - 2.0 * mean_l * s.sum_lambda) / n;
  }
  const double mean_x = sum_x / count;
  const double mean_g = sum_g / count;
  double var_x = 0, var_g = 0;
  for (const auto& s : out.samples) {
    const double dx = s.sum_lambda / n - mean_x;
    const double dg = (s.sum_lambda_sq - 2.0 * mean_l * s.sum_lambda) / n - mean_g;
    var_x += dx * dx;
    var_g += dg * dg;
  }
  const double dof = samples > 1 ? count - 1.0 : 1.0;

  MomentReport& m = out.moments;
  m.empirical_mean_H = mean_h;
  m.empirical_var_H = samples > 1 ? m2_h / dof : 0.0;
  m.se_mean_H = std::sqrt(m.empirical_var_H / count);
  const double pop_var_h = m2_h / count;
  m.se_var_H = std::sqrt(std::max(0.0, m4_h / count - pop_var_h * pop_var_h) / count);
  m.empirical_mean_lambda = mean_l;
  m.empirical_var_lambda = ss_l / pooled;
  m.se_mean_lambda = std::sqrt(var_x / dof / count);
  m.se_var_lambda = std::sqrt(var_g / dof / count);
  const Moments ah = hamiltonian_moments(params);
  const Moments al = eigenvalue_moments(params);
  m.analytic_mean_H = ah.mean;
  m.analytic_var_H = ah.variance;
  m.analytic_mean_lambda = al.mean;
  m.analytic_var_lambda = al.variance;

  struct Acc {
    std::size_t count = 0;
    std::size_t stable = 0;
    double sum_l = 0, sum_l2 = 0, sum_min = 0;
  };
  std::map<std::int64_t, Acc> acc;
  for (const auto& s : out.samples) {
    Acc& a = acc[s.h];
    ++a.count;
    a.sum_l += s.sum_lambda;
    a.sum_l2 += s.sum_lambda_sq;
    a.sum_min += s.lambda_min;
    if (classify_stability(s.lambda_min).kind == Stability::Stable) ++a.stable;
  }
  const double a_lo = params.mu_law.lower();
  const double b_hi = params.mu_law.upper();
  for (const auto& [level, a] : acc) {
    ConditionalBin bin;
    bin.h = level;
    bin.count = a.count;
    const double k = static_cast<double>(a.count);
    bin.mean_lambda = a.sum_l / (n * k);
    bin.mean_lambda_sq = a.sum_l2 / (n * k);
    bin.mean_lambda_min = a.sum_min / k;
    bin.frac_stable = static_cast<double>(a.stable) / k;
    bin.predicted_mean = conditional_mean_prediction(static_cast<double>(level), params.n, a_lo, b_hi);
    bin.excluded = a.count < params.min_bin_count;
    out.bins.emplace(level, bin);
  }
  // Within-bin pooled variance from centered sums.
  std::map<std::int64_t, double> centered;
  for (const auto& s : out.samples) {
    const double mb = out.bins.at(s.h).mean_lambda;
    centered[s.h] += s.sum_lambda_sq - 2.0 * mb * s.sum_lambda + n * mb * mb;
  }
  for (auto& [level, bin] : out.bins) bin.var_lambda = centered[level] / (n * static_cast<double>(bin.count));

  try {
    out.fit = fit_c(out.bins, params);
    for (auto& [level, bin] : out.bins)
      bin.predicted_var =
          conditional_variance_prediction(static_cast<double>(level), params.n, params.p1, a_lo, b_hi, out.fit->c);
  } catch (const InsufficientDataError&) {
  }
  try {
    out.mean_fit = fit_conditional_mean(out.bins);
  } catch (const InsufficientDataError&) {
  }
  return out;
}

}  // namespace oim

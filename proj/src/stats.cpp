#include "sbstlab/stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sbstlab {
namespace stats {

double mean(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("mean of empty sample");
  double sum = 0.0;
  for (double v : sample) sum += v;
  return sum / static_cast<double>(sample.size());
}

MeanStdev mean_stdev(std::span<const double> sample) {
  if (sample.size() < 2)
    throw std::invalid_argument("sample stdev needs at least 2 values");
  MeanStdev r;
  r.mean = mean(sample);
  double ss = 0.0;
  for (double v : sample) {
    const double d = v - r.mean;
    ss += d * d;
  }
  r.stdev = std::sqrt(ss / static_cast<double>(sample.size() - 1));
  return r;
}

namespace {

constexpr double kBetaTol = 1e-10;
constexpr int kBetaMaxIter = 500;

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kBetaTol) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("incomplete_beta requires a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_p_two_sided(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t-distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return incomplete_beta(df / 2.0, 0.5, x);
}

double student_t_p_closed_form(double t, double df) {
  const double a = std::fabs(t);
  if (df == 1.0) return 1.0 - 2.0 / std::numbers::pi * std::atan(a);
  if (df == 2.0) return 1.0 - a / std::sqrt(a * a + 2.0);
  throw std::invalid_argument("closed form only for df in {1, 2}");
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_t_test needs n >= 2 on both sides");
  const MeanStdev ma = mean_stdev(a);
  const MeanStdev mb = mean_stdev(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = ma.stdev * ma.stdev;
  const double vb = mb.stdev * mb.stdev;

  TTestResult r;
  if (va == 0.0 && vb == 0.0) {
    r.degrees_of_freedom = na + nb - 2.0;
    if (ma.mean == mb.mean) {
      r.exact_equal = true;
      r.t_statistic = 0.0;
      r.p_two_sided = 1.0;
      r.actual_cl = 0.0;
    } else {
      r.t_statistic = ma.mean > mb.mean
                          ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      r.p_two_sided = 0.0;
      r.actual_cl = 100.0;
    }
    return r;
  }

  const double se2 = va / na + vb / nb;
  r.t_statistic = (ma.mean - mb.mean) / std::sqrt(se2);
  r.degrees_of_freedom =
      se2 * se2 /
      (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
  r.p_two_sided = student_t_p_two_sided(r.t_statistic, r.degrees_of_freedom);
  r.actual_cl = 100.0 * (1.0 - r.p_two_sided);
  return r;
}

CellStats summarize_cell(std::span<const double> ga_coverages,
                         std::span<const double> rnd_coverages) {
  if (ga_coverages.size() != rnd_coverages.size())
    throw std::invalid_argument("cell vectors must have equal length");
  const MeanStdev ga = mean_stdev(ga_coverages);
  const MeanStdev rnd = mean_stdev(rnd_coverages);
  const TTestResult t = welch_t_test(ga_coverages, rnd_coverages);
  CellStats c;
  c.ga_mean = ga.mean;
  c.ga_std = ga.stdev;
  c.rnd_mean = rnd.mean;
  c.rnd_std = rnd.stdev;
  c.actual_cl = t.actual_cl;
  c.exact_equal = t.exact_equal;
  return c;
}

}  // namespace stats
}  // namespace sbstlab

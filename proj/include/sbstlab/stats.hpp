#pragma once

#include <span>
#include <vector>

namespace sbstlab {
namespace stats {

struct MeanStdev {
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation (n-1 denominator)
};

double mean(std::span<const double> sample);

/// Throws std::invalid_argument for n < 2.
MeanStdev mean_stdev(std::span<const double> sample);

/// Regularized incomplete beta function I_x(a, b), evaluated with a
/// continued fraction (modified Lentz) to absolute tolerance 1e-10.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of the Student-t distribution via incomplete_beta.
double student_t_p_two_sided(double t, double df);

/// Closed-form two-sided p for df in {1, 2}; used to cross-check the
/// incomplete-beta path. Throws for other df.
double student_t_p_closed_form(double t, double df);

struct TTestResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;  // Welch-Satterthwaite
  double p_two_sided = 1.0;
  double actual_cl = 0.0;  // 100 * (1 - p)
  // Both variances were zero and the means equal: p is defined as 1 and
  // this flag is raised instead of throwing.
  bool exact_equal = false;
};

/// Welch two-sample t-test (unequal variances, two-sided).
/// Requires n >= 2 on both sides.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// One row of the summary tables: GA vs random coverage in one cell.
struct CellStats {
  double ga_mean = 0.0;
  double ga_std = 0.0;
  double rnd_mean = 0.0;
  double rnd_std = 0.0;
  double actual_cl = 0.0;
  bool exact_equal = false;
};

/// Requires equal lengths, n >= 2.
CellStats summarize_cell(std::span<const double> ga_coverages,
                         std::span<const double> rnd_coverages);

}  // namespace stats
}  // namespace sbstlab

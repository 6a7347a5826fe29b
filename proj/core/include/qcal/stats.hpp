#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qcal {

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;  // standard error of the slope
    double r2 = 0.0;
};

// Ordinary least squares y = a + b x. Throws FitFailureError for fewer than
// 3 points or degenerate x.
RegressionFit linear_regression(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased (n-1)

// Empirical quantile with linear interpolation; v need not be sorted.
double quantile(std::vector<double> v, double q);

// Regularized upper incomplete gamma Q(a, x); Q(k/2, chi2/2) is the
// chi-square tail probability.
double gamma_q(double a, double x);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
};

// Goodness of fit of integer counts against Poisson(mean_expected):
// histogram bins pooled from the tails so every expected count >= 5,
// dof = bins - 1.
ChiSquareResult chi_square_poisson(const std::vector<long>& counts, double mean_expected);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// Two-sample Kolmogorov-Smirnov with the asymptotic tail probability.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Golden-section minimizer on [lo, hi] for unimodal f; tol is relative.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol = 1e-10);

}  // namespace qcal

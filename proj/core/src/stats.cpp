#include "qcal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qcal/errors.hpp"

namespace qcal {

RegressionFit linear_regression(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3)
        throw FitFailureError("linear_regression: need >= 3 paired points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) throw FitFailureError("linear_regression: degenerate abscissa");
    RegressionFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    fit.slope_se = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
    return fit;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) throw InvalidParameterError("mean: empty input");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    if (v.size() < 2) throw InvalidParameterError("variance: need >= 2 values");
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw InvalidParameterError("quantile: empty input");
    if (q < 0.0 || q > 1.0) throw InvalidParameterError("quantile: q outside [0, 1]");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

namespace {

// series expansion of P(a, x), x < a + 1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a, x), x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw InvalidParameterError("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

ChiSquareResult chi_square_poisson(const std::vector<long>& counts, double mean_expected) {
    if (counts.size() < 20)
        throw InvalidParameterError("chi_square_poisson: need >= 20 samples");
    if (!(mean_expected > 0.0))
        throw InvalidParameterError("chi_square_poisson: mean must be positive");
    const double n = static_cast<double>(counts.size());

    // Poisson pmf per occupied value, then pool tails so expected >= 5
    long max_count = 0;
    for (long c : counts) {
        if (c < 0) throw InvalidParameterError("chi_square_poisson: negative count");
        max_count = std::max(max_count, c);
    }
    auto log_pmf = [&](long k) {
        const double kd = static_cast<double>(k);
        return -mean_expected + kd * std::log(mean_expected) - std::lgamma(kd + 1.0);
    };
    std::vector<double> expected;  // per-bin expected count
    std::vector<double> observed;
    std::vector<long> histogram(static_cast<std::size_t>(max_count) + 1, 0);
    for (long c : counts) ++histogram[static_cast<std::size_t>(c)];

    double acc_exp = 0.0, acc_obs = 0.0, tail_prob = 1.0;
    for (long k = 0; k <= max_count; ++k) {
        const double pk = std::exp(log_pmf(k));
        tail_prob -= pk;
        acc_exp += n * pk;
        acc_obs += static_cast<double>(histogram[static_cast<std::size_t>(k)]);
        if (acc_exp >= 5.0) {
            expected.push_back(acc_exp);
            observed.push_back(acc_obs);
            acc_exp = acc_obs = 0.0;
        }
    }
    // everything above max_count plus any unpooled remainder
    acc_exp += n * std::max(tail_prob, 0.0);
    if (expected.empty() || acc_exp >= 5.0) {
        expected.push_back(acc_exp);
        observed.push_back(acc_obs);
    } else {
        expected.back() += acc_exp;
        observed.back() += acc_obs;
    }

    ChiSquareResult res;
    res.dof = static_cast<int>(expected.size()) - 1;
    if (res.dof < 1) throw FitFailureError("chi_square_poisson: too few bins after pooling");
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double d = observed[i] - expected[i];
        res.statistic += d * d / expected[i];
    }
    res.p_value = gamma_q(0.5 * res.dof, 0.5 * res.statistic);
    return res;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InvalidParameterError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < a.size() && ib < b.size()) {
        const double xa = a[ia], xb = b[ib];
        if (xa <= xb) ++ia;
        if (xb <= xa) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    KsResult res;
    res.statistic = d;
    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    // Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    res.p_value = std::min(1.0, std::max(0.0, 2.0 * sum));
    return res;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double tol) {
    if (!(lo < hi)) throw InvalidParameterError("golden_section_minimize: lo >= hi");
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while ((b - a) > tol * (std::abs(a) + std::abs(b) + 1e-300)) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace qcal

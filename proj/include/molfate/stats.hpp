#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace molfate {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);

/// Asymptotic Kolmogorov tail Q(l) = 2 sum_{k >= 1} (-1)^{k-1} exp(-2 k^2 l^2).
double kolmogorov_tail(double lambda);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample KS test against a continuous CDF, with the small-sample
/// correction l = (sqrt(n) + 0.12 + 0.11 / sqrt(n)) D.
TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS p-value for statistic D with sample sizes n and m.
double ks_two_sample_p_value(double d, std::size_t n, std::size_t m);

struct VarianceRatioTest {
    double ratio = 0.0;
    double critical = 0.0;
    double p_value = 1.0;
    bool pass = false;
};

/// One-sided F test of H0: var_a <= var_b against var_a > var_b. Passes when
/// var_a / var_b does not exceed the (1 - level) quantile of F(n_a - 1, n_b - 1).
VarianceRatioTest variance_ratio_test(double var_a, std::size_t n_a, double var_b, std::size_t n_b, double level);

/// P(X >= k) for X ~ Binomial(n, p).
double binomial_upper_tail(std::uint64_t k, std::uint64_t n, double p);

/// One-sided p-value of H0: p_a <= p_b against p_a > p_b (pooled z test).
double two_proportion_p_value(std::uint64_t k_a, std::uint64_t n_a, std::uint64_t k_b, std::uint64_t n_b);

}  // namespace molfate

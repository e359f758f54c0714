#include "molfate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

#include "molfate/error.hpp"

namespace molfate {

double mean(std::span<const double> x) {
    if (x.empty()) throw InvalidArgument("mean of an empty sample");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw InvalidArgument("variance needs at least two samples");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

double kolmogorov_tail(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InvalidArgument("KS test of an empty sample");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    const double root = std::sqrt(n);
    return {d, kolmogorov_tail((root + 0.12 + 0.11 / root) * d)};
}

double ks_two_sample_p_value(double d, std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw InvalidArgument("KS test of an empty sample");
    const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
    const double root = std::sqrt(ne);
    return kolmogorov_tail((root + 0.12 + 0.11 / root) * d);
}

VarianceRatioTest variance_ratio_test(double var_a, std::size_t n_a, double var_b, std::size_t n_b, double level) {
    if (n_a < 2 || n_b < 2) throw InvalidArgument("variance ratio test needs at least two samples per group");
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("test level must lie in (0, 1)");
    VarianceRatioTest out;
    const boost::math::fisher_f f(static_cast<double>(n_a - 1), static_cast<double>(n_b - 1));
    out.critical = boost::math::quantile(f, 1.0 - level);
    if (var_b > 0.0) {
        out.ratio = var_a / var_b;
        out.p_value = boost::math::cdf(boost::math::complement(f, out.ratio));
    } else {
        out.ratio = var_a > 0.0 ? INFINITY : 1.0;
        out.p_value = var_a > 0.0 ? 0.0 : 1.0;
    }
    out.pass = out.ratio <= out.critical;
    return out;
}

double binomial_upper_tail(std::uint64_t k, std::uint64_t n, double p) {
    if (k > n) return 0.0;
    if (k == 0) return 1.0;
    const boost::math::binomial b(static_cast<double>(n), p);
    return boost::math::cdf(boost::math::complement(b, static_cast<double>(k - 1)));
}

double two_proportion_p_value(std::uint64_t k_a, std::uint64_t n_a, std::uint64_t k_b, std::uint64_t n_b) {
    if (n_a == 0 || n_b == 0) throw InvalidArgument("two-proportion test needs non-empty groups");
    const double pa = static_cast<double>(k_a) / n_a, pb = static_cast<double>(k_b) / n_b;
    const double pooled = static_cast<double>(k_a + k_b) / static_cast<double>(n_a + n_b);
    const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n_a + 1.0 / n_b));
    if (se == 0.0) return pa > pb ? 0.0 : 1.0;
    const boost::math::normal z;
    return boost::math::cdf(boost::math::complement(z, (pa - pb) / se));
}

}  // namespace molfate

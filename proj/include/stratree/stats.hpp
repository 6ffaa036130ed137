#pragma once

#include <functional>
#include <span>

namespace stratree::stats {

double normal_cdf(double x);
double normal_quantile(double p);
double half_normal_cdf(double x);

// Two-sided one-sample Kolmogorov-Smirnov statistic D_n of `values` against `cdf`.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

// Asymptotic p-value P(D_n >= d) with Stephens' small-sample correction.
double ks_p_value(double d, std::size_t n);

}  // namespace stratree::stats

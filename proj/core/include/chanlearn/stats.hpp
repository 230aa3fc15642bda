#pragma once

#include <cstddef>
#include <vector>

namespace chanlearn {

/// Fixed-order pairwise (cascade) summation. The reduction tree depends only
/// on n, so results are identical no matter how the caller partitions work.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

double pairwise_mean(const std::vector<double>& x);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(const std::vector<double>& x);

/// Nearest-rank quantile: the ceil(q * n)-th smallest value, q in (0, 1].
double quantile_nearest_rank(std::vector<double> values, double q);

/// log(sum exp(x_i)) without overflow; -inf for an empty or all -inf input.
double logsumexp(const double* x, std::size_t n);
double logsumexp(const std::vector<double>& x);

}  // namespace chanlearn

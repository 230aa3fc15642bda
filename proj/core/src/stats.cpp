#include "chanlearn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chanlearn {

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size());
}

double pairwise_mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("pairwise_mean: empty input");
    return pairwise_sum(x) / static_cast<double>(x.size());
}

double sample_std(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const double mu = pairwise_mean(x);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = x[i] - mu;
        sq[i] = c * c;
    }
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(n - 1));
}

double logsumexp(const double* x, std::size_t n) {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > hi) hi = x[i];
    }
    if (!std::isfinite(hi)) return hi;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::exp(x[i] - hi);
    return hi + std::log(acc);
}

double logsumexp(const std::vector<double>& x) {
    return logsumexp(x.data(), x.size());
}

double quantile_nearest_rank(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile_nearest_rank: empty input");
    if (!(q > 0.0) || q > 1.0) {
        throw std::invalid_argument("quantile_nearest_rank: q must be in (0, 1]");
    }
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n));
    if (rank < 1) rank = 1;
    if (rank > values.size()) rank = values.size();
    return values[rank - 1];
}

}  // namespace chanlearn

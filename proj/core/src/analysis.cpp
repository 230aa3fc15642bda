#include "chanlearn/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace chanlearn {

namespace {

void check_common(const BoundInputs& b) {
    if (b.n < 1) throw std::invalid_argument("bound inputs: n must be positive");
    if (b.d < 1) throw std::invalid_argument("bound inputs: d must be positive");
    if (b.m < 2) throw std::invalid_argument("bound inputs: m must be at least 2");
    if (!(b.delta > 0.0) || b.delta >= 1.0) {
        throw std::invalid_argument("bound inputs: delta must be in (0, 1)");
    }
}

int expurgation_steps(const BoundInputs& b) {
    if (b.m0 <= b.m) throw std::invalid_argument("bound inputs: m0 must exceed m");
    if (b.k < 1 || (b.m0 - b.m) % b.k != 0) {
        throw std::invalid_argument("bound inputs: k must divide m0 - m");
    }
    if (!(b.beta > 0.0)) throw std::invalid_argument("bound inputs: beta must be positive");
    return (b.m0 - b.m) / b.k;
}

}  // namespace

double q_function(double t) {
    return 0.5 * std::erfc(t / std::sqrt(2.0));
}

double antipodal_pe_exact(double sigma1, double sigma2, double s1, double s2, double alpha,
                          double beta) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
        throw std::invalid_argument("antipodal_pe_exact: noise deviations must be positive");
    }
    if (s1 < 0.0 || s2 < 0.0 || (s1 == 0.0 && s2 == 0.0)) {
        throw std::invalid_argument("antipodal_pe_exact: decoder eigenvalues must be nonnegative "
                                    "and not both zero");
    }
    const double cab = std::cos(alpha + beta);
    const double sab = std::sin(alpha + beta);
    const double cb = std::cos(beta);
    const double sb = std::sin(beta);
    const double num = s1 * cab * cab + s2 * sab * sab;
    const double t1 = s1 * cb * cab + s2 * sb * sab;
    const double t2 = -s1 * sb * cab + s2 * cb * sab;
    const double tau = std::sqrt(sigma1 * sigma1 * t1 * t1 + sigma2 * sigma2 * t2 * t2);
    if (!(tau > 0.0)) {
        throw std::invalid_argument("antipodal_pe_exact: decision statistic is degenerate");
    }
    return q_function(num / tau);
}

double zero_one_generalization_bound(const BoundInputs& b) {
    check_common(b);
    if (b.n < b.d + 1) {
        throw std::invalid_argument("zero_one_generalization_bound: requires n >= d + 1");
    }
    const double n = b.n;
    const double dp1 = b.d + 1.0;
    const double complexity = 4.0 * b.m * std::sqrt(2.0 * dp1 * std::log(M_E * n / dp1) / n);
    const double confidence = std::sqrt(2.0 * std::log(2.0 / b.delta) / n);
    return complexity + confidence;
}

double hinge_generalization_bound(const BoundInputs& b) {
    check_common(b);
    if (b.r_x < 1.0 || b.r_s < 1.0) {
        throw std::invalid_argument("hinge_generalization_bound: requires r_x >= 1 and r_s >= 1");
    }
    const double n = b.n;
    const double dm = std::max(b.d, b.m);
    const double complexity =
        112.0 * std::sqrt(dm * (b.d + 1.0) * std::log(31.0 * b.d * b.r_s * b.r_x) / n);
    const double range = std::max(1.0, 4.0 * b.r_x * b.r_s * (b.r_x + 1.0));
    const double confidence = std::sqrt(2.0 * range * range * std::log(2.0 / b.delta) / n);
    return complexity + confidence;
}

ExpurgationBounds expurgation_bounds(const BoundInputs& b) {
    check_common(b);
    ExpurgationBounds out;
    out.steps = expurgation_steps(b);
    const double n = b.n;
    const double T = out.steps;
    const double logn = std::log(n);
    const double logm0 = std::log(static_cast<double>(b.m0));
    const double logk = std::log(static_cast<double>(b.k));
    out.premise_ok = b.beta * b.beta * (logn + (0.5 * b.m0 + 1.0) * logm0 - logk) <= 0.5 * n;
    out.empirical_excess =
        3.0 * std::sqrt(T * b.beta * b.beta * (logn + b.m0 * logm0 - logk) / n);
    const double rate = std::min(b.beta / n, b.beta * b.beta / (4.0 * n * n));
    out.generalization = std::sqrt(T * rate);
    return out;
}

double expurgation_high_prob_bound(const BoundInputs& b) {
    check_common(b);
    const double T = expurgation_steps(b);
    if (!(b.c_abs > 0.0)) {
        throw std::invalid_argument("expurgation_high_prob_bound: c_abs must be positive");
    }
    const double n = b.n;
    const double bsqt = b.beta * std::sqrt(T);
    if (!(bsqt < n)) {
        throw std::invalid_argument("expurgation_high_prob_bound: requires beta * sqrt(steps) < n");
    }
    return b.c_abs * (bsqt / n + 1.0 / std::sqrt(n)) * std::log(n / bsqt) * std::log(n) *
           std::log(n / b.delta);
}

}  // namespace chanlearn

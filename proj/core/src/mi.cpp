#include "chanlearn/mi.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "chanlearn/stats.hpp"

namespace chanlearn {

namespace {

constexpr double kLogFloor = -745.0;  // roughly log of the smallest positive double

void check_model(const KdeModel& model) {
    if (model.count() < 1) throw std::invalid_argument("kernel model has no centers");
    if (!(model.theta > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
}

// Normalizer of the Epanechnikov kernel on the unit ball in d dimensions,
// (d + 2) / (2 V_d) with V_d the unit-ball volume.
double log_epanechnikov_const(int d) {
    const double log_vd = 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
    return std::log(0.5 * (d + 2.0)) - log_vd;
}

Vec uniform_in_ball(int d, Rng& rng) {
    Vec g(d);
    double norm;
    do {
        for (int q = 0; q < d; ++q) g(q) = rng.normal();
        norm = g.norm();
    } while (norm == 0.0);
    const double r = std::pow(rng.uniform01(), 1.0 / d);
    return g * (r / norm);
}

}  // namespace

double kde_log_density(const KdeModel& model, const Vec& y) {
    check_model(model);
    const int d = model.dim();
    if (static_cast<int>(y.size()) != d) {
        throw std::invalid_argument("kde_log_density: dimension mismatch");
    }
    const int n = model.count();
    const double theta2 = model.theta * model.theta;
    if (model.kernel == Kernel::kGaussian) {
        std::vector<double> terms(n);
        for (int i = 0; i < n; ++i) {
            terms[i] = -(y - model.centers.col(i)).squaredNorm() / (2.0 * theta2);
        }
        return logsumexp(terms) - std::log(static_cast<double>(n)) -
               0.5 * d * std::log(2.0 * M_PI * theta2);
    }
    // Epanechnikov terms are O(1), so a direct sum is safe; only the empty
    // support case needs care.
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u2 = (y - model.centers.col(i)).squaredNorm() / theta2;
        if (u2 < 1.0) sum += 1.0 - u2;
    }
    if (sum <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(sum) + log_epanechnikov_const(d) - std::log(static_cast<double>(n)) -
           d * std::log(model.theta);
}

double kde_density(const KdeModel& model, const Vec& y) {
    return std::exp(kde_log_density(model, y));
}

Vec kde_sample(const KdeModel& model, Rng& rng) {
    check_model(model);
    const int d = model.dim();
    const int i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(model.count())));
    if (model.kernel == Kernel::kGaussian) {
        Vec g(d);
        for (int q = 0; q < d; ++q) g(q) = rng.normal();
        return model.centers.col(i) + model.theta * g;
    }
    // Rejection from the uniform ball: accept with probability 1 - |u|^2,
    // which is exactly the Epanechnikov shape.
    while (true) {
        const Vec u = uniform_in_ball(d, rng);
        if (rng.uniform01() < 1.0 - u.squaredNorm()) {
            return model.centers.col(i) + model.theta * u;
        }
    }
}

MixtureComponent gaussian_component(const Vec& mean, const Mat& cov) {
    const int d = static_cast<int>(mean.size());
    if (cov.rows() != d || cov.cols() != d) {
        throw std::invalid_argument("gaussian_component: covariance shape mismatch");
    }
    Eigen::LLT<Mat> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("gaussian_component: covariance not positive definite");
    }
    struct Shared {
        Vec mean;
        Mat chol;
        double log_norm;
    };
    auto shared = std::make_shared<Shared>();
    shared->mean = mean;
    shared->chol = llt.matrixL();
    double logdet = 0.0;
    for (int q = 0; q < d; ++q) logdet += 2.0 * std::log(shared->chol(q, q));
    shared->log_norm = -0.5 * (d * std::log(2.0 * M_PI) + logdet);

    MixtureComponent comp;
    comp.log_density = [shared](const Vec& y) {
        const Vec w = shared->chol.template triangularView<Eigen::Lower>().solve(y - shared->mean);
        return shared->log_norm - 0.5 * w.squaredNorm();
    };
    comp.sample = [shared, d](Rng& rng) {
        Vec g(d);
        for (int q = 0; q < d; ++q) g(q) = rng.normal();
        return Vec(shared->mean + shared->chol * g);
    };
    return comp;
}

std::vector<MixtureComponent> shifted_components(const Codebook& C, const KdeModel& model) {
    check_model(model);
    if (C.dim() != model.dim()) {
        throw std::invalid_argument("shifted_components: dimension mismatch");
    }
    auto shared = std::make_shared<const KdeModel>(model);
    std::vector<MixtureComponent> comps;
    comps.reserve(C.size());
    for (int j = 0; j < C.size(); ++j) {
        const Vec xj = C.X.col(j);
        MixtureComponent comp;
        comp.log_density = [shared, xj](const Vec& y) { return kde_log_density(*shared, y - xj); };
        comp.sample = [shared, xj](Rng& rng) { return Vec(xj + kde_sample(*shared, rng)); };
        comps.push_back(std::move(comp));
    }
    return comps;
}

EntropyEstimate mixture_entropy_mc(const std::vector<MixtureComponent>& comps,
                                   const std::vector<double>& weights, int n_mc, Rng& rng) {
    const std::size_t m = comps.size();
    if (m == 0 || weights.size() != m) {
        throw std::invalid_argument("mixture_entropy_mc: component/weight mismatch");
    }
    if (n_mc < 2) throw std::invalid_argument("mixture_entropy_mc: n_mc must be at least 2");

    std::vector<double> log_w(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (weights[j] < 0.0) throw std::invalid_argument("mixture_entropy_mc: negative weight");
        log_w[j] = weights[j] > 0.0 ? std::log(weights[j])
                                    : -std::numeric_limits<double>::infinity();
    }

    EntropyEstimate out;
    std::vector<double> neg_log(n_mc);
    std::vector<double> terms(m);
    for (int s = 0; s < n_mc; ++s) {
        const int j = draw_categorical(weights, rng);
        const Vec y = comps[j].sample(rng);
        for (std::size_t l = 0; l < m; ++l) {
            terms[l] = log_w[l] + (std::isinf(log_w[l]) ? 0.0 : comps[l].log_density(y));
        }
        double lm = logsumexp(terms);
        if (std::isinf(lm)) {
            lm = kLogFloor;
            ++out.floored;
        }
        neg_log[s] = -lm;
    }
    out.value = pairwise_mean(neg_log);
    out.se = sample_std(neg_log) / std::sqrt(static_cast<double>(n_mc));
    return out;
}

BaResult blahut_arimoto(const Codebook& C, const KdeModel& model, const BaConfig& cfg, Rng& rng) {
    check_model(model);
    const int m = C.size();
    const int d = C.dim();
    if (model.dim() != d) throw std::invalid_argument("blahut_arimoto: dimension mismatch");
    if (m < 1) throw std::invalid_argument("blahut_arimoto: empty codebook");
    if (cfg.n_mc < 2 || cfg.max_iters < 1 || !(cfg.tol > 0.0)) {
        throw std::invalid_argument("blahut_arimoto: bad configuration");
    }
    if (m == 1) {
        BaResult single;
        single.weights = {1.0};
        single.trace.push_back({0, 0.0, 0.0});
        single.converged = true;
        return single;
    }
    const int n_mc = cfg.n_mc;

    // One shared set of noise draws serves every codeword and iteration, so
    // the divergence estimates are common-random-number comparable. By shift
    // invariance, log p(y | x_j) at y = x_j + z is the model density at z for
    // every j.
    Mat Z(d, n_mc);
    for (int s = 0; s < n_mc; ++s) Z.col(s) = kde_sample(model, rng);
    std::vector<double> own(n_mc);
    for (int s = 0; s < n_mc; ++s) own[s] = kde_log_density(model, Z.col(s));

    const bool cache = static_cast<double>(m) * m * n_mc <= 2e7;
    std::vector<double> L;
    auto cross = [&](int j, int l, int s) {
        return kde_log_density(model, Vec(C.X.col(j) + Z.col(s) - C.X.col(l)));
    };
    if (cache) {
        L.resize(static_cast<std::size_t>(m) * m * n_mc);
        for (int j = 0; j < m; ++j) {
            for (int l = 0; l < m; ++l) {
                double* dst = &L[(static_cast<std::size_t>(j) * m + l) * n_mc];
                if (l == j) {
                    for (int s = 0; s < n_mc; ++s) dst[s] = own[s];
                } else {
                    for (int s = 0; s < n_mc; ++s) dst[s] = cross(j, l, s);
                }
            }
        }
    }

    BaResult out;
    out.weights.assign(m, 1.0 / m);
    std::vector<double> best_weights = out.weights;
    double best_mi = -std::numeric_limits<double>::infinity();
    std::vector<double> log_a(m), terms(m), per_j(n_mc), per_draw(n_mc), D(m);
    for (int t = 0; t < cfg.max_iters; ++t) {
        for (int j = 0; j < m; ++j) {
            log_a[j] = std::log(out.weights[j]);
        }
        std::fill(per_draw.begin(), per_draw.end(), 0.0);
        for (int j = 0; j < m; ++j) {
            for (int s = 0; s < n_mc; ++s) {
                for (int l = 0; l < m; ++l) {
                    const double cl =
                        cache ? L[(static_cast<std::size_t>(j) * m + l) * n_mc + s]
                              : (l == j ? own[s] : cross(j, l, s));
                    terms[l] = log_a[l] + cl;
                }
                const double gap = own[s] - logsumexp(terms);
                per_j[s] = gap;
                per_draw[s] += out.weights[j] * gap;
            }
            D[j] = pairwise_mean(per_j);
        }
        BaIterate it;
        it.iter = t;
        it.mi_estimate = pairwise_mean(per_draw);
        it.se = sample_std(per_draw) / std::sqrt(static_cast<double>(n_mc));
        out.trace.push_back(it);
        if (it.mi_estimate > best_mi) {
            best_mi = it.mi_estimate;
            best_weights = out.weights;
        }

        double dmax = D[0];
        for (int j = 1; j < m; ++j) dmax = std::max(dmax, D[j]);
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            terms[j] = out.weights[j] * std::exp(D[j] - dmax);
            sum += terms[j];
        }
        double delta = 0.0;
        for (int j = 0; j < m; ++j) {
            const double next = terms[j] / sum;
            delta = std::max(delta, std::abs(next - out.weights[j]));
            out.weights[j] = next;
        }
        if (delta < cfg.tol) {
            out.converged = true;
            break;
        }
    }
    // Without convergence the last update is not vouched for; hand back the
    // iterate whose estimated objective was best.
    if (!out.converged) out.weights = std::move(best_weights);
    return out;
}

double weighted_power(const Codebook& C, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != C.size()) {
        throw std::invalid_argument("weighted_power: weight count mismatch");
    }
    double acc = 0.0;
    for (int j = 0; j < C.size(); ++j) {
        acc += weights[j] * C.X.col(j).squaredNorm();
    }
    return acc;
}

EntropyDifference entropy_difference_estimate(const Codebook& C, const std::vector<double>& weights,
                                              const std::function<Vec(Rng&)>& exact_noise_sampler,
                                              const KdeModel& model, int n_mc, Rng& rng) {
    check_model(model);
    const int d = C.dim();
    if (model.dim() != d) {
        throw std::invalid_argument("entropy_difference_estimate: dimension mismatch");
    }
    const EntropyEstimate model_h =
        mixture_entropy_mc(shifted_components(C, model), weights, n_mc, rng);

    // Reference: a dense Gaussian kernel estimate from fresh exact-channel
    // draws at a Silverman bandwidth, which shrinks with the draw count while
    // the model bandwidth stays fixed.
    const int n_fine = std::max(2000, model.count());
    KdeModel fine;
    fine.kernel = Kernel::kGaussian;
    fine.centers.resize(d, n_fine);
    for (int i = 0; i < n_fine; ++i) fine.centers.col(i) = exact_noise_sampler(rng);
    double var_sum = 0.0;
    for (int q = 0; q < d; ++q) {
        const double mu = fine.centers.row(q).mean();
        var_sum += (fine.centers.row(q).array() - mu).square().sum() / (n_fine - 1);
    }
    const double sigma_hat = std::sqrt(var_sum / d);
    fine.theta = std::max(1.06 * sigma_hat * std::pow(static_cast<double>(n_fine), -1.0 / (d + 4)),
                          1e-12);

    const EntropyEstimate fine_h =
        mixture_entropy_mc(shifted_components(C, fine), weights, n_mc, rng);

    EntropyDifference out;
    out.difference = model_h.value - fine_h.value;
    out.se = std::hypot(model_h.se, fine_h.se);
    out.floored = model_h.floored + fine_h.floored;
    return out;
}

}  // namespace chanlearn

#include "chanlearn/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chanlearn/analysis.hpp"
#include "chanlearn/gibbs.hpp"
#include "chanlearn/mi.hpp"
#include "chanlearn/noise.hpp"
#include "chanlearn/sgd.hpp"
#include "chanlearn/stats.hpp"

namespace chanlearn {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_beta(double beta) {
    if (std::isinf(beta)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", beta);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

double now_seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// All randomness of run r flows from these, so any single run is
/// reproducible without executing the ones before it.
struct RunSeeds {
    std::uint64_t channel_group = 0;
    std::uint64_t codebook = 0;
    std::uint64_t train = 0;
    std::uint64_t validation = 0;
    std::uint64_t algorithm = 0;
};

RunSeeds make_seeds(const ExperimentConfig& cfg, int run) {
    const int group = run / cfg.runs_per_distribution;
    RunSeeds s;
    s.channel_group = derive_seed(cfg.seed, Stream::kDistribution, group);
    s.codebook = derive_seed(cfg.seed, Stream::kCodebook, run);
    s.train = derive_seed(cfg.seed, Stream::kTrain, run);
    s.validation = derive_seed(cfg.seed, Stream::kValidation, run);
    s.algorithm = derive_seed(cfg.seed, Stream::kAlgorithm, run);
    return s;
}

json seeds_json(const RunSeeds& s) {
    return json{{"channel_group", s.channel_group},
                {"codebook", s.codebook},
                {"train", s.train},
                {"validation", s.validation},
                {"algorithm", s.algorithm}};
}

/// One noise source a run samples from: either the fixed two-dimensional
/// Gaussian or a freshly drawn interference channel for the run's group.
struct ChannelSetup {
    ChannelKind kind = ChannelKind::kGaussian2d;
    Mat gaussian_cov;
    GaussianMixtureChannel gm;

    Mat calibration_cov() const {
        return kind == ChannelKind::kGaussian2d ? gaussian_cov : gm.pre_projection_cov();
    }

    NoiseBatch sample(int n, Rng& rng, BatchOrigin origin) const {
        NoiseBatch b = kind == ChannelKind::kGaussian2d ? sample_gaussian(gaussian_cov, n, rng)
                                                        : gm.sample(n, rng);
        b.origin = origin;
        return b;
    }
};

ChannelSetup make_channel(const ExperimentConfig& cfg, const RunSeeds& seeds) {
    ChannelSetup ch;
    ch.kind = cfg.channel;
    if (cfg.channel == ChannelKind::kGaussian2d) {
        ch.gaussian_cov = reference_gaussian_cov();
    } else {
        Rng rng(seeds.channel_group);
        ch.gm = draw_gm_channel(cfg.d, cfg.s_paths, rng, cfg.project_noise, cfg.chi_z);
    }
    return ch;
}

double reduction_factor(double initial, double final_value, int m, int batch_size) {
    // Zero final error is reported against the resolution floor of the batch
    // instead of dividing by zero.
    const double floor = 1.0 / (static_cast<double>(m) * batch_size);
    return initial / std::max(final_value, floor);
}

void run_pool(int n_tasks, int workers, bool, const std::function<void(int)>& task) {
    if (workers <= 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : static_cast<int>(hw);
    }
    workers = std::min(workers, n_tasks);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::string first_error;
    auto body = [&]() {
        while (!failed.load()) {
            const int t = next.fetch_add(1);
            if (t >= n_tasks) break;
            try {
                task(t);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty()) {
                    first_error = "run " + std::to_string(t) + ": " + e.what();
                }
                failed.store(true);
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error(first_error);
}

GibbsConfig::ValEval parse_val_eval(const std::string& v) {
    if (v == "none") return GibbsConfig::ValEval::kNone;
    if (v == "final") return GibbsConfig::ValEval::kFinalOnly;
    return GibbsConfig::ValEval::kEveryStep;
}

struct MetricColumn {
    std::vector<double> values;  // across runs, indexed by run
};

void append_mean_q80(std::ostringstream& row, const std::vector<double>& values, bool valid) {
    if (!valid) {
        row << ",nan,nan";
        return;
    }
    row << "," << fmt17(pairwise_mean(values)) << ","
        << fmt17(quantile_nearest_rank(values, 0.8));
}

// ---------------------------------------------------------------------------
// sgd mode

int run_sgd(const ExperimentConfig& cfg, const RunOptions& opts) {
    const fs::path out_dir(opts.out_dir);
    const bool have_val = cfg.n_val > 0;

    struct StoredRun {
        TrainTrace trace;
    };

    // Mean |validation - train| gap per recorded point, kept per codebook
    // size for the cross-size ratio file.
    std::vector<std::vector<double>> hinge_gaps_by_m;
    std::vector<std::vector<double>> pe_gaps_by_m;
    std::vector<int> iters_grid;

    for (const int m : cfg.m_list) {
        std::vector<StoredRun> stored(cfg.n_runs);
        const auto t_sweep = std::chrono::steady_clock::now();
        if (!opts.quiet) {
            std::cout << "sgd m=" << m << ": " << cfg.n_runs << " run(s)" << std::endl;
        }
        run_pool(cfg.n_runs, opts.workers, opts.quiet, [&](int r) {
            const auto t0 = std::chrono::steady_clock::now();
            const RunSeeds seeds = make_seeds(cfg, r);
            const ChannelSetup channel = make_channel(cfg, seeds);
            const PowerCalibration cal =
                calibrate_power(channel.calibration_cov(), cfg.phi_x, cfg.gamma, m);

            Rng cb_rng(seeds.codebook);
            const Codebook C0 =
                random_codebook(m, cfg.d, cal.r_x, cfg.phi_x, cb_rng, cfg.project_codebook);
            Rng tr_rng(seeds.train);
            const NoiseBatch train = channel.sample(cfg.n_train, tr_rng, BatchOrigin::kTrain);
            NoiseBatch val;
            if (have_val) {
                Rng val_rng(seeds.validation);
                val = channel.sample(cfg.n_val, val_rng, BatchOrigin::kValidation);
            }
            bool ridge_used = false;
            const DecoderMatrix S0 =
                init_decoder_from_samples(train, cfg.d, cfg.r_s, &ridge_used);

            SgdConfig sc;
            sc.lambda = cfg.lambda;
            sc.eta = cfg.eta;
            sc.r_x = cal.r_x;
            sc.r_s = cfg.r_s;
            sc.n_iters = cfg.n_iters;
            sc.record_every = cfg.record_every;
            SgdResult res = sgd_run(C0, S0, train, have_val ? &val : nullptr, sc);

            char stem[64];
            std::snprintf(stem, sizeof(stem), "run_m%d_r%04d", m, r);
            std::ostringstream csv;
            csv << "iter,train_hinge,val_hinge,train_pe,val_pe\n";
            for (const TracePoint& p : res.trace.points) {
                csv << p.iter << "," << fmt17(p.train_hinge) << "," << fmt17(p.val_hinge) << ","
                    << fmt17(p.train_pe) << "," << fmt17(p.val_pe) << "\n";
            }
            write_text(out_dir / (std::string(stem) + ".csv"), csv.str());

            const TracePoint& first = res.trace.points.front();
            const TracePoint& last = res.trace.points.back();
            json rec;
            rec["mode"] = "sgd";
            rec["config_hash"] = config_hash(cfg);
            rec["m"] = m;
            rec["run"] = r;
            rec["master_seed"] = cfg.seed;
            rec["seeds"] = seeds_json(seeds);
            rec["r_min"] = cal.r_min;
            rec["r_x"] = cal.r_x;
            rec["ridge_used"] = ridge_used;
            rec["initial"] = {{"train_hinge", first.train_hinge},
                              {"val_hinge", first.val_hinge},
                              {"train_pe", first.train_pe},
                              {"val_pe", first.val_pe}};
            rec["final"] = {{"train_hinge", last.train_hinge},
                            {"val_hinge", last.val_hinge},
                            {"train_pe", last.train_pe},
                            {"val_pe", last.val_pe}};
            rec["reduction_factor"] =
                have_val ? reduction_factor(first.val_pe, last.val_pe, m, cfg.n_val)
                         : reduction_factor(first.train_pe, last.train_pe, m, cfg.n_train);
            json trace = json::array();
            for (const TracePoint& p : res.trace.points) {
                trace.push_back({p.iter, p.train_hinge, p.val_hinge, p.train_pe, p.val_pe});
            }
            rec["trace"] = trace;
            rec["wall_seconds"] = now_seconds_since(t0);
            write_text(out_dir / (std::string(stem) + ".json"), rec.dump(2) + "\n");

            stored[r].trace = std::move(res.trace);
        });

        // Aggregate over runs. Every run shares one recording grid, so rows
        // align by point index.
        const std::size_t n_points = stored.front().trace.points.size();
        std::ostringstream agg;
        agg << "iter,train_hinge_mean,train_hinge_q80,val_hinge_mean,val_hinge_q80,"
               "train_pe_mean,train_pe_q80,val_pe_mean,val_pe_q80\n";
        std::vector<double> hinge_gap_points, pe_gap_points;
        std::vector<int> grid;
        for (std::size_t p = 0; p < n_points; ++p) {
            std::vector<double> th(cfg.n_runs), vh(cfg.n_runs), tp(cfg.n_runs), vp(cfg.n_runs);
            for (int r = 0; r < cfg.n_runs; ++r) {
                const TracePoint& pt = stored[r].trace.points[p];
                th[r] = pt.train_hinge;
                vh[r] = pt.val_hinge;
                tp[r] = pt.train_pe;
                vp[r] = pt.val_pe;
            }
            const int iter = stored.front().trace.points[p].iter;
            grid.push_back(iter);
            std::ostringstream row;
            row << iter;
            append_mean_q80(row, th, true);
            append_mean_q80(row, vh, have_val);
            append_mean_q80(row, tp, true);
            append_mean_q80(row, vp, have_val);
            agg << row.str() << "\n";
            if (have_val) {
                std::vector<double> hg(cfg.n_runs), pg(cfg.n_runs);
                for (int r = 0; r < cfg.n_runs; ++r) {
                    hg[r] = std::abs(vh[r] - th[r]);
                    pg[r] = std::abs(vp[r] - tp[r]);
                }
                hinge_gap_points.push_back(pairwise_mean(hg));
                pe_gap_points.push_back(pairwise_mean(pg));
            }
        }
        write_text(out_dir / ("agg_m" + std::to_string(m) + ".csv"), agg.str());
        hinge_gaps_by_m.push_back(std::move(hinge_gap_points));
        pe_gaps_by_m.push_back(std::move(pe_gap_points));
        if (iters_grid.empty()) iters_grid = grid;

        std::ostringstream finals;
        finals << "run,seed,final_train_hinge,final_val_hinge,final_train_pe,final_val_pe\n";
        for (int r = 0; r < cfg.n_runs; ++r) {
            const TracePoint& last = stored[r].trace.points.back();
            finals << r << "," << make_seeds(cfg, r).algorithm << "," << fmt17(last.train_hinge)
                   << "," << fmt17(last.val_hinge) << "," << fmt17(last.train_pe) << ","
                   << fmt17(last.val_pe) << "\n";
        }
        write_text(out_dir / ("finals_m" + std::to_string(m) + ".csv"), finals.str());
        if (!opts.quiet) {
            std::cout << "sgd m=" << m << ": done in " << fmt17(now_seconds_since(t_sweep))
                      << " s" << std::endl;
        }
    }

    // Generalization-gap ratios against the first codebook size in the
    // sweep, per recorded point.
    if (cfg.m_list.size() > 1 && have_val) {
        std::ostringstream ratios;
        ratios << "iter,m,hinge_gap,pe_gap,hinge_ratio,pe_ratio\n";
        for (std::size_t mi = 0; mi < cfg.m_list.size(); ++mi) {
            for (std::size_t p = 0; p < iters_grid.size(); ++p) {
                const double hg = hinge_gaps_by_m[mi][p];
                const double pg = pe_gaps_by_m[mi][p];
                const double href = hinge_gaps_by_m[0][p];
                const double pref = pe_gaps_by_m[0][p];
                ratios << iters_grid[p] << "," << cfg.m_list[mi] << "," << fmt17(hg) << ","
                       << fmt17(pg) << "," << fmt17(href > 0.0 ? hg / href : std::nan("")) << ","
                       << fmt17(pref > 0.0 ? pg / pref : std::nan("")) << "\n";
            }
        }
        write_text(out_dir / "ratios.csv", ratios.str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// gibbs mode

int run_gibbs(const ExperimentConfig& cfg, const RunOptions& opts) {
    const fs::path out_dir(opts.out_dir);
    const bool have_val = cfg.n_val > 0;

    for (const double beta : cfg.beta_list) {
        const std::string tag = "b" + fmt_beta(beta);
        struct StoredRun {
            std::vector<double> train_pe;
            std::vector<double> val_pe;
            std::vector<int> sizes;
        };
        std::vector<StoredRun> stored(cfg.n_runs);
        const auto t_sweep = std::chrono::steady_clock::now();
        if (!opts.quiet) {
            std::cout << "gibbs beta=" << fmt_beta(beta) << ": " << cfg.n_runs << " run(s)"
                      << std::endl;
        }
        run_pool(cfg.n_runs, opts.workers, opts.quiet, [&](int r) {
            const auto t0 = std::chrono::steady_clock::now();
            const RunSeeds seeds = make_seeds(cfg, r);
            const ChannelSetup channel = make_channel(cfg, seeds);
            // Power is budgeted for the full initial codebook; expurgation
            // then only removes codewords.
            const PowerCalibration cal =
                calibrate_power(channel.calibration_cov(), cfg.phi_x, cfg.gamma, cfg.m0);

            Rng cb_rng(seeds.codebook);
            const Codebook C0 =
                random_codebook(cfg.m0, cfg.d, cal.r_x, cfg.phi_x, cb_rng, cfg.project_codebook);
            Rng tr_rng(seeds.train);
            const NoiseBatch train = channel.sample(cfg.n_train, tr_rng, BatchOrigin::kTrain);
            NoiseBatch val;
            if (have_val) {
                Rng val_rng(seeds.validation);
                val = channel.sample(cfg.n_val, val_rng, BatchOrigin::kValidation);
            }
            const DecoderMatrix S = DecoderMatrix::identity(cfg.d);

            GibbsConfig gc;
            gc.m_target = cfg.m;
            gc.k = cfg.k;
            gc.beta = beta;
            gc.val_eval = parse_val_eval(cfg.val_eval);
            Rng al_rng(seeds.algorithm);
            GibbsResult res = gibbs_run(C0, S, train, have_val ? &val : nullptr, gc, al_rng);

            char stem[64];
            std::snprintf(stem, sizeof(stem), "run_%s_r%04d", tag.c_str(), r);
            std::ostringstream csv;
            csv << "step,m,train_pe,val_pe\n";
            for (const ExpurgationPoint& p : res.trace.points) {
                csv << p.step << "," << p.surviving.size() << "," << fmt17(p.train_pe) << ","
                    << fmt17(p.val_pe) << "\n";
            }
            write_text(out_dir / (std::string(stem) + ".csv"), csv.str());

            const ExpurgationPoint& first = res.trace.points.front();
            const ExpurgationPoint& last = res.trace.points.back();
            json rec;
            rec["mode"] = "gibbs";
            rec["config_hash"] = config_hash(cfg);
            rec["beta"] = std::isinf(beta) ? json() : json(beta);
            rec["run"] = r;
            rec["master_seed"] = cfg.seed;
            rec["seeds"] = seeds_json(seeds);
            rec["r_min"] = cal.r_min;
            rec["r_x"] = cal.r_x;
            rec["m0"] = cfg.m0;
            rec["m"] = cfg.m;
            rec["k"] = cfg.k;
            rec["surviving"] = res.surviving;
            rec["initial"] = {{"train_pe", first.train_pe}, {"val_pe", first.val_pe}};
            rec["final"] = {{"train_pe", last.train_pe}, {"val_pe", last.val_pe}};
            json trace = json::array();
            for (const ExpurgationPoint& p : res.trace.points) {
                trace.push_back({p.step, static_cast<int>(p.surviving.size()), p.train_pe, p.val_pe});
            }
            rec["trace"] = trace;
            rec["wall_seconds"] = now_seconds_since(t0);
            write_text(out_dir / (std::string(stem) + ".json"), rec.dump(2) + "\n");

            StoredRun& st = stored[r];
            for (const ExpurgationPoint& p : res.trace.points) {
                st.train_pe.push_back(p.train_pe);
                st.val_pe.push_back(p.val_pe);
                st.sizes.push_back(static_cast<int>(p.surviving.size()));
            }
        });

        const std::size_t n_points = stored.front().train_pe.size();
        const bool val_rows = have_val && cfg.val_eval == "every-step";
        std::ostringstream agg;
        agg << "step,m,train_pe_mean,train_pe_q80,val_pe_mean,val_pe_q80\n";
        for (std::size_t p = 0; p < n_points; ++p) {
            std::vector<double> tp(cfg.n_runs), vp(cfg.n_runs);
            for (int r = 0; r < cfg.n_runs; ++r) {
                tp[r] = stored[r].train_pe[p];
                vp[r] = stored[r].val_pe[p];
            }
            const bool have_this_row =
                val_rows || (have_val && cfg.val_eval == "final" && p == n_points - 1);
            std::ostringstream row;
            row << p << "," << stored.front().sizes[p];
            append_mean_q80(row, tp, true);
            append_mean_q80(row, vp, have_this_row);
            agg << row.str() << "\n";
        }
        write_text(out_dir / ("agg_" + tag + ".csv"), agg.str());

        std::ostringstream finals;
        finals << "run,seed,final_train_pe,final_val_pe\n";
        for (int r = 0; r < cfg.n_runs; ++r) {
            finals << r << "," << make_seeds(cfg, r).algorithm << ","
                   << fmt17(stored[r].train_pe.back()) << "," << fmt17(stored[r].val_pe.back())
                   << "\n";
        }
        write_text(out_dir / ("finals_" + tag + ".csv"), finals.str());
        if (!opts.quiet) {
            std::cout << "gibbs beta=" << fmt_beta(beta) << ": done in "
                      << fmt17(now_seconds_since(t_sweep)) << " s" << std::endl;
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// mi mode

int run_mi(const ExperimentConfig& cfg, const RunOptions& opts) {
    const fs::path out_dir(opts.out_dir);
    run_pool(cfg.n_runs, opts.workers, opts.quiet, [&](int r) {
        const auto t0 = std::chrono::steady_clock::now();
        const RunSeeds seeds = make_seeds(cfg, r);
        const ChannelSetup channel = make_channel(cfg, seeds);
        const PowerCalibration cal =
            calibrate_power(channel.calibration_cov(), cfg.phi_x, cfg.gamma, cfg.m);

        Rng cb_rng(seeds.codebook);
        const Codebook C =
            random_codebook(cfg.m, cfg.d, cal.r_x, cfg.phi_x, cb_rng, cfg.project_codebook);
        Rng tr_rng(seeds.train);
        const NoiseBatch train = channel.sample(cfg.n_train, tr_rng, BatchOrigin::kTrain);

        KdeModel model;
        model.centers = train.samples;
        model.theta = cfg.theta;
        model.kernel = cfg.kernel == "gaussian" ? Kernel::kGaussian : Kernel::kEpanechnikov;

        BaConfig bc;
        bc.n_mc = cfg.n_mc;
        bc.max_iters = cfg.ba_max_iters;
        bc.tol = cfg.ba_tol;
        Rng al_rng(seeds.algorithm);
        const BaResult ba = blahut_arimoto(C, model, bc, al_rng);

        Rng ed_rng(seeds.validation);
        const auto exact_sampler = [&channel](Rng& rng) {
            return Vec(channel.sample(1, rng, BatchOrigin::kValidation).samples.col(0));
        };
        const EntropyDifference ed =
            entropy_difference_estimate(C, ba.weights, exact_sampler, model, cfg.n_mc, ed_rng);

        char stem[64];
        std::snprintf(stem, sizeof(stem), "ba_r%04d", r);
        std::ostringstream csv;
        csv << "iter,mi_estimate,se\n";
        for (const BaIterate& it : ba.trace) {
            csv << it.iter << "," << fmt17(it.mi_estimate) << "," << fmt17(it.se) << "\n";
        }
        write_text(out_dir / (std::string(stem) + ".csv"), csv.str());

        json rec;
        rec["mode"] = "mi";
        rec["config_hash"] = config_hash(cfg);
        rec["run"] = r;
        rec["master_seed"] = cfg.seed;
        rec["seeds"] = seeds_json(seeds);
        rec["r_min"] = cal.r_min;
        rec["r_x"] = cal.r_x;
        rec["kernel"] = cfg.kernel;
        rec["theta"] = cfg.theta;
        rec["weights"] = ba.weights;
        rec["converged"] = ba.converged;
        rec["mi_final"] = ba.trace.back().mi_estimate;
        rec["mi_final_se"] = ba.trace.back().se;
        rec["weighted_power"] = weighted_power(C, ba.weights);
        rec["power_budget"] = cal.r_x * cal.r_x;
        rec["entropy_difference"] = ed.difference;
        rec["entropy_difference_se"] = ed.se;
        rec["floored_draws"] = ed.floored;
        json trace = json::array();
        for (const BaIterate& it : ba.trace) trace.push_back({it.iter, it.mi_estimate, it.se});
        rec["trace"] = trace;
        rec["wall_seconds"] = now_seconds_since(t0);
        write_text(out_dir / (std::string(stem) + ".json"), rec.dump(2) + "\n");

        if (!opts.quiet) {
            std::ostringstream line;
            line << "mi run " << r << ": I=" << fmt17(ba.trace.back().mi_estimate)
                 << " nats (se " << fmt17(ba.trace.back().se) << "), "
                 << (ba.converged ? "converged" : "not converged") << "\n";
            std::cout << line.str() << std::flush;
        }
    });
    return 0;
}

// ---------------------------------------------------------------------------
// bounds mode

int run_bounds(const ExperimentConfig& cfg, const RunOptions& opts) {
    BoundInputs b;
    b.n = cfg.n_train;
    b.d = cfg.d;
    b.m = cfg.m;
    b.delta = cfg.delta;
    b.r_x = cfg.r_x;
    b.r_s = cfg.r_s;
    b.m0 = cfg.m0;
    b.k = cfg.k;
    b.c_abs = cfg.c_abs;

    json rep;
    rep["mode"] = "bounds";
    rep["config_hash"] = config_hash(cfg);
    rep["inputs"] = {{"n", b.n},     {"d", b.d},     {"m", b.m},   {"delta", b.delta},
                     {"r_x", b.r_x}, {"r_s", b.r_s}, {"m0", b.m0}, {"k", b.k},
                     {"c_abs", b.c_abs}};
    rep["zero_one"] = zero_one_generalization_bound(b);
    rep["hinge"] = hinge_generalization_bound(b);
    json expg = json::array();
    for (const double beta : cfg.beta_list) {
        b.beta = beta;
        const ExpurgationBounds eb = expurgation_bounds(b);
        json entry;
        entry["beta"] = beta;
        entry["steps"] = eb.steps;
        entry["premise_ok"] = eb.premise_ok;
        entry["empirical_excess"] = eb.empirical_excess;
        entry["generalization"] = eb.generalization;
        // The high-probability rate only applies below its own premise; an
        // out-of-range beta is reported as inapplicable, not an error.
        if (beta * std::sqrt(static_cast<double>(eb.steps)) < b.n) {
            entry["high_prob"] = expurgation_high_prob_bound(b);
            entry["high_prob_applicable"] = true;
        } else {
            entry["high_prob"] = nullptr;
            entry["high_prob_applicable"] = false;
        }
        expg.push_back(entry);
    }
    rep["expurgation"] = expg;

    write_text(fs::path(opts.out_dir) / "bounds.json", rep.dump(2) + "\n");
    if (!opts.quiet) {
        std::cout << "zero_one_generalization_bound = " << fmt17(rep["zero_one"].get<double>())
                  << "\nhinge_generalization_bound = " << fmt17(rep["hinge"].get<double>())
                  << std::endl;
        for (const auto& entry : rep["expurgation"]) {
            std::cout << "expurgation beta=" << fmt_beta(entry["beta"].get<double>())
                      << ": empirical_excess = " << fmt17(entry["empirical_excess"].get<double>())
                      << ", generalization = " << fmt17(entry["generalization"].get<double>())
                      << ", premise_ok = " << (entry["premise_ok"].get<bool>() ? "true" : "false")
                      << std::endl;
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// oracle mode

int run_oracle(const ExperimentConfig& cfg, const RunOptions& opts) {
    const double deg = M_PI / 180.0;
    const double q_value = q_function(cfg.q_arg);
    const double pe = antipodal_pe_exact(cfg.sigma1, cfg.sigma2, cfg.s1, cfg.s2,
                                         cfg.alpha_deg * deg, cfg.beta_deg * deg);
    json rep;
    rep["mode"] = "oracle";
    rep["config_hash"] = config_hash(cfg);
    rep["q_arg"] = cfg.q_arg;
    rep["q_value"] = q_value;
    rep["sigma1"] = cfg.sigma1;
    rep["sigma2"] = cfg.sigma2;
    rep["s1"] = cfg.s1;
    rep["s2"] = cfg.s2;
    rep["alpha_deg"] = cfg.alpha_deg;
    rep["beta_deg"] = cfg.beta_deg;
    rep["pe"] = pe;
    write_text(fs::path(opts.out_dir) / "oracle.json", rep.dump(2) + "\n");
    if (!opts.quiet) {
        std::cout << "Q(" << fmt17(cfg.q_arg) << ") = " << fmt17(q_value) << "\n"
                  << "antipodal_pe_exact = " << fmt17(pe) << std::endl;
    }
    return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    fs::create_directories(opts.out_dir);
    write_text(fs::path(opts.out_dir) / "config.canonical.ini", serialize_config(cfg));
    switch (cfg.mode) {
        case Mode::kSgd: return run_sgd(cfg, opts);
        case Mode::kGibbs: return run_gibbs(cfg, opts);
        case Mode::kMi: return run_mi(cfg, opts);
        case Mode::kBounds: return run_bounds(cfg, opts);
        case Mode::kOracle: return run_oracle(cfg, opts);
    }
    return 2;
}

}  // namespace chanlearn

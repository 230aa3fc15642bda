#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"

#include "chanlearn/config.hpp"

using namespace chanlearn;

namespace {

std::string error_of(const std::string& text, Mode mode) {
    try {
        parse_config(text, mode);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("an empty file yields the full training defaults") {
    const ExperimentConfig cfg = parse_config("", Mode::kSgd);
    CHECK(cfg.mode == Mode::kSgd);
    CHECK(cfg.channel == ChannelKind::kGaussian2d);
    CHECK(cfg.seed == 1);
    CHECK(cfg.d == 2);
    CHECK(cfg.m == 32);
    REQUIRE(cfg.m_list.size() == 1);
    CHECK(cfg.m_list[0] == 32);
    CHECK(cfg.gamma == 10.0);
    CHECK(cfg.phi_x == 2.0);
    CHECK(cfg.project_codebook);
    CHECK(cfg.lambda == 0.1);
    CHECK(cfg.eta == 0.1);
    CHECK(cfg.r_s == 10.0);
    CHECK(cfg.n_train == 2000);
    CHECK(cfg.n_val == 10000);
    CHECK(cfg.n_iters == 2000);
    CHECK(cfg.record_every == 50);
    CHECK(cfg.n_runs == 1);
    CHECK(cfg.runs_per_distribution == 1);
    CHECK(cfg.val_eval == "final");
}

TEST_CASE("expurgation defaults target the interference channel") {
    const ExperimentConfig cfg = parse_config("", Mode::kGibbs);
    CHECK(cfg.channel == ChannelKind::kGmInterference);
    CHECK(cfg.d == 4);
    CHECK(cfg.s_paths == 10);
    CHECK(cfg.chi_z == 2.0);
    CHECK_FALSE(cfg.project_noise);
    CHECK_FALSE(cfg.project_codebook);
    CHECK(cfg.m == 32);
    CHECK(cfg.m0 == 64);
    CHECK(cfg.k == 1);
    REQUIRE(cfg.beta_list.size() == 3);
    CHECK(cfg.beta_list[0] == 100.0);
    CHECK(cfg.beta_list[1] == 1000.0);
    CHECK(cfg.beta_list[2] == 10000.0);
    CHECK(cfg.gamma == 10.0);
    CHECK(cfg.phi_x == 1.0);
    CHECK(cfg.n_train == 100);
    CHECK(cfg.n_val == 10000);
    CHECK(cfg.n_runs == 2500);
    CHECK(cfg.runs_per_distribution == 10);
    CHECK(cfg.val_eval == "every-step");
}

TEST_CASE("comments, blank lines, and inf values parse cleanly") {
    const std::string text =
        "# a comment line\n"
        "\n"
        "m = 16   # trailing note\n"
        "beta_list = 100, inf\n"
        "m0 = 20\n";
    const ExperimentConfig cfg = parse_config(text, Mode::kGibbs);
    CHECK(cfg.m == 16);
    REQUIRE(cfg.beta_list.size() == 2);
    CHECK(cfg.beta_list[0] == 100.0);
    CHECK(std::isinf(cfg.beta_list[1]));
}

TEST_CASE("the channel key applies first regardless of file position") {
    const std::string text =
        "s_paths = 7\n"
        "channel = gm-interference\n";
    const ExperimentConfig cfg = parse_config(text, Mode::kSgd);
    CHECK(cfg.channel == ChannelKind::kGmInterference);
    CHECK(cfg.d == 4);
    // The file override survives the channel's own default of 5.
    CHECK(cfg.s_paths == 7);
    REQUIRE(cfg.m_list.size() == 4);
    CHECK(cfg.m_list[0] == 8);
    CHECK(cfg.gamma == 20.0);
    CHECK(cfg.n_runs == 1000);
}

TEST_CASE("parse errors carry line numbers and clear causes") {
    CHECK(contains(error_of("m = 16\nbogus = 1\n", Mode::kSgd), "line 2"));
    CHECK(contains(error_of("bogus = 1\n", Mode::kSgd), "unknown key 'bogus'"));
    CHECK(contains(error_of("m = 16\nm = 8\n", Mode::kSgd), "duplicate key 'm'"));
    CHECK(contains(error_of("m 16\n", Mode::kSgd), "expected 'key = value'"));
    CHECK(contains(error_of("m = sixteen\n", Mode::kSgd), "expected an integer"));
    CHECK(contains(error_of("lambda = fast\n", Mode::kSgd), "expected a number"));
    CHECK(contains(error_of("project_noise = maybe\n", Mode::kSgd), "expected true/false"));
    CHECK(contains(error_of("seed = -4\n", Mode::kSgd), "unsigned"));
    CHECK(contains(error_of("mode = gibbs\n", Mode::kSgd), "does not match subcommand"));
    CHECK(contains(error_of("channel = fancy\n", Mode::kSgd), "unknown channel"));
    CHECK(error_of("mode = sgd\nm = 8\n", Mode::kSgd).empty());
}

TEST_CASE("mode-specific validation accepts the documented edge cases") {
    // Zero step sizes are a legal degenerate run.
    CHECK(parse_config("lambda = 0\neta = 0\n", Mode::kSgd).lambda == 0.0);
    CHECK(contains(error_of("lambda = -0.1\n", Mode::kSgd), "step sizes"));

    // Keeping the whole codebook is a legal no-op expurgation.
    CHECK(parse_config("m0 = 32\nm = 32\n", Mode::kGibbs).m0 == 32);
    CHECK(contains(error_of("m0 = 16\nm = 32\n", Mode::kGibbs), "m0 must be at least m"));

    // The bound evaluators need at least one removal step.
    CHECK(contains(error_of("m0 = 32\nm = 32\n", Mode::kBounds), "m0 must exceed m"));
    CHECK(parse_config("m0 = 64\nm = 32\n", Mode::kBounds).m0 == 64);

    const std::string msg = error_of("k = 3\n", Mode::kGibbs);
    CHECK(contains(msg, "(m0-m)/k not integer"));
    CHECK(contains(msg, "k=3"));

    CHECK(contains(error_of("d = 3\n", Mode::kSgd), "gaussian2d channel requires d = 2"));
    CHECK(error_of("d = 3\n", Mode::kBounds).empty());
    CHECK(error_of("d = 3\nchannel = gm-interference\n", Mode::kSgd).empty());

    CHECK(contains(error_of("val_eval = sometimes\n", Mode::kGibbs), "val_eval"));
    CHECK(contains(error_of("kernel = cubic\n", Mode::kMi), "kernel"));
    CHECK(contains(error_of("sigma1 = 0\n", Mode::kOracle), "noise deviations"));
    CHECK(contains(error_of("s1 = 0\ns2 = 0\n", Mode::kOracle), "decoder eigenvalues"));
    CHECK(contains(error_of("theta = 0\n", Mode::kMi), "theta"));
}

TEST_CASE("the iteration budget defaults to one pass unless pinned") {
    CHECK(parse_config("n_train = 500\n", Mode::kSgd).n_iters == 500);
    CHECK(parse_config("n_iters = 0\n", Mode::kSgd).n_iters == 0);
    CHECK(parse_config("n_train = 500\nn_iters = 200\n", Mode::kSgd).n_iters == 200);
    CHECK(contains(error_of("n_iters = 2001\n", Mode::kSgd), "n_iters cannot exceed n_train"));
}

TEST_CASE("the canonical form is a parse fixed point for every mode") {
    const ChannelKind channels[] = {ChannelKind::kGaussian2d, ChannelKind::kGmInterference};
    const Mode modes[] = {Mode::kSgd, Mode::kGibbs, Mode::kMi, Mode::kBounds, Mode::kOracle};
    for (const Mode mode : modes) {
        for (const ChannelKind channel : channels) {
            const ExperimentConfig cfg = default_config(mode, channel);
            const std::string text = serialize_config(cfg);
            const ExperimentConfig reparsed = parse_config(text, mode);
            REQUIRE(serialize_config(reparsed) == text);
        }
    }
    // A customized config round-trips too, including an explicit zero budget.
    const ExperimentConfig cfg =
        parse_config("m = 16\nn_iters = 0\nlambda = 0.017\nseed = 99\n", Mode::kSgd);
    const ExperimentConfig again = parse_config(serialize_config(cfg), Mode::kSgd);
    CHECK(serialize_config(again) == serialize_config(cfg));
    CHECK(again.n_iters == 0);
    CHECK(again.lambda == 0.017);
}

TEST_CASE("config hashes are deterministic and sensitive") {
    const ExperimentConfig a = parse_config("m = 16\n", Mode::kSgd);
    const ExperimentConfig b = parse_config("m = 16\n", Mode::kSgd);
    ExperimentConfig c = a;
    c.seed = 2;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a).size() == 16);
    for (const char ch : config_hash(a)) {
        CHECK(std::isxdigit(static_cast<unsigned char>(ch)));
    }
}

TEST_CASE("file loading reports missing paths and reads real files") {
    CHECK_THROWS_AS(load_config("/nonexistent/path/cfg.ini", Mode::kSgd), ConfigError);
    try {
        load_config("/nonexistent/path/cfg.ini", Mode::kSgd);
    } catch (const ConfigError& e) {
        CHECK(contains(e.what(), "cannot open"));
    }

    const std::string path = "chanlearn_config_roundtrip_test.ini";
    {
        std::ofstream out(path);
        out << "m = 24\nseed = 7\n";
    }
    const ExperimentConfig cfg = load_config(path, Mode::kSgd);
    CHECK(cfg.m == 24);
    CHECK(cfg.seed == 7);
    std::remove(path.c_str());
}

TEST_CASE("the reference noise covariance has the documented spectrum") {
    const Mat K = reference_gaussian_cov();
    const double a = M_PI / 6.0;
    Mat Q(2, 2);
    Q << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
    Mat lam = Mat::Zero(2, 2);
    lam(0, 0) = 0.1;
    lam(1, 1) = 0.3;
    CHECK((K - Q * lam * Q.transpose()).norm() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> solver(K);
    CHECK(solver.eigenvalues()(0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(solver.eigenvalues()(1) == doctest::Approx(0.3).epsilon(1e-12));
}

}  // TEST_SUITE("config")

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "chanlearn/geometry.hpp"

namespace chanlearn {

enum class Mode { kSgd, kGibbs, kMi, kBounds, kOracle };
enum class ChannelKind { kGaussian2d, kGmInterference };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat experiment configuration. Every mode reads a subset of the fields;
/// load_config fills the rest with that mode's defaults and validates the
/// combination.
struct ExperimentConfig {
    Mode mode = Mode::kSgd;
    ChannelKind channel = ChannelKind::kGaussian2d;
    std::uint64_t seed = 1;

    // channel
    int d = 2;
    int s_paths = 5;       // interference paths (mixture channel)
    double chi_z = 2.0;    // noise projection parameter (mixture channel)
    bool project_noise = false;

    // codebook and power
    int m = 32;
    std::vector<int> m_list;
    double gamma = 10.0;   // gap-to-capacity factor
    double phi_x = 2.0;    // input projection parameter
    bool project_codebook = true;

    // training
    double lambda = 0.1;
    double eta = 0.1;
    double r_s = 10.0;
    int n_train = 2000;
    int n_val = 10000;
    int n_iters = 0;       // sgd iterations; defaults to n_train (one pass) unless set
    int record_every = 50;
    int n_runs = 1;
    int runs_per_distribution = 1;

    // expurgation
    int m0 = 64;
    int k = 1;
    std::vector<double> beta_list;  // "inf" allowed
    std::string val_eval = "final"; // none | final | every-step

    // weight optimization
    double theta = 0.25;
    std::string kernel = "gaussian";  // gaussian | epanechnikov
    int n_mc = 5000;
    int ba_max_iters = 60;
    double ba_tol = 1e-4;

    // bounds
    double delta = 0.05;
    double r_x = 10.0;  // only an input in bounds mode; learned modes derive it
    double c_abs = 1.0;

    // closed-form oracle
    double q_arg = 1.0;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double s1 = 1.0;
    double s2 = 1.0;
    double alpha_deg = 0.0;
    double beta_deg = 0.0;
};

/// Defaults for a mode and channel, before any file overrides.
ExperimentConfig default_config(Mode mode, ChannelKind channel);

/// Parse "key = value" lines (# comments, blank lines allowed) over the
/// mode's defaults. The channel key is applied first, since it selects the
/// default block; a mode key in the file must match the subcommand. Unknown
/// or duplicate keys and invalid combinations raise ConfigError with the line
/// number where applicable.
ExperimentConfig load_config(const std::string& path, Mode mode);

/// Apply the same parsing to in-memory text (the file loader's core).
ExperimentConfig parse_config(const std::string& text, Mode mode);

/// Canonical serialization: every field the mode reads, fixed order, full
/// precision. parse(serialize(c)) round-trips.
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash(const ExperimentConfig& cfg);

const char* mode_name(Mode mode);
const char* channel_name(ChannelKind channel);

/// Covariance of the fixed two-dimensional reference noise: eigenvalues
/// (0.1, 0.3) with eigenbasis rotated thirty degrees.
Mat reference_gaussian_cov();

}  // namespace chanlearn

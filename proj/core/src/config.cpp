#include "chanlearn/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace chanlearn {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail(line, "expected a number, got '" + v + "'");
    return x;
}

long parse_int(const std::string& v, int line) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') fail(line, "expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& v, int line) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos) {
        fail(line, "expected an unsigned integer, got '" + v + "'");
    }
    return x;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, "expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

struct Entry {
    int line;
    std::string key;
    std::string value;
};

Mode parse_mode_value(const std::string& v, int line) {
    if (v == "sgd") return Mode::kSgd;
    if (v == "gibbs") return Mode::kGibbs;
    if (v == "mi") return Mode::kMi;
    if (v == "bounds") return Mode::kBounds;
    if (v == "oracle") return Mode::kOracle;
    fail(line, "unknown mode '" + v + "'");
}

ChannelKind parse_channel_value(const std::string& v, int line) {
    if (v == "gaussian2d") return ChannelKind::kGaussian2d;
    if (v == "gm-interference") return ChannelKind::kGmInterference;
    fail(line, "unknown channel '" + v + "'");
}

void apply_entry(ExperimentConfig& cfg, const Entry& e) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    const int ln = e.line;
    if (k == "seed") cfg.seed = parse_u64(v, ln);
    else if (k == "d") cfg.d = static_cast<int>(parse_int(v, ln));
    else if (k == "s_paths") cfg.s_paths = static_cast<int>(parse_int(v, ln));
    else if (k == "chi_z") cfg.chi_z = parse_double(v, ln);
    else if (k == "project_noise") cfg.project_noise = parse_bool(v, ln);
    else if (k == "m") cfg.m = static_cast<int>(parse_int(v, ln));
    else if (k == "m_list") {
        cfg.m_list.clear();
        for (const auto& p : split_list(v)) cfg.m_list.push_back(static_cast<int>(parse_int(p, ln)));
    } else if (k == "gamma") cfg.gamma = parse_double(v, ln);
    else if (k == "phi_x") cfg.phi_x = parse_double(v, ln);
    else if (k == "project_codebook") cfg.project_codebook = parse_bool(v, ln);
    else if (k == "lambda") cfg.lambda = parse_double(v, ln);
    else if (k == "eta") cfg.eta = parse_double(v, ln);
    else if (k == "r_s") cfg.r_s = parse_double(v, ln);
    else if (k == "n_train") cfg.n_train = static_cast<int>(parse_int(v, ln));
    else if (k == "n_val") cfg.n_val = static_cast<int>(parse_int(v, ln));
    else if (k == "n_iters") cfg.n_iters = static_cast<int>(parse_int(v, ln));
    else if (k == "record_every") cfg.record_every = static_cast<int>(parse_int(v, ln));
    else if (k == "n_runs") cfg.n_runs = static_cast<int>(parse_int(v, ln));
    else if (k == "runs_per_distribution") cfg.runs_per_distribution = static_cast<int>(parse_int(v, ln));
    else if (k == "m0") cfg.m0 = static_cast<int>(parse_int(v, ln));
    else if (k == "k") cfg.k = static_cast<int>(parse_int(v, ln));
    else if (k == "beta_list") {
        cfg.beta_list.clear();
        for (const auto& p : split_list(v)) cfg.beta_list.push_back(parse_double(p, ln));
    } else if (k == "val_eval") cfg.val_eval = v;
    else if (k == "theta") cfg.theta = parse_double(v, ln);
    else if (k == "kernel") cfg.kernel = v;
    else if (k == "n_mc") cfg.n_mc = static_cast<int>(parse_int(v, ln));
    else if (k == "ba_max_iters") cfg.ba_max_iters = static_cast<int>(parse_int(v, ln));
    else if (k == "ba_tol") cfg.ba_tol = parse_double(v, ln);
    else if (k == "delta") cfg.delta = parse_double(v, ln);
    else if (k == "r_x") cfg.r_x = parse_double(v, ln);
    else if (k == "c_abs") cfg.c_abs = parse_double(v, ln);
    else if (k == "q_arg") cfg.q_arg = parse_double(v, ln);
    else if (k == "sigma1") cfg.sigma1 = parse_double(v, ln);
    else if (k == "sigma2") cfg.sigma2 = parse_double(v, ln);
    else if (k == "s1") cfg.s1 = parse_double(v, ln);
    else if (k == "s2") cfg.s2 = parse_double(v, ln);
    else if (k == "alpha_deg") cfg.alpha_deg = parse_double(v, ln);
    else if (k == "beta_deg") cfg.beta_deg = parse_double(v, ln);
    else fail(ln, "unknown key '" + k + "'");
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

void validate(const ExperimentConfig& cfg) {
    require(cfg.d >= 1, "d must be positive");
    if (cfg.channel == ChannelKind::kGaussian2d && cfg.mode != Mode::kBounds &&
        cfg.mode != Mode::kOracle) {
        require(cfg.d == 2, "gaussian2d channel requires d = 2");
    }
    require(cfg.val_eval == "none" || cfg.val_eval == "final" || cfg.val_eval == "every-step",
            "val_eval must be none, final, or every-step");
    require(cfg.kernel == "gaussian" || cfg.kernel == "epanechnikov",
            "kernel must be gaussian or epanechnikov");
    if (cfg.mode == Mode::kOracle) {
        require(cfg.sigma1 > 0.0 && cfg.sigma2 > 0.0, "noise deviations must be positive");
        require(cfg.s1 >= 0.0 && cfg.s2 >= 0.0 && (cfg.s1 > 0.0 || cfg.s2 > 0.0),
                "decoder eigenvalues must be nonnegative and not both zero");
        return;
    }
    require(cfg.n_train >= 1, "n_train must be positive");
    require(cfg.n_val >= 0, "n_val must be nonnegative");
    require(cfg.n_runs >= 1, "n_runs must be positive");
    require(cfg.runs_per_distribution >= 1, "runs_per_distribution must be positive");
    require(cfg.gamma > 0.0, "gamma must be positive");
    require(cfg.phi_x > 0.0, "phi_x must be positive");
    if (cfg.channel == ChannelKind::kGmInterference) {
        require(cfg.s_paths >= 1, "s_paths must be positive");
        if (cfg.project_noise) require(cfg.chi_z > 0.0, "chi_z must be positive when projecting");
    }
    switch (cfg.mode) {
        case Mode::kSgd:
            require(cfg.m >= 2, "m must be at least 2");
            for (const int mm : cfg.m_list) require(mm >= 2, "every m in m_list must be at least 2");
            require(!cfg.m_list.empty(), "m_list must not be empty");
            require(cfg.lambda >= 0.0 && cfg.eta >= 0.0, "step sizes must not be negative");
            require(cfg.r_s > 0.0, "r_s must be positive");
            require(cfg.n_iters >= 0, "n_iters must be nonnegative");
            require(cfg.n_iters <= cfg.n_train, "n_iters cannot exceed n_train (single pass)");
            require(cfg.record_every >= 1, "record_every must be positive");
            break;
        case Mode::kGibbs:
            require(cfg.m >= 2, "m must be at least 2");
            require(cfg.m0 >= cfg.m, "m0 must be at least m");
            require(cfg.k >= 1, "k must be positive");
            if ((cfg.m0 - cfg.m) % cfg.k != 0) {
                throw ConfigError("(m0-m)/k not integer: k=" + std::to_string(cfg.k) +
                                  " does not divide m0-m=" + std::to_string(cfg.m0 - cfg.m));
            }
            require(!cfg.beta_list.empty(), "beta_list must not be empty");
            for (const double b : cfg.beta_list) {
                require(b >= 0.0 && !std::isnan(b), "beta values must be nonnegative");
            }
            break;
        case Mode::kMi:
            require(cfg.m >= 1, "m must be positive");
            require(cfg.theta > 0.0, "theta must be positive");
            require(cfg.n_mc >= 2, "n_mc must be at least 2");
            require(cfg.ba_max_iters >= 1, "ba_max_iters must be positive");
            require(cfg.ba_tol > 0.0, "ba_tol must be positive");
            break;
        case Mode::kBounds:
            require(cfg.m >= 2, "m must be at least 2");
            require(cfg.delta > 0.0 && cfg.delta < 1.0, "delta must be in (0, 1)");
            require(cfg.r_x > 0.0 && cfg.r_s > 0.0, "constraint radii must be positive");
            require(cfg.c_abs > 0.0, "c_abs must be positive");
            require(cfg.m0 > cfg.m, "m0 must exceed m");
            require(cfg.k >= 1, "k must be positive");
            if ((cfg.m0 - cfg.m) % cfg.k != 0) {
                throw ConfigError("(m0-m)/k not integer: k=" + std::to_string(cfg.k) +
                                  " does not divide m0-m=" + std::to_string(cfg.m0 - cfg.m));
            }
            require(!cfg.beta_list.empty(), "beta_list must not be empty");
            break;
        case Mode::kOracle:
            break;
    }
}

}  // namespace

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::kSgd: return "sgd";
        case Mode::kGibbs: return "gibbs";
        case Mode::kMi: return "mi";
        case Mode::kBounds: return "bounds";
        case Mode::kOracle: return "oracle";
    }
    return "unknown";
}

const char* channel_name(ChannelKind channel) {
    switch (channel) {
        case ChannelKind::kGaussian2d: return "gaussian2d";
        case ChannelKind::kGmInterference: return "gm-interference";
    }
    return "unknown";
}

Mat reference_gaussian_cov() {
    const double a = M_PI / 6.0;
    Mat Q(2, 2);
    Q << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
    Mat lam = Mat::Zero(2, 2);
    lam(0, 0) = 1.0;
    lam(1, 1) = 3.0;
    return 0.1 * Q * lam * Q.transpose();
}

ExperimentConfig default_config(Mode mode, ChannelKind channel) {
    ExperimentConfig cfg;
    cfg.mode = mode;
    cfg.channel = channel;
    if (channel == ChannelKind::kGmInterference) {
        cfg.d = 4;
        cfg.s_paths = 5;
        cfg.chi_z = 2.0;
        cfg.project_noise = true;
    }
    switch (mode) {
        case Mode::kSgd:
            if (channel == ChannelKind::kGaussian2d) {
                cfg.m_list = {32};
                cfg.gamma = 10.0;
                cfg.n_val = 10000;
                cfg.n_runs = 1;
                cfg.runs_per_distribution = 1;
            } else {
                cfg.m_list = {8, 16, 32, 64};
                cfg.gamma = 20.0;
                cfg.n_val = 1000;
                cfg.n_runs = 1000;
                cfg.runs_per_distribution = 10;
            }
            cfg.n_iters = cfg.n_train;
            break;
        case Mode::kGibbs:
            cfg.m = 32;
            cfg.m0 = 64;
            cfg.k = 1;
            cfg.beta_list = {100.0, 1000.0, 10000.0};
            cfg.gamma = 10.0;
            cfg.phi_x = 1.0;
            cfg.project_codebook = false;
            cfg.project_noise = false;
            cfg.s_paths = 10;
            cfg.n_train = 100;
            cfg.n_val = 10000;
            cfg.n_runs = 2500;
            cfg.runs_per_distribution = 10;
            cfg.val_eval = "every-step";
            break;
        case Mode::kMi:
            cfg.m = 4;
            cfg.gamma = 10.0;
            cfg.n_train = 500;
            cfg.theta = 0.25;
            cfg.kernel = "gaussian";
            cfg.n_mc = 5000;
            cfg.ba_max_iters = 60;
            cfg.ba_tol = 1e-4;
            break;
        case Mode::kBounds:
            cfg.d = 2;
            cfg.m = 32;
            cfg.m0 = 64;
            cfg.k = 1;
            cfg.beta_list = {1000.0};
            cfg.delta = 0.05;
            cfg.r_x = 10.0;
            cfg.r_s = 10.0;
            cfg.c_abs = 1.0;
            cfg.n_train = 2000;
            break;
        case Mode::kOracle:
            break;
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& text, Mode mode) {
    std::vector<Entry> entries;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        Entry e;
        e.line = line_no;
        e.key = trim(body.substr(0, eq));
        e.value = trim(body.substr(eq + 1));
        if (e.key.empty()) fail(line_no, "empty key");
        if (!seen.insert(e.key).second) fail(line_no, "duplicate key '" + e.key + "'");
        entries.push_back(std::move(e));
    }

    // The channel selects the default block, so it applies before anything
    // else regardless of file position.
    ChannelKind channel =
        mode == Mode::kGibbs ? ChannelKind::kGmInterference : ChannelKind::kGaussian2d;
    for (const Entry& e : entries) {
        if (e.key == "channel") channel = parse_channel_value(e.value, e.line);
    }
    ExperimentConfig cfg = default_config(mode, channel);
    for (const Entry& e : entries) {
        if (e.key == "channel") continue;
        if (e.key == "mode") {
            const Mode file_mode = parse_mode_value(e.value, e.line);
            if (file_mode != mode) {
                fail(e.line, std::string("config mode '") + mode_name(file_mode) +
                                 "' does not match subcommand '" + mode_name(mode) + "'");
            }
            continue;
        }
        apply_entry(cfg, e);
    }
    if (cfg.mode == Mode::kSgd && cfg.m_list.empty()) cfg.m_list = {cfg.m};
    // Unless pinned in the file, the iteration budget follows the training
    // batch: one full pass. An explicit n_iters = 0 runs no iterations.
    if (cfg.mode == Mode::kSgd && seen.count("n_iters") == 0) cfg.n_iters = cfg.n_train;
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, Mode mode) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), mode);
}

namespace {

std::string fmt_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "mode = " << mode_name(cfg.mode) << "\n";
    out << "channel = " << channel_name(cfg.channel) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "d = " << cfg.d << "\n";
    out << "s_paths = " << cfg.s_paths << "\n";
    out << "chi_z = " << fmt_double(cfg.chi_z) << "\n";
    out << "project_noise = " << (cfg.project_noise ? "true" : "false") << "\n";
    out << "m = " << cfg.m << "\n";
    out << "m_list = ";
    for (std::size_t i = 0; i < cfg.m_list.size(); ++i) {
        if (i) out << ",";
        out << cfg.m_list[i];
    }
    out << "\n";
    out << "gamma = " << fmt_double(cfg.gamma) << "\n";
    out << "phi_x = " << fmt_double(cfg.phi_x) << "\n";
    out << "project_codebook = " << (cfg.project_codebook ? "true" : "false") << "\n";
    out << "lambda = " << fmt_double(cfg.lambda) << "\n";
    out << "eta = " << fmt_double(cfg.eta) << "\n";
    out << "r_s = " << fmt_double(cfg.r_s) << "\n";
    out << "n_train = " << cfg.n_train << "\n";
    out << "n_val = " << cfg.n_val << "\n";
    out << "n_iters = " << cfg.n_iters << "\n";
    out << "record_every = " << cfg.record_every << "\n";
    out << "n_runs = " << cfg.n_runs << "\n";
    out << "runs_per_distribution = " << cfg.runs_per_distribution << "\n";
    out << "m0 = " << cfg.m0 << "\n";
    out << "k = " << cfg.k << "\n";
    out << "beta_list = ";
    for (std::size_t i = 0; i < cfg.beta_list.size(); ++i) {
        if (i) out << ",";
        out << fmt_double(cfg.beta_list[i]);
    }
    out << "\n";
    out << "val_eval = " << cfg.val_eval << "\n";
    out << "theta = " << fmt_double(cfg.theta) << "\n";
    out << "kernel = " << cfg.kernel << "\n";
    out << "n_mc = " << cfg.n_mc << "\n";
    out << "ba_max_iters = " << cfg.ba_max_iters << "\n";
    out << "ba_tol = " << fmt_double(cfg.ba_tol) << "\n";
    out << "delta = " << fmt_double(cfg.delta) << "\n";
    out << "r_x = " << fmt_double(cfg.r_x) << "\n";
    out << "c_abs = " << fmt_double(cfg.c_abs) << "\n";
    out << "q_arg = " << fmt_double(cfg.q_arg) << "\n";
    out << "sigma1 = " << fmt_double(cfg.sigma1) << "\n";
    out << "sigma2 = " << fmt_double(cfg.sigma2) << "\n";
    out << "s1 = " << fmt_double(cfg.s1) << "\n";
    out << "s2 = " << fmt_double(cfg.s2) << "\n";
    out << "alpha_deg = " << fmt_double(cfg.alpha_deg) << "\n";
    out << "beta_deg = " << fmt_double(cfg.beta_deg) << "\n";
    return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace chanlearn

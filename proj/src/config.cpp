#include "structbo/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace structbo {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

int parse_int(const std::string& path, const std::string& v) {
    try {
        std::size_t used = 0;
        const int out = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(path, "expected an integer, got '" + v + "'");
    }
}

double parse_real(const std::string& path, const std::string& v) {
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(path, "expected a real number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& path, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError(path, "expected a boolean, got '" + v + "'");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& path, const std::string& v) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(path, "empty seed entry");
        try {
            out.push_back(std::stoull(item));
        } catch (const std::exception&) {
            throw ConfigError(path, "expected an integer seed, got '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(path, "needs at least one seed");
    return out;
}

std::optional<int> parse_int_or_auto(const std::string& path, const std::string& v) {
    if (v == "auto") return std::nullopt;
    return parse_int(path, v);
}

std::optional<double> parse_real_or_auto(const std::string& path, const std::string& v) {
    if (v == "auto") return std::nullopt;
    return parse_real(path, v);
}

}  // namespace

std::string env_kind_name(EnvKind kind) {
    switch (kind) {
        case EnvKind::Synthetic: return "synthetic";
        case EnvKind::Drone: return "drone";
        case EnvKind::Pursuit: return "pursuit";
        case EnvKind::PursuitHet: return "pursuit_het";
    }
    return "?";
}

std::string optimizer_kind_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::DssGpUcb: return "dss_gp_ucb";
        case OptimizerKind::GpUcb: return "gp_ucb";
        case OptimizerKind::Random: return "random";
    }
    return "?";
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "experiment.env") {
        if (v == "synthetic") cfg.env = EnvKind::Synthetic;
        else if (v == "drone") cfg.env = EnvKind::Drone;
        else if (v == "pursuit") cfg.env = EnvKind::Pursuit;
        else if (v == "pursuit_het") cfg.env = EnvKind::PursuitHet;
        else throw ConfigError(key, "unknown environment '" + v + "'");
    } else if (key == "experiment.optimizer") {
        if (v == "dss_gp_ucb") cfg.optimizer = OptimizerKind::DssGpUcb;
        else if (v == "gp_ucb") cfg.optimizer = OptimizerKind::GpUcb;
        else if (v == "random") cfg.optimizer = OptimizerKind::Random;
        else throw ConfigError(key, "unknown optimizer '" + v + "'");
    } else if (key == "experiment.iterations") {
        cfg.iterations = parse_int(key, v);
    } else if (key == "experiment.batch_size") {
        cfg.batch_size = parse_int(key, v);
    } else if (key == "experiment.seeds") {
        cfg.seeds = parse_seed_list(key, v);
    } else if (key == "experiment.eval_repeats") {
        cfg.eval_repeats = parse_int(key, v);
    } else if (key == "experiment.out_dir") {
        cfg.out_dir = v;
    } else if (key == "experiment.noise_var") {
        cfg.noise_var = parse_real(key, v);
    } else if (key == "env.dimension") {
        cfg.synthetic.dimension = parse_int(key, v);
    } else if (key == "env.edge_prob") {
        cfg.synthetic.edge_prob = parse_real(key, v);
    } else if (key == "env.value_noise") {
        cfg.synthetic.value_noise = parse_real(key, v);
    } else if (key == "env.hessian_noise") {
        cfg.synthetic.hessian_noise = parse_real(key, v);
    } else if (key == "env.n_agents") {
        cfg.policy.n_agents = parse_int(key, v);
    } else if (key == "env.epoch_len") {
        cfg.policy.epoch_len = parse_int(key, v);
    } else if (key == "env.n_states") {
        cfg.policy.n_states = parse_int(key, v);
    } else if (key == "env.fd_step") {
        cfg.policy.fd_step = parse_real(key, v);
    } else if (key == "structure.t0") {
        cfg.structure.t0 = parse_int_or_auto(key, v);
    } else if (key == "structure.c1") {
        cfg.structure.c1 = parse_int_or_auto(key, v);
    } else if (key == "structure.threshold") {
        cfg.structure.threshold = parse_real_or_auto(key, v);
    } else if (key == "structure.edge_cap") {
        cfg.structure.edge_cap = parse_int(key, v);
    } else if (key == "structure.delta1") {
        cfg.structure.delta1 = parse_real(key, v);
    } else if (key == "structure.delta2") {
        cfg.structure.delta2 = parse_real(key, v);
    } else if (key == "structure.sigma_n") {
        cfg.structure.sigma_n = parse_real_or_auto(key, v);
    } else if (key == "structure.p_h") {
        cfg.structure.p_h = parse_real_or_auto(key, v);
    } else if (key == "structure.sigma_h2") {
        cfg.structure.sigma_h2 = parse_real_or_auto(key, v);
    } else if (key == "kernel.family") {
        if (v == "rbf") cfg.kernel.family = KernelFamily::RBF;
        else if (v == "matern52") cfg.kernel.family = KernelFamily::Matern52;
        else throw ConfigError(key, "unknown kernel family '" + v + "'");
    } else if (key == "kernel.lengthscale") {
        cfg.kernel.lengthscale = parse_real(key, v);
    } else if (key == "kernel.variance") {
        cfg.kernel.variance = parse_real(key, v);
    } else if (key == "kernel.grid_search") {
        cfg.kernel_grid_search = parse_bool(key, v);
    } else if (key == "beta.mode") {
        if (v == "practical") cfg.beta.mode = BetaSchedule::Mode::Practical;
        else if (v == "theoretical") cfg.beta.mode = BetaSchedule::Mode::Theoretical;
        else throw ConfigError(key, "unknown beta mode '" + v + "'");
    } else if (key == "beta.delta") {
        cfg.beta.delta = parse_real(key, v);
    } else if (key == "beta.a") {
        cfg.beta.a = parse_real(key, v);
    } else if (key == "beta.b") {
        cfg.beta.b = parse_real(key, v);
    } else if (key == "beta.r") {
        cfg.beta.r = parse_real(key, v);
    } else if (key == "acquisition.starts") {
        cfg.acquire.starts = parse_int(key, v);
    } else if (key == "acquisition.top_k") {
        cfg.acquire.top_k = parse_int(key, v);
    } else if (key == "acquisition.refine_rounds") {
        cfg.acquire.refine_rounds = parse_int(key, v);
    } else {
        throw ConfigError(key, "unknown key");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(line_no), "malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section != "experiment" && section != "env" && section != "structure" &&
                section != "kernel" && section != "beta" && section != "acquisition")
                throw ConfigError(section, "unknown section");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no), "key outside any section");
        const std::string key = section + "." + trim(t.substr(0, eq));
        apply_override(cfg, key, trim(t.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void ExperimentConfig::validate() const {
    if (iterations < 1) throw ConfigError("experiment.iterations", "must be >= 1");
    if (batch_size < 1) throw ConfigError("experiment.batch_size", "must be >= 1");
    if (eval_repeats < 1) throw ConfigError("experiment.eval_repeats", "must be >= 1");
    if (seeds.empty()) throw ConfigError("experiment.seeds", "needs at least one seed");
    if (noise_var < 0.0) throw ConfigError("experiment.noise_var", "must be >= 0");
    if (kernel.lengthscale <= 0.0) throw ConfigError("kernel.lengthscale", "must be positive");
    if (kernel.variance <= 0.0 || kernel.variance > 1.0)
        throw ConfigError("kernel.variance", "must be in (0, 1]");
    if (structure.edge_cap < 1) throw ConfigError("structure.edge_cap", "must be >= 1");
    if (structure.delta1 <= 0.0 || structure.delta1 >= 1.0)
        throw ConfigError("structure.delta1", "must be in (0, 1)");
    if (structure.delta2 <= 0.0 || structure.delta2 >= 1.0)
        throw ConfigError("structure.delta2", "must be in (0, 1)");
    if (structure.t0 && *structure.t0 < 1) throw ConfigError("structure.t0", "must be >= 1");
    if (structure.c1 && *structure.c1 < 1) throw ConfigError("structure.c1", "must be >= 1");
    if (optimizer == OptimizerKind::DssGpUcb && structure.t0 && iterations <= *structure.t0)
        throw ConfigError("experiment.iterations", "must exceed structure.t0 for dss_gp_ucb");
    if (beta.delta <= 0.0 || beta.delta > 1.0) throw ConfigError("beta.delta", "must be in (0, 1]");
    if (acquire.starts < 1) throw ConfigError("acquisition.starts", "must be >= 1");
    if (acquire.top_k < 1) throw ConfigError("acquisition.top_k", "must be >= 1");
    if (acquire.refine_rounds < 0) throw ConfigError("acquisition.refine_rounds", "must be >= 0");
    if (env == EnvKind::Synthetic) {
        if (synthetic.dimension < 1) throw ConfigError("env.dimension", "must be >= 1");
        if (synthetic.edge_prob < 0.0 || synthetic.edge_prob > 1.0)
            throw ConfigError("env.edge_prob", "must be in [0, 1]");
        if (synthetic.value_noise < 0.0) throw ConfigError("env.value_noise", "must be >= 0");
        if (synthetic.hessian_noise < 0.0) throw ConfigError("env.hessian_noise", "must be >= 0");
    } else {
        if (policy.n_agents < 1) throw ConfigError("env.n_agents", "must be >= 1");
        if (policy.epoch_len < 0) throw ConfigError("env.epoch_len", "must be >= 0");
        if (policy.n_states < 1) throw ConfigError("env.n_states", "must be >= 1");
        if (policy.fd_step <= 0.0 || policy.fd_step >= 0.1)
            throw ConfigError("env.fd_step", "must be in (0, 0.1)");
    }
}

}  // namespace structbo

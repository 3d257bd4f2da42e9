#include "structbo/capi.h"

#include <cstring>
#include <string>

#include "structbo/experiment.hpp"

struct sb_config {
    structbo::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error = "no error";

int fail(int code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return SB_OK;
    } catch (const structbo::ConfigError& e) {
        return fail(SB_ERROR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(SB_ERROR_RUNTIME, e.what());
    }
}

}  // namespace

extern "C" {

const char* sb_last_error(void) {
    return g_last_error.c_str();
}

const char* sb_version(void) {
    return "structbo 0.1.0";
}

int sb_config_load(const char* path, sb_config** out_config) {
    if (!path || !out_config) return fail(SB_ERROR_CONFIG, "null argument");
    *out_config = nullptr;
    return guarded([&] { *out_config = new sb_config{structbo::load_config_file(path)}; });
}

int sb_config_create(sb_config** out_config) {
    if (!out_config) return fail(SB_ERROR_CONFIG, "null argument");
    *out_config = new sb_config{};
    return SB_OK;
}

int sb_config_set(sb_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return fail(SB_ERROR_CONFIG, "null argument");
    return guarded([&] { structbo::apply_override(config->cfg, key, value); });
}

int sb_config_set_default_out_dir(sb_config* config, const char* dir) {
    if (!config || !dir) return fail(SB_ERROR_CONFIG, "null argument");
    if (config->cfg.out_dir.empty()) config->cfg.out_dir = dir;
    return SB_OK;
}

void sb_config_free(sb_config* config) {
    delete config;
}

int sb_run_experiment(const sb_config* config) {
    if (!config) return fail(SB_ERROR_CONFIG, "null config");
    return guarded([&] {
        config->cfg.validate();
        structbo::run_experiment(config->cfg);
    });
}

int sb_render_outputs(const char* trace_dir) {
    if (!trace_dir) return fail(SB_ERROR_CONFIG, "null trace_dir");
    return guarded([&] { structbo::render_outputs(trace_dir); });
}

int sb_inspect_structure(const char* trace_dir, char** out_report) {
    if (!trace_dir || !out_report) return fail(SB_ERROR_CONFIG, "null argument");
    *out_report = nullptr;
    return guarded([&] {
        const std::string report = structbo::inspect_structure(trace_dir);
        *out_report = new char[report.size() + 1];
        std::memcpy(*out_report, report.c_str(), report.size() + 1);
    });
}

void sb_string_free(char* s) {
    delete[] s;
}

}  // extern "C"

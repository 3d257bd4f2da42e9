/* C interface to the structbo experiment runner. All functions return a
 * status code; on failure sb_last_error() describes what went wrong. Handles
 * are opaque and must be released with their matching _free function. */
#ifndef STRUCTBO_CAPI_H
#define STRUCTBO_CAPI_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sb_config sb_config;

enum sb_status {
    SB_OK = 0,
    SB_ERROR_CONFIG = 2, /* bad config file, key, or value */
    SB_ERROR_RUNTIME = 3 /* mid-run failure; partial artifacts may exist */
};

/* Message for the most recent failure on this thread. Never NULL. */
const char* sb_last_error(void);

const char* sb_version(void);

/* Parses a sectioned key=value config file. */
int sb_config_load(const char* path, sb_config** out_config);

/* In-memory default config, for override-driven construction. */
int sb_config_create(sb_config** out_config);

/* Applies one dotted-path override, e.g. ("experiment.seeds", "1,2,3"). */
int sb_config_set(sb_config* config, const char* key, const char* value);

/* Sets the output directory only when the config left it empty. */
int sb_config_set_default_out_dir(sb_config* config, const char* dir);

void sb_config_free(sb_config* config);

/* Runs every configured seed and writes traces, summary CSV and SVGs under
 * the configured output directory. */
int sb_run_experiment(const sb_config* config);

/* Rebuilds summary CSV and SVG plots from the trace files in trace_dir. */
int sb_render_outputs(const char* trace_dir);

/* Report of the detected dependency structure stored under trace_dir. The
 * returned string must be released with sb_string_free. */
int sb_inspect_structure(const char* trace_dir, char** out_report);

void sb_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STRUCTBO_CAPI_H */

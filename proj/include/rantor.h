/* rantor - cone-certified statistics of random toral automorphism products.
 *
 * C interface to the shared library. Handles are opaque; every entry point
 * returns a status code and leaves a human-readable message in
 * rantor_last_error() on failure.
 */
#ifndef RANTOR_H
#define RANTOR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes shared with the CLI exit codes. */
#define RANTOR_OK 0
#define RANTOR_ERR_CONFIG 1    /* invalid configuration or input */
#define RANTOR_ERR_VIOLATION 2 /* a checked property was violated */
#define RANTOR_ERR_CONE 3      /* the cone property failed to verify */

typedef struct rantor_config rantor_config;
typedef struct rantor_family rantor_family;

const char* rantor_version(void);

/* Message describing the last failure on the calling thread ("" if none). */
const char* rantor_last_error(void);

/* Configuration: JSON, schema version 1. */
int rantor_config_load(const char* path, rantor_config** out);
int rantor_config_parse(const char* json_text, rantor_config** out);
void rantor_config_free(rantor_config* cfg);
void rantor_config_set_seed(rantor_config* cfg, uint64_t seed);
void rantor_config_set_threads(rantor_config* cfg, unsigned threads);
void rantor_config_set_self_test_corrupt(rantor_config* cfg, int enabled);

/* Batch runs; artifacts are written into out_dir. */
int rantor_run_analyze(const rantor_config* cfg, const char* out_dir);
int rantor_run_correlate(const rantor_config* cfg, const char* out_dir);
int rantor_run_verify(const rantor_config* cfg, const char* out_dir);
int rantor_run_diophantine(const rantor_config* cfg, const char* out_dir);

/* Direct family handle; entries holds 4 row-major values per matrix. */
int rantor_family_create(const int64_t* entries, const double* probs, size_t count,
                         rantor_family** out);
void rantor_family_free(rantor_family* fam);

/* Cone analysis with the automatic quadrant cones; *out_json must be freed
 * with rantor_string_free. */
int rantor_family_analyze_json(const rantor_family* fam, char** out_json);
void rantor_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RANTOR_H */

#ifndef WVN_H
#define WVN_H

#include <stddef.h>
#include <stdint.h>

#if defined(WVN_BUILDING_LIBRARY)
#define WVN_API __attribute__((visibility("default")))
#else
#define WVN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wvn_status {
  WVN_OK = 0,
  WVN_VIOLATION = 1,       /* a certificate failed */
  WVN_INVALID_INPUT = 2,
  WVN_IO_ERROR = 3,
  WVN_BUDGET_EXCEEDED = 4,
  WVN_PRECONDITION = 5,
  WVN_INTERNAL = 6
} wvn_status;

/* Message for the last failing call on this thread; "" when none. */
WVN_API const char* wvn_last_error(void);
WVN_API const char* wvn_status_name(wvn_status status);

/* Strings returned through char** are owned by the caller. */
WVN_API void wvn_string_free(char* s);

/* ---- run configuration ---- */

typedef struct wvn_config wvn_config;

WVN_API wvn_status wvn_config_new(wvn_config** out);
WVN_API void wvn_config_free(wvn_config* config);
/* Overlays a JSON config file, or JSON text, onto the current values. */
WVN_API wvn_status wvn_config_load_file(wvn_config* config, const char* path);
WVN_API wvn_status wvn_config_merge_json(wvn_config* config, const char* json_text);
WVN_API wvn_status wvn_config_set_seed(wvn_config* config, uint64_t seed);
WVN_API wvn_status wvn_config_set_out(wvn_config* config, const char* dir);
WVN_API wvn_status wvn_config_set_depth(wvn_config* config, size_t depth);
WVN_API wvn_status wvn_config_set_truncation(wvn_config* config, const size_t* levels, size_t count);
WVN_API wvn_status wvn_config_set_mode(wvn_config* config, const char* mode);
WVN_API wvn_status wvn_config_set_inject_defect(wvn_config* config, int enabled);
/* Resolved config, every default explicit. */
WVN_API wvn_status wvn_config_to_json(const wvn_config* config, char** json_out);

/* Runs "gen", "nets", "hierarchy", "certify" or "uniform". Returns WVN_OK or
   WVN_VIOLATION after writing outputs; `summary_out` (optional) receives a
   JSON object with the written files and a result summary. */
WVN_API wvn_status wvn_run(const wvn_config* config, const char* command, char** summary_out);

/* ---- finite metric spaces ---- */

typedef struct wvn_space wvn_space;

/* Row-major n x n distance matrix, validated as a metric. */
WVN_API wvn_status wvn_space_from_matrix(const double* dist, size_t n, wvn_space** out);
/* Space number `index` of a family or space JSON file. */
WVN_API wvn_status wvn_space_load(const char* path, size_t index, wvn_space** out);
WVN_API void wvn_space_free(wvn_space* space);
WVN_API size_t wvn_space_size(const wvn_space* space);
WVN_API wvn_status wvn_space_distance(const wvn_space* space, size_t i, size_t j, double* out);
/* Closed-ball eps-net ("greedy" or "exact"). Writes up to `capacity` member
   indices and the full member count. */
WVN_API wvn_status wvn_space_net(const wvn_space* space, double eps, const char* method, size_t* members,
                                 size_t capacity, size_t* count);

/* ---- linear algebra ---- */

/* Number of singular values above eps of a row-major complex matrix given by
   real and (optional, NULL = zero) imaginary parts. */
WVN_API wvn_status wvn_eps_rank(const double* re, const double* im, size_t rows, size_t cols, double eps, size_t* rank);

#ifdef __cplusplus
}
#endif

#endif

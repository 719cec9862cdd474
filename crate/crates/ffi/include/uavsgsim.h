#ifndef UAVSGSIM_H
#define UAVSGSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Association rule selector: nearest instantaneous position.
 */
#define UAVSGSIM_RULE_RTNA 0

/**
 * Association rule selector: nearest hover center.
 */
#define UAVSGSIM_RULE_SEMI 1

#define UAVSGSIM_ANTENNA_OMNI 0

#define UAVSGSIM_ANTENNA_DIRECTIONAL 1

enum UavsgsimStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  UAVSGSIM_STATUS_OK = 0,
  UAVSGSIM_STATUS_NULL_POINTER = 1,
  UAVSGSIM_STATUS_INVALID_ARGUMENT = 2,
  UAVSGSIM_STATUS_PARSE = 3,
  UAVSGSIM_STATUS_VALIDATION = 4,
  UAVSGSIM_STATUS_NON_CONVERGENCE = 5,
  UAVSGSIM_STATUS_QUADRATURE_FAILURE = 6,
  UAVSGSIM_STATUS_DEGENERATE_GEOMETRY = 7,
  UAVSGSIM_STATUS_BEAM_DOMAIN = 8,
  UAVSGSIM_STATUS_DEGENERATE_REALIZATION = 9,
  UAVSGSIM_STATUS_IO = 10,
  UAVSGSIM_STATUS_PANIC = 11,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum UavsgsimStatus UavsgsimStatus;
#else
typedef int32_t UavsgsimStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque network configuration.
 */
typedef struct UavsgsimConfig UavsgsimConfig;

/**
 * Analytic coverage and throughput. Throughput is per km^2.
 */
typedef struct UavsgsimAnalytic {
  double cp;
  double st_per_km2;
  double c_b;
  /**
   * 1 when the backhaul caps the per-link rate.
   */
  int32_t backhaul_limited;
} UavsgsimAnalytic;

typedef struct UavsgsimEstimate {
  double value;
  double std_error;
} UavsgsimEstimate;

/**
 * Monte Carlo estimates. Throughput is per km^2.
 */
typedef struct UavsgsimSimulation {
  struct UavsgsimEstimate cp;
  struct UavsgsimEstimate st_per_km2;
  struct UavsgsimEstimate q_a;
  struct UavsgsimEstimate in_projection;
  double c_b;
  uint64_t trials;
} UavsgsimSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *uavsgsim_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *uavsgsim_version(void);

/**
 * New configuration holding the defaults.
 */
struct UavsgsimConfig *uavsgsim_config_new(void);

/**
 * Load a `key = value` configuration file into a new handle.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
UavsgsimStatus uavsgsim_config_load(const char *path, struct UavsgsimConfig **out);

/**
 * Release a handle; NULL is ignored.
 *
 * # Safety
 * `cfg` must come from this library and not be used afterwards.
 */
void uavsgsim_config_free(struct UavsgsimConfig *cfg);

/**
 * Set one parameter using any key accepted in configuration files.
 * The handle is left unchanged if the result would be invalid.
 *
 * # Safety
 * `cfg` must be a live handle; `key` and `value` NUL-terminated strings.
 */
UavsgsimStatus uavsgsim_config_set(struct UavsgsimConfig *cfg, const char *key, const char *value);

/**
 * Canonical `key = value` rendering of a configuration. Free the result
 * with `uavsgsim_string_free`. Returns NULL for a NULL handle.
 *
 * # Safety
 * `cfg` must be a live handle or NULL.
 */
char *uavsgsim_config_serialize(const struct UavsgsimConfig *cfg);

/**
 * Release a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void uavsgsim_string_free(char *s);

/**
 * Analytic coverage probability and spatial throughput.
 * `pae` > 0 selects the PAE beam policy with that scaling parameter.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
UavsgsimStatus uavsgsim_analytic(const struct UavsgsimConfig *cfg,
                                 uint32_t rule,
                                 uint32_t antenna,
                                 double pae,
                                 struct UavsgsimAnalytic *out);

/**
 * Monte Carlo estimates from `n_trials` (at least 100) simulated slots,
 * seeded by the configuration's seed.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
UavsgsimStatus uavsgsim_simulate(const struct UavsgsimConfig *cfg,
                                 uint32_t rule,
                                 uint32_t antenna,
                                 double pae,
                                 uint64_t n_trials,
                                 struct UavsgsimSimulation *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UAVSGSIM_H */

#ifndef GREEN_H
#define GREEN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum GreenStatus {
  GREEN_STATUS_OK = 0,
  GREEN_STATUS_NULL_POINTER = 1,
  GREEN_STATUS_INVALID_ARGUMENT = 2,
  GREEN_STATUS_PARSE = 3,
  GREEN_STATUS_INFEASIBLE = 4,
  GREEN_STATUS_ILL_CONDITIONED = 5,
  GREEN_STATUS_POLE = 6,
  GREEN_STATUS_IO = 7,
  GREEN_STATUS_INTERNAL = 8,
} GreenStatus;

// Which solver [`green_evaluate`] should use.
typedef enum GreenMethod {
  GREEN_METHOD_CLOSED_FORM = 0,
  GREEN_METHOD_MFS = 1,
  GREEN_METHOD_WOS = 2,
} GreenMethod;

// Opaque domain handle.
typedef struct GreenDomain GreenDomain;

// Opaque fitted fundamental-solution expansion.
typedef struct GreenMfsSolution GreenMfsSolution;

// Solver settings. Zero fields (and a non-positive `eps_shell`) select the
// library defaults.
typedef struct GreenOptions {
  size_t charges;
  size_t walks;
  double eps_shell;
  uint64_t seed;
} GreenOptions;

typedef struct GreenPoint {
  double x;
  double y;
  double z;
} GreenPoint;

typedef struct GreenValue {
  double value;
  // Boundary residual for deterministic solvers, standard error for walks.
  double error_bound;
} GreenValue;

typedef struct GreenWosResult {
  double estimate;
  double std_error;
  size_t walks_used;
  size_t truncated_walks;
  bool warning;
} GreenWosResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default options (all zero).
struct GreenOptions green_options_default(void);

// Copy the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length excluding the NUL.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t green_last_error_message(char *buf, size_t len);

// Parse and validate a domain from its JSON description.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum GreenStatus green_domain_from_json(const char *json, struct GreenDomain **out);

// Release a domain. Null is accepted.
//
// # Safety
// `domain` must come from [`green_domain_from_json`] and not be used again.
void green_domain_free(struct GreenDomain *domain);

// 2 for planar domains, 3 for spatial ones.
//
// # Safety
// `domain` must be a live handle; `out` must be writable.
enum GreenStatus green_domain_dimension(const struct GreenDomain *domain, size_t *out);

// Number of boundary components.
//
// # Safety
// `domain` must be a live handle; `out` must be writable.
enum GreenStatus green_domain_component_count(const struct GreenDomain *domain, size_t *out);

// Distance from `p` to the boundary and whether `p` lies in the domain.
//
// # Safety
// `domain` must be a live handle; `dist` and `inside` must be writable.
enum GreenStatus green_domain_distance(const struct GreenDomain *domain,
                                       struct GreenPoint p,
                                       double *dist,
                                       bool *inside);

// `g_Ω(z, w)` by the chosen method. `options` may be null.
//
// # Safety
// `domain` must be a live handle; `options` null or readable; `out` writable.
enum GreenStatus green_evaluate(const struct GreenDomain *domain,
                                enum GreenMethod method,
                                struct GreenPoint z,
                                struct GreenPoint w,
                                const struct GreenOptions *options,
                                struct GreenValue *out);

// Walk-on-spheres estimate with full statistics. `options` may be null.
//
// # Safety
// `domain` must be a live handle; `options` null or readable; `out` writable.
enum GreenStatus green_wos_estimate(const struct GreenDomain *domain,
                                    struct GreenPoint z,
                                    struct GreenPoint w,
                                    const struct GreenOptions *options,
                                    struct GreenWosResult *out);

// Fit a fundamental-solution expansion for pole `w`. `charges == 0` uses
// the default starting count.
//
// # Safety
// `domain` must be a live handle; `out` must be writable.
enum GreenStatus green_mfs_solve(const struct GreenDomain *domain,
                                 struct GreenPoint w,
                                 size_t charges,
                                 struct GreenMfsSolution **out);

// Zero-extended value of a fitted solution at `z`.
//
// # Safety
// `solution` must be a live handle; `out` must be writable.
enum GreenStatus green_mfs_evaluate(const struct GreenMfsSolution *solution,
                                    struct GreenPoint z,
                                    double *out);

// Largest boundary residual of a fitted solution.
//
// # Safety
// `solution` must be a live handle; `out` must be writable.
enum GreenStatus green_mfs_residual(const struct GreenMfsSolution *solution, double *out);

// Number of charges in a fitted solution.
//
// # Safety
// `solution` must be a live handle; `out` must be writable.
enum GreenStatus green_mfs_charge_count(const struct GreenMfsSolution *solution, size_t *out);

// Release a fitted solution. Null is accepted.
//
// # Safety
// `solution` must come from [`green_mfs_solve`] and not be used again.
void green_mfs_free(struct GreenMfsSolution *solution);

// Run a named reproduction with default `n` values. Results are written to
// `out_dir` when it is non-null. `options` may be null.
//
// # Safety
// `name` must be NUL-terminated; `out_dir` null or NUL-terminated;
// `options` null or readable; `passed` writable.
enum GreenStatus green_reproduce(const char *name,
                                 const char *out_dir,
                                 const struct GreenOptions *options,
                                 bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GREEN_H */

/* C API for the product Littlewood-Paley laboratory.
 *
 * All objects are opaque handles created and destroyed through this
 * interface; every fallible call returns a status code and leaves a
 * human-readable message in lplab_last_error() (thread-local).
 */
#ifndef LPLAB_H
#define LPLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lplab_status {
  LPLAB_OK = 0,
  LPLAB_ERR_INVALID_ARGUMENT = 1,
  LPLAB_ERR_CONFIG = 2,
  LPLAB_ERR_IO = 3,
  LPLAB_ERR_NUMERIC = 4,
  LPLAB_ERR_HYPOTHESIS = 5,
  LPLAB_ERR_UNKNOWN = 99
} lplab_status;

typedef struct lplab_grid lplab_grid;
typedef struct lplab_model lplab_model;
typedef struct lplab_profile lplab_profile;

const char* lplab_version(void);
const char* lplab_last_error(void);

/* --- grids -------------------------------------------------------- */

lplab_status lplab_grid_create_torus(size_t size, double period, lplab_grid** out);
lplab_status lplab_grid_create_halfline(size_t size, double radius, double bessel_lambda,
                                        lplab_grid** out);
void lplab_grid_destroy(lplab_grid* grid);
size_t lplab_grid_size(const lplab_grid* grid);
lplab_status lplab_grid_points(const lplab_grid* grid, double* out, size_t len);
lplab_status lplab_grid_volume(const lplab_grid* grid, double x, double r, double* out);
lplab_status lplab_grid_integrate(const lplab_grid* grid, const double* values, size_t len,
                                  double* out);

/* --- multiplier profiles ------------------------------------------ */

lplab_status lplab_profile_create(const char* tag, lplab_profile** out);
void lplab_profile_destroy(lplab_profile* profile);
lplab_status lplab_profile_eval(const lplab_profile* profile, const double* lambda,
                                double* out, size_t len);

/* --- spectral models ---------------------------------------------- */

/* model_tag: "laplacian" | "bessel" | "bessel-schrodinger" */
lplab_status lplab_model_create(const lplab_grid* grid, const char* model_tag,
                                double model_lambda, lplab_model** out);
void lplab_model_destroy(lplab_model* model);
lplab_status lplab_model_spectrum(const lplab_model* model, double* out, size_t len);
lplab_status lplab_model_apply_multiplier(const lplab_model* model,
                                          const lplab_profile* profile, double t,
                                          const double* field, double* out, size_t len);

/* --- experiment orchestration ------------------------------------- */

lplab_status lplab_validate_config_text(const char* json_text);
lplab_status lplab_validate_config_file(const char* path);

/* Runs a config file.  Optional overrides: out_dir (NULL keeps the config
 * value), formats_csv like "json,csv" (NULL keeps), threads (0 keeps),
 * has_seed/seed.  *hard_failure is set to 1 when a check failed hard. */
lplab_status lplab_run_config_file(const char* path, const char* out_dir,
                                   const char* formats_csv, int threads, int has_seed,
                                   uint64_t seed, int* hard_failure);

/* Newline-separated builtin inventory (profiles, models, weights). */
lplab_status lplab_list_builtins(char* buffer, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* LPLAB_H */

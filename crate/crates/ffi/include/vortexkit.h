#ifndef VORTEXKIT_H
#define VORTEXKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VkStatus {
  VK_STATUS_OK = 0,
  VK_STATUS_NULL_POINTER = 1,
  VK_STATUS_INVALID_ARGUMENT = 2,
  VK_STATUS_DIVERGENT = 3,
  VK_STATUS_NUMERICAL_FAILURE = 4,
  VK_STATUS_IO = 5,
  VK_STATUS_PANIC = 6,
} VkStatus;

typedef struct VkField VkField;

typedef struct VkIntegrand VkIntegrand;

typedef struct VkMesh VkMesh;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *vk_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void vk_string_free(char *s);

/**
 * Integrand from a JSON descriptor or a short form such as `trunc:100`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum VkStatus vk_integrand_new(const char *text, struct VkIntegrand **out);

/**
 * # Safety
 * `f` must come from `vk_integrand_new` or be NULL.
 */
void vk_integrand_free(struct VkIntegrand *f);

/**
 * # Safety
 * Valid handle and writable `out`.
 */
enum VkStatus vk_integrand_value(const struct VkIntegrand *f, double t, double *out);

/**
 * # Safety
 * Valid handle and writable `out`.
 */
enum VkStatus vk_vortex_energy(const struct VkIntegrand *f, double *out);

/**
 * `Λ_f(t)` with systole `sys`.
 *
 * # Safety
 * Valid handle and writable `out`.
 */
enum VkStatus vk_lambda(const struct VkIntegrand *f, double sys, double t, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum VkStatus vk_mesh_disk(double h, struct VkMesh **out);

/**
 * # Safety
 * `m` must come from `vk_mesh_disk` or be NULL.
 */
void vk_mesh_free(struct VkMesh *m);

/**
 * # Safety
 * Valid handle and writable outputs.
 */
enum VkStatus vk_mesh_counts(const struct VkMesh *m, size_t *vertices, size_t *triangles);

/**
 * Vortex ansatz: `n` centers as interleaved `x, y` pairs with their degrees.
 *
 * # Safety
 * `centers` holds `2n` reals, `degrees` holds `n` integers.
 */
enum VkStatus vk_field_vortex(const struct VkMesh *m,
                              const double *centers,
                              const int64_t *degrees,
                              size_t n,
                              double phase_offset,
                              struct VkField **out);

/**
 * # Safety
 * `u` must come from this library or be NULL.
 */
void vk_field_free(struct VkField *u);

/**
 * # Safety
 * Valid handles and writable `out`.
 */
enum VkStatus vk_field_energy(const struct VkField *u, const struct VkIntegrand *f, double *out);

/**
 * Minimizes from `u` with default settings, capped at `max_iters` when it
 * is nonzero; writes a new field handle.
 *
 * # Safety
 * Valid handles and writable outputs.
 */
enum VkStatus vk_field_minimize(const struct VkField *u,
                                const struct VkIntegrand *f,
                                size_t max_iters,
                                struct VkField **out,
                                double *energy);

/**
 * Detected defects as JSON.
 *
 * # Safety
 * Valid handle and writable `out`.
 */
enum VkStatus vk_field_defects_json(const struct VkField *u, char **out);

/**
 * Ball growth from a JSON seed list `[{"center":[x,y],"degree":d}, ...]`;
 * writes the final state as JSON.
 *
 * # Safety
 * NUL-terminated `seeds_json`; writable `out`.
 */
enum VkStatus vk_merge_sim(const char *seeds_json, double eta, double sys, char **out);

/**
 * Sweep over `n` parameters of a family on the disk; writes CSV.
 *
 * # Safety
 * NUL-terminated `family`; `params` holds `n` reals; writable `out`.
 */
enum VkStatus vk_sweep_csv(const char *family,
                           const double *params,
                           size_t n,
                           int64_t degree,
                           double h,
                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VORTEXKIT_H */

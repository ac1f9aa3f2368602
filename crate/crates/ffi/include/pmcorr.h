#ifndef PMCORR_H
#define PMCORR_H

#include <stddef.h>
#include <stdint.h>

typedef enum PmStatus {
  PM_STATUS_OK = 0,
  PM_STATUS_NULL_POINTER = 1,
  PM_STATUS_INVALID_PARAMETER = 2,
  PM_STATUS_NUMERICAL = 3,
  PM_STATUS_NON_INFORMATIVE = 4,
  PM_STATUS_PANIC = 5,
} PmStatus;

typedef enum PmTarget {
  PM_TARGET_GAMMA = 0,
  PM_TARGET_LAMBDA = 1,
} PmTarget;

/**
 * Opaque environment handle.
 */
typedef struct PmEnvironment PmEnvironment;

/**
 * Opaque probe handle.
 */
typedef struct PmProbe PmProbe;

/**
 * One row of the temporal-gain table.
 */
typedef struct PmTgiRow {
  double gamma;
  /**
   * s
   */
  double tau_max;
  double purity_at_tau_max;
  /**
   * s^-1
   */
  double relative_purity_rate;
  double lambda_sq_qfi;
  double tgi_db;
} PmTgiRow;

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next pmcorr call on the same thread.
 */
const char *pm_last_error_message(void);

/**
 * Static NUL-terminated version string.
 */
const char *pm_version(void);

/**
 * New probe. Pass `ell0 = INFINITY` for a fully coherent source.
 *
 * # Safety
 * `out` must be valid for writes. The handle must be released with
 * [`pm_probe_free`].
 */
enum PmStatus pm_probe_new(double mass,
                           double sigma0,
                           double ell0,
                           double gamma,
                           struct PmProbe **out);

/**
 * Fullerene reference probe with the given γ.
 *
 * # Safety
 * As [`pm_probe_new`].
 */
enum PmStatus pm_probe_fullerene(double gamma, struct PmProbe **out);

/**
 * # Safety
 * `probe` must be a live handle.
 */
enum PmStatus pm_probe_set_gamma(struct PmProbe *probe, double gamma);

/**
 * # Safety
 * `probe` must be NULL or a handle from this library, freed at most once.
 */
void pm_probe_free(struct PmProbe *probe);

/**
 * # Safety
 * `out` must be valid for writes; release with [`pm_environment_free`].
 */
enum PmStatus pm_environment_new(double lambda, struct PmEnvironment **out);

/**
 * Environment from a gas temperature (K), gas particle mass (kg), number
 * density (m^-3) and probe size (m).
 *
 * # Safety
 * As [`pm_environment_new`].
 */
enum PmStatus pm_environment_from_temperature(double temperature,
                                              double m_air,
                                              double number_density,
                                              double molecule_size,
                                              struct PmEnvironment **out);

/**
 * # Safety
 * `env` must be a live handle; `out` valid for writes.
 */
enum PmStatus pm_environment_lambda(const struct PmEnvironment *env, double *out);

/**
 * # Safety
 * `env` must be NULL or a handle from this library, freed at most once.
 */
void pm_environment_free(struct PmEnvironment *env);

/**
 * Tr ρ² at time `t` (s).
 *
 * # Safety
 * Handles must be live; `out` valid for writes.
 */
enum PmStatus pm_purity(const struct PmProbe *probe,
                        const struct PmEnvironment *env,
                        double t,
                        double *out);

/**
 * Closed-form quantum Fisher information.
 *
 * # Safety
 * As [`pm_purity`].
 */
enum PmStatus pm_qfi(enum PmTarget target,
                     const struct PmProbe *probe,
                     const struct PmEnvironment *env,
                     double t,
                     double *out);

/**
 * Finite-difference quantum Fisher information with the default step policy.
 *
 * # Safety
 * As [`pm_purity`].
 */
enum PmStatus pm_qfi_numeric(enum PmTarget target,
                             const struct PmProbe *probe,
                             const struct PmEnvironment *env,
                             double t,
                             double *out);

/**
 * Classical Fisher information of a position measurement.
 *
 * # Safety
 * As [`pm_purity`].
 */
enum PmStatus pm_cfi(enum PmTarget target,
                     const struct PmProbe *probe,
                     const struct PmEnvironment *env,
                     double t,
                     double *out);

/**
 * Time (s) maximizing the relative purity rate.
 *
 * # Safety
 * Handles must be live; `out` valid for writes.
 */
enum PmStatus pm_tau_max(const struct PmProbe *probe, const struct PmEnvironment *env, double *out);

/**
 * Temporal gain of information relative to γ = 0, dB.
 *
 * # Safety
 * As [`pm_tau_max`].
 */
enum PmStatus pm_tgi(const struct PmProbe *probe, const struct PmEnvironment *env, double *out);

/**
 * (10/3)·log10(1 + γ²), dB.
 */
double pm_tgi_approx(double gamma);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PmStatus pm_lambda_from_temperature(double temperature,
                                         double m_air,
                                         double number_density,
                                         double molecule_size,
                                         double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PmStatus pm_temperature_from_lambda(double lambda,
                                         double m_air,
                                         double number_density,
                                         double molecule_size,
                                         double *out);

/**
 * Fills `rows[0..n]` with one table row per entry of `gammas[0..n]`. The
 * probe's own γ is ignored. `rows` is left untouched on failure.
 *
 * # Safety
 * `gammas` must point to `n` readable values and `rows` to `n` writable rows.
 */
enum PmStatus pm_table1(const struct PmProbe *probe,
                        double lambda,
                        const double *gammas,
                        uintptr_t n,
                        struct PmTgiRow *rows);

#endif  /* PMCORR_H */

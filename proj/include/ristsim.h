/* ristsim — 1-bit quantized RIS-modulated ISAC transmitter simulator.
 *
 * C API over the C++ core: opaque handles, integer status codes, and
 * caller-owned output buffers. All functions are thread-compatible; the
 * last-error message is thread-local.
 */
#ifndef RISTSIM_H
#define RISTSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rist_status {
  RIST_OK = 0,
  RIST_ERR_INVALID_ARG = 1,  /* bad handle, null pointer, bad enum value */
  RIST_ERR_PARSE = 2,        /* config file or value cannot be parsed    */
  RIST_ERR_DOMAIN = 3,       /* input outside an operation's domain      */
  RIST_ERR_CONVERGENCE = 4,  /* solver hit its iteration limit           */
  RIST_ERR_IO = 5,           /* file system problem                      */
  RIST_ERR_INTERNAL = 6
} rist_status;

typedef struct rist_config rist_config;
typedef struct rist_design rist_design;

const char* rist_version(void);

/* Message for the most recent failing call on this thread. */
const char* rist_last_error(void);

/* ------------------------------------------------------------------ */
/* Configuration                                                       */

/* New config with the reference-scenario defaults. */
rist_status rist_config_create(rist_config** out);
/* Parse a "key = value" config file; unknown keys and every constraint
 * violation are reported together via rist_last_error(). */
rist_status rist_config_load(const char* path, rist_config** out);
rist_status rist_config_set(rist_config* cfg, const char* key,
                            const char* value);
/* Canonical resolved snapshot; returns required size (excluding NUL) and
 * copies min(size, cap-1) bytes when buf is non-NULL. */
rist_status rist_config_text(const rist_config* cfg, char* buf, size_t cap,
                             size_t* size);
/* 16 hex chars + NUL. */
rist_status rist_config_digest(const rist_config* cfg, char buf[17]);
void rist_config_free(rist_config* cfg);

/* ------------------------------------------------------------------ */
/* Transmit covariance design                                          */

typedef enum rist_design_kind {
  RIST_DESIGN_PROPOSED = 0,     /* quantization-aware 1-bit chain */
  RIST_DESIGN_UNQUANTIZED = 1,  /* relaxed solution used directly  */
  RIST_DESIGN_RADAR_ONLY = 2    /* target boxes only, no RIS lobe  */
} rist_design_kind;

typedef enum rist_pattern_kind {
  RIST_PATTERN_QUANTIZED = 0,   /* radiated (post-DAC) beampattern */
  RIST_PATTERN_UNQUANTIZED = 1, /* pre-DAC transmit covariance     */
  RIST_PATTERN_DESIRED = 2      /* tau-scaled desired pattern      */
} rist_pattern_kind;

rist_status rist_design_create(const rist_config* cfg, rist_design_kind kind,
                               rist_design** out);
int rist_design_grid_size(const rist_design* d);
rist_status rist_design_angles_deg(const rist_design* d, double* out,
                                   size_t cap);
rist_status rist_design_beampattern(const rist_design* d,
                                    rist_pattern_kind kind, double* out,
                                    size_t cap);
double rist_design_tau(const rist_design* d);
double rist_design_objective(const rist_design* d);
int rist_design_iterations(const rist_design* d);
/* Worst-case (minimum over targets) illumination power at unit per-antenna
 * power; per_target may be NULL. */
rist_status rist_design_illumination(const rist_design* d,
                                     const rist_config* cfg,
                                     double* per_target, size_t cap,
                                     double* worst_case);
void rist_design_free(rist_design* d);

/* ------------------------------------------------------------------ */
/* Monte-Carlo symbol error probability                                */

/* scheme: "RIST" | "MRT" | "QMRT" | "ZF"; ris_bits: 1..8 or 0 for infinite
 * precision (ignored for the baselines). */
rist_status rist_simulate_sep(const rist_config* cfg, const char* scheme,
                              int ris_bits, double total_power_db,
                              int workers, uint64_t* errors, uint64_t* trials,
                              double* sep);

/* ------------------------------------------------------------------ */
/* Experiment runner                                                   */

/* command: "beampattern" | "sep" | "oracles" | "all". Writes CSV/JSON
 * artifacts into a fresh timestamped directory under out_dir and returns the
 * run summary as a JSON string (free with rist_string_free). A failed run
 * returns RIST_ERR_INTERNAL and still produces the summary when possible. */
rist_status rist_run(const rist_config* cfg, const char* command,
                     const char* out_dir, int workers, int quick,
                     char** json_summary);
void rist_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RISTSIM_H */

/*
 * C API of libaoi: Age-of-Information bounds, approximations and a
 * deterministic discrete-event simulator for multi-hop relay networks
 * with cross traffic and erasure links.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return AOI_OK (0) on success or a negative error code;
 * aoi_last_error() describes the most recent failure on the calling
 * thread. Handles are not thread-safe individually, but distinct handles
 * may be used from different threads concurrently.
 */

#ifndef AOI_AOI_H
#define AOI_AOI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum aoi_status {
  AOI_OK = 0,
  AOI_EINVAL = -1,       /* invalid argument or malformed input */
  AOI_EPARSE = -2,       /* scenario text could not be parsed */
  AOI_EUNSTABLE = -3,    /* some node has rho >= 1 */
  AOI_EUNSUPPORTED = -4, /* operation outside the supported model */
  AOI_ERANGE = -5,       /* index out of range */
  AOI_EIO = -6,          /* file could not be read */
  AOI_ENOMEM = -7
};

enum aoi_policy { AOI_POLICY_FCFS = 0, AOI_POLICY_OPF = 1, AOI_POLICY_HAF = 2 };

typedef struct aoi_config aoi_config;     /* one source's path */
typedef struct aoi_scenario aoi_scenario; /* scenario file + sweep */
typedef struct aoi_sim aoi_sim;           /* finished simulation */

/* Message for the last failed call on this thread. */
const char* aoi_last_error(void);
const char* aoi_status_name(int status);

/* ---- configs ---------------------------------------------------------- */

/* Arrays have length k_links. Returns NULL on invalid input. */
aoi_config* aoi_config_create(int k_links, double lambda, const double* theta,
                              const double* psi, const double* mu,
                              const double* eps);
aoi_config* aoi_config_line(int k_links, double rho, double mu_isl,
                            double mu_dl, double eps);
aoi_config* aoi_config_dumbbell(int n_sources, double rho, double mu_isl,
                                double mu_dl, double eps);
void aoi_config_free(aoi_config* config);

int aoi_config_set_uplink_ideal(aoi_config* config);
int aoi_config_set_uplink_mpr(aoi_config* config, double p_c);
int aoi_config_set_uplink_aloha(aoi_config* config, double packet_duration);
int aoi_config_set_buffer_capacity(aoi_config* config, uint32_t capacity);

int aoi_config_k_links(const aoi_config* config);
double aoi_config_lambda(const aoi_config* config);

/* Each output may be NULL; non-NULL outputs must hold k_links doubles
 * (p_s: k_links + 1). */
int aoi_config_derived(const aoi_config* config, double* theta_bar,
                       double* p_s, double* arrival_rate, double* rho,
                       double* alpha);

/* Stable: *first_unstable_node = 0. Unstable: the 1-based node index. */
int aoi_config_stability(const aoi_config* config, int* first_unstable_node);

/* ---- closed forms ----------------------------------------------------- */

int aoi_mean_network_time(const aoi_config* config, double* out);
int aoi_approx(const aoi_config* config, double* out);

typedef struct aoi_bounds_result {
  double lower;
  double upper;
  double approx;
} aoi_bounds_result;

int aoi_bounds(const aoi_config* config, int policy, aoi_bounds_result* out);

/* Error-free configs only: upper bound on P(PAoI > tau). */
int aoi_paoi_tail_bound(const aoi_config* config, double tau, double* out);

int aoi_mm1_aoi_exact(double lambda, double mu, double* out);

/* ---- scenarios -------------------------------------------------------- */

aoi_scenario* aoi_scenario_load(const char* path);
aoi_scenario* aoi_scenario_parse(const char* text);
void aoi_scenario_free(aoi_scenario* scenario);

/* Canonical serialized form; parsing it back yields identical configs.
 * Returns the number of bytes required (excluding the terminator); writes
 * up to cap bytes including a terminator when buf is non-NULL. */
size_t aoi_scenario_canonical(const aoi_scenario* scenario, char* buf,
                              size_t cap);
/* 16 hex digits + terminator. */
int aoi_scenario_hash(const aoi_scenario* scenario, char buf[17]);

typedef struct aoi_run_params {
  int policy;
  uint64_t n_pkt;
  uint64_t seed;
  double warmup_frac;
  int n_seeds;
  uint32_t buffer_capacity; /* 0 = infinite */
  double uplink_packet_duration;
  double uplink_horizon;
} aoi_run_params;

int aoi_scenario_run_params(const aoi_scenario* scenario, aoi_run_params* out);

size_t aoi_scenario_num_points(const aoi_scenario* scenario);

typedef struct aoi_point_info {
  double rho;
  int k_links;
  int n_sources;
  int policy;
  char sweep_parameter[16];
  char sweep_label[32];
} aoi_point_info;

int aoi_scenario_point_info(const aoi_scenario* scenario, size_t point,
                            aoi_point_info* out);

/* Number of measured sources at a sweep point. */
int aoi_scenario_num_sources(const aoi_scenario* scenario, size_t point);

/* Tagged view of one measured source (0-based). Caller frees. */
aoi_config* aoi_scenario_source_config(const aoi_scenario* scenario,
                                       size_t point, int source);

/* ---- simulation ------------------------------------------------------- */

/* Runs the sweep point's network with the scenario's run parameters and
 * the given master seed. */
aoi_sim* aoi_scenario_simulate(const aoi_scenario* scenario, size_t point,
                               uint64_t seed);

/* Tagged view of a config: cross traffic simulated but not measured. */
aoi_sim* aoi_simulate_config(const aoi_config* config, int policy,
                             uint64_t n_pkt, uint64_t seed,
                             double warmup_frac);

void aoi_sim_free(aoi_sim* sim);

typedef struct aoi_source_stats {
  int source_id;
  uint64_t generated;
  uint64_t delivered;
  uint64_t kept;
  uint64_t lost;
  double mean_aoi;
  double se_aoi;
  double mean_paoi;
  double paoi_p50;
  double paoi_p90;
  double paoi_p99;
  double mean_delay;
  double se_delay;
} aoi_source_stats;

int aoi_sim_num_sources(const aoi_sim* sim);
int aoi_sim_source_stats(const aoi_sim* sim, int source, aoi_source_stats* out);
int aoi_sim_jfi(const aoi_sim* sim, double* out);
int aoi_sim_unstable(const aoi_sim* sim);
double aoi_sim_horizon(const aoi_sim* sim);

/* Empirical CDF of the kept PAoI samples of one source on a tau grid. */
int aoi_sim_paoi_ecdf(const aoi_sim* sim, int source, const double* taus,
                      size_t n, double* out);
int64_t aoi_sim_paoi_count(const aoi_sim* sim, int source);

/* ---- uplink comparison ------------------------------------------------ */

typedef struct aoi_aloha_stats {
  double survivor_rate;     /* survivors / horizon */
  double thinned_rate;      /* lambda * exp(-2 lambda duration) */
  double ks_distance;       /* interdeparture ECDF vs Exp(thinned_rate) */
  uint64_t n_offered;
  uint64_t n_survivors;
} aoi_aloha_stats;

int aoi_aloha_compare(double lambda_offered, double packet_duration,
                      double horizon, uint64_t seed, aoi_aloha_stats* out);

#ifdef __cplusplus
}
#endif

#endif /* AOI_AOI_H */

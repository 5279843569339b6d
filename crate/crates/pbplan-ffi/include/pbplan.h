#ifndef PBPLAN_H
#define PBPLAN_H

/* Generated by cbindgen from the pbplan-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status of a call. `Ok` doubles as "motivating"/"feasible"; `Negative`
 is the well-defined negative verdict (not motivating, infeasible).
 */
typedef enum PbpStatus {
  PBP_STATUS_OK = 0,
  PBP_STATUS_NEGATIVE = 1,
  PBP_STATUS_INVALID_ARGUMENT = 2,
  PBP_STATUS_PARSE_ERROR = 3,
  PBP_STATUS_DOMAIN_ERROR = 4,
} PbpStatus;

/*
 Opaque bias set handle.
 */
typedef struct PbpBiasSet PbpBiasSet;

/*
 Opaque cost configuration handle.
 */
typedef struct PbpConfig PbpConfig;

/*
 Opaque task graph handle.
 */
typedef struct PbpGraph PbpGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the most recent failure on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *pbp_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `text` must come from this library and not be freed twice.
 */
void pbp_string_free(char *text);

/*
 Parses a graph document.

 # Safety
 `json` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum PbpStatus pbp_graph_parse(const char *json, struct PbpGraph **out);

/*
 Serializes a graph to its document form; release with `pbp_string_free`.

 # Safety
 `graph` must be a live handle from this library.
 */
char *pbp_graph_serialize(const struct PbpGraph *graph);

/*
 # Safety
 `graph` must be a live handle; it is consumed.
 */
void pbp_graph_free(struct PbpGraph *graph);

/*
 # Safety
 `graph` must be a live handle.
 */
uintptr_t pbp_graph_node_count(const struct PbpGraph *graph);

/*
 # Safety
 `graph` must be a live handle.
 */
uintptr_t pbp_graph_edge_count(const struct PbpGraph *graph);

/*
 Restricts the graph to nodes on some source-target path.

 # Safety
 `graph` must be a live handle, `out` a valid pointer.
 */
enum PbpStatus pbp_graph_normalize(const struct PbpGraph *graph, struct PbpGraph **out);

/*
 Adds a configuration's extra costs onto a graph.

 # Safety
 Both handles must be live, `out` a valid pointer.
 */
enum PbpStatus pbp_graph_apply(const struct PbpGraph *graph,
                               const struct PbpConfig *config,
                               struct PbpGraph **out);

/*
 Parses a bias set document (a list of `[lo, hi]` rational strings).

 # Safety
 `json` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum PbpStatus pbp_bias_parse(const char *json, struct PbpBiasSet **out);

/*
 Builds the degenerate bias set `{beta}`.

 # Safety
 `beta` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum PbpStatus pbp_bias_singleton(const char *beta, struct PbpBiasSet **out);

/*
 # Safety
 `set` must be a live handle.
 */
char *pbp_bias_serialize(const struct PbpBiasSet *set);

/*
 # Safety
 `set` must be a live handle; it is consumed.
 */
void pbp_bias_free(struct PbpBiasSet *set);

/*
 Parses a cost configuration document (a list of `{edge, extra}` records).

 # Safety
 `json` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum PbpStatus pbp_config_parse(const char *json, struct PbpConfig **out);

/*
 # Safety
 `config` must be a live handle.
 */
char *pbp_config_serialize(const struct PbpConfig *config);

/*
 # Safety
 `config` must be a live handle; it is consumed.
 */
void pbp_config_free(struct PbpConfig *config);

/*
 Fixed-bias motivation check. Returns `Ok` when motivating, `Negative`
 otherwise; `report_out` (nullable) receives the verdict report JSON.

 # Safety
 `graph` must be a live handle; strings valid and NUL-terminated.
 */
enum PbpStatus pbp_verify_fixed(const struct PbpGraph *graph,
                                const char *beta,
                                const char *reward,
                                char **report_out);

/*
 Uncertain-bias motivation check over a bias set.

 # Safety
 As [`pbp_verify_fixed`], plus `set` must be a live handle.
 */
enum PbpStatus pbp_verify_uncertain(const struct PbpGraph *graph,
                                    const struct PbpBiasSet *set,
                                    const char *reward,
                                    char **report_out);

/*
 Variable-bias motivation check over a bias set.

 # Safety
 As [`pbp_verify_uncertain`].
 */
enum PbpStatus pbp_verify_variable(const struct PbpGraph *graph,
                                   const struct PbpBiasSet *set,
                                   const char *reward,
                                   char **report_out);

/*
 Exact minimal motivating reward at a fixed bias, as a `"p/q"` string.

 # Safety
 As [`pbp_verify_fixed`].
 */
enum PbpStatus pbp_required_reward_fixed(const struct PbpGraph *graph,
                                         const char *beta,
                                         char **out);

/*
 Runs the 2-approximation (`variable` = false) or the (1+tau) variant
 (`variable` = true). `config_out` receives the certified configuration;
 `summary_out` (nullable) a JSON object with alpha, the lower bound and
 the certified reward.

 # Safety
 Handles must be live; out pointers valid.
 */
enum PbpStatus pbp_approx(const struct PbpGraph *graph,
                          const struct PbpBiasSet *set,
                          bool variable,
                          struct PbpConfig **config_out,
                          char **summary_out);

/*
 Decides critical-node-set feasibility at a reward (`1` must be in the
 bias set). Returns `Ok` when feasible, `Negative` when not;
 `config_out` (nullable) receives the fencing configuration when feasible.

 # Safety
 Handles must be live; strings valid and NUL-terminated.
 */
enum PbpStatus pbp_cns_decide(const struct PbpGraph *graph,
                              const struct PbpBiasSet *set,
                              const char *reward,
                              struct PbpConfig **config_out);

/*
 Optimal occasionally-unbiased reward as a JSON object
 `{lo, hi, exact?}`, searched to the given tolerance.

 # Safety
 Handles must be live; strings valid and NUL-terminated.
 */
enum PbpStatus pbp_cns_threshold(const struct PbpGraph *graph,
                                 const struct PbpBiasSet *set,
                                 const char *tol,
                                 char **out);

/*
 The running two-runner scenario for a bias offset `eps`.

 # Safety
 `eps` must be a valid NUL-terminated string, `out` a valid pointer.
 */
enum PbpStatus pbp_gen_alice_bob(const char *eps, struct PbpGraph **out);

/*
 Price-of-uncertainty family member for parameter `a`.

 # Safety
 As [`pbp_gen_alice_bob`].
 */
enum PbpStatus pbp_gen_pou(const char *a, struct PbpGraph **out);

/*
 Price-of-variability family member for parameter `a`.

 # Safety
 As [`pbp_gen_alice_bob`].
 */
enum PbpStatus pbp_gen_pov(const char *a, struct PbpGraph **out);

/*
 Seeded random normalized DAG.

 # Safety
 `out` must be a valid pointer.
 */
enum PbpStatus pbp_gen_random(uint64_t seed,
                              uintptr_t nodes,
                              uint32_t cost_den,
                              struct PbpGraph **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PBPLAN_H */

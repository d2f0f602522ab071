// Copyright 2026 The Reverso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the reverso transport core.
 *
 * Every function returns RVS_OK (0) or a positive informational status on
 * success and a negative RVS_ERR_* code on failure. rvs_last_error() gives
 * the message for the most recent failure on the calling thread.
 *
 * Handles are opaque and single-owner. A connection and the buffer map it
 * receives into must not be used from two threads at once.
 */

#ifndef REVERSO_REVERSO_H_
#define REVERSO_REVERSO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RVS_API __declspec(dllexport)
#elif defined(__GNUC__)
#define RVS_API __attribute__((visibility("default")))
#else
#define RVS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define RVS_OK 0
#define RVS_DONE 1 /* nothing to send */

#define RVS_ERR_ENCODING_OVERFLOW (-1)
#define RVS_ERR_TRUNCATED_VARINT (-2)
#define RVS_ERR_KEY_DERIVATION (-3)
#define RVS_ERR_BUFFER_TOO_SMALL (-4)
#define RVS_ERR_TRUNCATION_RANGE (-5)
#define RVS_ERR_STREAM_ID_OVERFLOW (-6)
#define RVS_ERR_PACKET_TOO_SHORT (-7)
#define RVS_ERR_MALFORMED_HEADER (-8)
#define RVS_ERR_UNKNOWN_FRAME_TYPE (-9)
#define RVS_ERR_MALFORMED_FRAME (-10)
#define RVS_ERR_FRAME_ORDER (-11)
#define RVS_ERR_FINAL_SIZE (-12)
#define RVS_ERR_CONSUME_OUT_OF_RANGE (-13)
#define RVS_ERR_PROTOCOL_VIOLATION (-14)
#define RVS_ERR_SEND_AFTER_FIN (-15)
#define RVS_ERR_STREAM_NOT_FOUND (-16)
#define RVS_ERR_INVALID_ARGUMENT (-17)
#define RVS_ERR_CONNECTION_CLOSED (-18)
#define RVS_ERR_BUFFER_LIMIT (-19)
#define RVS_ERR_CRYPTO (-20)
#define RVS_ERR_NO_MEMORY (-100)
#define RVS_ERR_INTERNAL (-101)

#define RVS_MAX_DATAGRAM_SIZE 1350
#define RVS_SECRET_LEN 32

typedef enum rvs_mode { RVS_MODE_BASELINE = 0, RVS_MODE_REVERSO = 1 } rvs_mode;
typedef enum rvs_role { RVS_ROLE_CLIENT = 0, RVS_ROLE_SERVER = 1 } rvs_role;

typedef struct rvs_conn rvs_conn;
typedef struct rvs_appbuf rvs_appbuf;

RVS_API const char* rvs_version(void);
RVS_API const char* rvs_strerror(int code);
RVS_API const char* rvs_last_error(void);

/* ---- connections ---- */

typedef struct rvs_conn_options {
  uint64_t rto_ms;               /* 0 selects the default (100) */
  size_t window_packets;         /* 0 selects the default (64) */
  uint64_t max_stream_data_step; /* 0 selects the default (4 MiB) */
} rvs_conn_options;

/* `options` may be NULL. */
RVS_API int rvs_conn_new(rvs_mode mode, rvs_role role, const uint8_t* secret, size_t secret_len,
                         const rvs_conn_options* options, rvs_conn** out);
RVS_API void rvs_conn_free(rvs_conn* conn);

RVS_API int rvs_stream_send(rvs_conn* conn, uint64_t stream_id, const uint8_t* data, size_t len,
                            int fin, size_t* queued);

/* Writes one datagram into `out` (at least RVS_MAX_DATAGRAM_SIZE bytes).
 * Returns RVS_DONE with *written = 0 when there is nothing to send. */
RVS_API int rvs_build_packet(rvs_conn* conn, uint8_t* out, size_t out_len, uint64_t now_ms,
                             size_t* written);

/* Processes one datagram; the buffer is modified. */
RVS_API int rvs_recv(rvs_conn* conn, uint8_t* datagram, size_t len, rvs_appbuf* appbuf);

/* Copies up to `cap` readable stream ids into `ids`; returns how many exist. */
RVS_API size_t rvs_readable(const rvs_conn* conn, uint64_t* ids, size_t cap);

/* Points `*data` at the contiguous unconsumed bytes of a stream. The view
 * stays valid until the next call that takes `appbuf`. */
RVS_API int rvs_stream_recv(rvs_conn* conn, uint64_t stream_id, rvs_appbuf* appbuf,
                            const uint8_t** data, size_t* len, int* fin);
RVS_API int rvs_stream_consumed(rvs_conn* conn, uint64_t stream_id, size_t n,
                                rvs_appbuf* appbuf);

RVS_API int rvs_on_timeout(rvs_conn* conn, uint64_t now_ms);
RVS_API int rvs_send_ping(rvs_conn* conn);
RVS_API int rvs_close(rvs_conn* conn, uint64_t error_code, const uint8_t* reason, size_t len);

RVS_API int rvs_conn_is_closed(const rvs_conn* conn);
RVS_API int rvs_conn_peer_closed(const rvs_conn* conn, uint64_t* error_code);
RVS_API int rvs_conn_all_acked(const rvs_conn* conn);
RVS_API int rvs_conn_has_pending_send(const rvs_conn* conn);
RVS_API size_t rvs_conn_in_flight(const rvs_conn* conn);

typedef struct rvs_metrics {
  uint64_t payload_bytes_copied;
  uint64_t payload_bytes_zero_copy;
  uint64_t payload_bytes_stashed;
  uint64_t packets_in_order;
  uint64_t packets_out_of_order;
  uint64_t packets_spurious;
  uint64_t packets_control_only;
  uint64_t packets_duplicate;
  uint64_t decrypt_failures;
  uint64_t packets_sent;
  uint64_t packets_received;
  uint64_t bytes_sent;
  uint64_t bytes_received;
  uint64_t retransmissions;
} rvs_metrics;

RVS_API int rvs_conn_metrics(const rvs_conn* conn, rvs_metrics* out);

/* ---- receive buffer map ---- */

/* `default_capacity` of 0 selects 1 MiB. */
RVS_API int rvs_appbuf_new(size_t default_capacity, rvs_appbuf** out);
RVS_API void rvs_appbuf_free(rvs_appbuf* appbuf);
RVS_API size_t rvs_appbuf_streams(const rvs_appbuf* appbuf);

/* ---- simulation and benchmarks ---- */

typedef struct rvs_pipe_config {
  uint64_t seed;
  double reorder_prob;
  uint32_t reorder_depth; /* 0 selects 3 */
  double loss_prob;
  double duplicate_prob;
} rvs_pipe_config;

typedef struct rvs_transfer_report {
  rvs_mode mode;
  uint64_t bytes_transferred;
  uint32_t streams;
  double wall_time_s;
  double throughput_MBps;
  uint64_t payload_bytes_copied;
  uint64_t payload_bytes_zero_copy;
  uint64_t payload_bytes_stashed;
  uint64_t packets_in_order;
  uint64_t packets_out_of_order;
  double ordered_ratio;
  uint64_t decrypt_failures;
  uint64_t retransmissions;
  uint64_t packets_sent;
  uint64_t packets_delivered;
  uint64_t checksum;
  int verified;
} rvs_transfer_report;

RVS_API int rvs_run_transfer(rvs_mode mode, uint64_t transfer_size, uint32_t streams,
                             const rvs_pipe_config* pipe, rvs_transfer_report* out);

typedef struct rvs_bench_result {
  rvs_mode mode;
  size_t packets;
  uint64_t bytes;
  size_t repetitions;
  double median_ns;
  double p5_ns;
  double p95_ns;
  double throughput_MBps;
  uint64_t payload_bytes_copied;
  uint64_t payload_bytes_zero_copy;
  double calibration_ns;
} rvs_bench_result;

RVS_API int rvs_bench_batch(rvs_mode mode, size_t packets, size_t datagram_size,
                            size_t repetitions, uint64_t seed, rvs_bench_result* out);

/* Both modes over the same traffic shape with interleaved repetitions. */
RVS_API int rvs_bench_compare(size_t packets, size_t datagram_size, size_t repetitions,
                              uint64_t seed, rvs_bench_result* baseline,
                              rvs_bench_result* reverso);

/* ---- diagnostics ---- */

/* Writes a NUL-terminated description of `datagram` into `out`. `*needed`
 * receives the full length including the terminator; RVS_ERR_BUFFER_TOO_SMALL
 * is returned if it does not fit. *authenticated is set when the tag checks. */
RVS_API int rvs_inspect(rvs_mode mode, rvs_role sender, const uint8_t* secret, size_t secret_len,
                        const uint8_t* datagram, size_t len, uint64_t pn_reference,
                        uint64_t offset_reference, char* out, size_t out_cap, size_t* needed,
                        int* authenticated);

#ifdef __cplusplus
}
#endif

#endif /* REVERSO_REVERSO_H_ */

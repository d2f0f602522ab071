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

#include "reverso/reverso.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "reverso/endpoint.hpp"
#include "reverso/error.hpp"
#include "reverso/harness.hpp"
#include "reverso/inspect.hpp"

struct rvs_conn {
  reverso::Connection conn;
};

struct rvs_appbuf {
  reverso::stream::AppRecvBufMap map;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* message) {
  g_last_error = message;
  return code;
}

template <typename F>
int guarded(F&& body) noexcept {
  try {
    return body();
  } catch (const reverso::Error& e) {
    return fail(-static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RVS_ERR_NO_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(RVS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RVS_ERR_INTERNAL, "unknown failure");
  }
}

#define RVS_REQUIRE(cond)                                                 \
  do {                                                                    \
    if (!(cond)) return fail(RVS_ERR_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

reverso::WireMode to_mode(rvs_mode m) {
  switch (m) {
    case RVS_MODE_BASELINE:
      return reverso::WireMode::kBaseline;
    case RVS_MODE_REVERSO:
      return reverso::WireMode::kReverso;
  }
  throw reverso::Error(reverso::ErrorCode::kInvalidArgument, "unknown mode");
}

reverso::Role to_role(rvs_role r) {
  switch (r) {
    case RVS_ROLE_CLIENT:
      return reverso::Role::kClient;
    case RVS_ROLE_SERVER:
      return reverso::Role::kServer;
  }
  throw reverso::Error(reverso::ErrorCode::kInvalidArgument, "unknown role");
}

rvs_mode from_mode(reverso::WireMode m) {
  return m == reverso::WireMode::kBaseline ? RVS_MODE_BASELINE : RVS_MODE_REVERSO;
}

void fill(const reverso::harness::BenchResult& r, rvs_bench_result* out) {
  out->mode = from_mode(r.mode);
  out->packets = r.packets;
  out->bytes = r.bytes;
  out->repetitions = r.repetitions;
  out->median_ns = r.median_ns;
  out->p5_ns = r.p5_ns;
  out->p95_ns = r.p95_ns;
  out->throughput_MBps = r.throughput_MBps;
  out->payload_bytes_copied = r.payload_bytes_copied;
  out->payload_bytes_zero_copy = r.payload_bytes_zero_copy;
  out->calibration_ns = r.calibration_ns;
}

}  // namespace

extern "C" {

const char* rvs_version(void) { return "0.1.0"; }

const char* rvs_strerror(int code) {
  if (code == RVS_OK) return "ok";
  if (code == RVS_DONE) return "done";
  if (code == RVS_ERR_NO_MEMORY) return "NoMemory";
  if (code == RVS_ERR_INTERNAL) return "Internal";
  if (code < 0 && code >= RVS_ERR_CRYPTO) {
    return reverso::error_name(static_cast<reverso::ErrorCode>(-code));
  }
  return "unknown";
}

const char* rvs_last_error(void) { return g_last_error.c_str(); }

int rvs_conn_new(rvs_mode mode, rvs_role role, const uint8_t* secret, size_t secret_len,
                 const rvs_conn_options* options, rvs_conn** out) {
  return guarded([&] {
    RVS_REQUIRE(out != nullptr && secret != nullptr);
    reverso::ConnectionOptions opts;
    if (options != nullptr) {
      if (options->rto_ms != 0) opts.rto_ms = options->rto_ms;
      if (options->window_packets != 0) opts.window_packets = options->window_packets;
      if (options->max_stream_data_step != 0) opts.max_stream_data_step = options->max_stream_data_step;
    }
    *out = new rvs_conn{reverso::Connection(to_mode(mode), to_role(role),
                                            std::span<const uint8_t>(secret, secret_len), opts)};
    return RVS_OK;
  });
}

void rvs_conn_free(rvs_conn* conn) { delete conn; }

int rvs_stream_send(rvs_conn* conn, uint64_t stream_id, const uint8_t* data, size_t len, int fin,
                    size_t* queued) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr && (data != nullptr || len == 0));
    const size_t n = conn->conn.stream_send(stream_id, {data, len}, fin != 0);
    if (queued != nullptr) *queued = n;
    return RVS_OK;
  });
}

int rvs_build_packet(rvs_conn* conn, uint8_t* out, size_t out_len, uint64_t now_ms,
                     size_t* written) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr && out != nullptr && written != nullptr);
    *written = 0;
    const auto n = conn->conn.build_packet({out, out_len}, now_ms);
    if (!n) return RVS_DONE;
    *written = *n;
    return RVS_OK;
  });
}

int rvs_recv(rvs_conn* conn, uint8_t* datagram, size_t len, rvs_appbuf* appbuf) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr && datagram != nullptr && appbuf != nullptr);
    conn->conn.recv({datagram, len}, appbuf->map);
    return RVS_OK;
  });
}

size_t rvs_readable(const rvs_conn* conn, uint64_t* ids, size_t cap) {
  if (conn == nullptr) return 0;
  const auto readable = conn->conn.readable();
  for (size_t i = 0; i < readable.size() && i < cap && ids != nullptr; ++i) ids[i] = readable[i];
  return readable.size();
}

int rvs_stream_recv(rvs_conn* conn, uint64_t stream_id, rvs_appbuf* appbuf, const uint8_t** data,
                    size_t* len, int* fin) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr && appbuf != nullptr && data != nullptr && len != nullptr);
    const auto view = conn->conn.stream_recv(stream_id, appbuf->map);
    *data = view.data.data();
    *len = view.data.size();
    if (fin != nullptr) *fin = view.fin ? 1 : 0;
    return RVS_OK;
  });
}

int rvs_stream_consumed(rvs_conn* conn, uint64_t stream_id, size_t n, rvs_appbuf* appbuf) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr && appbuf != nullptr);
    conn->conn.stream_consumed(stream_id, n, appbuf->map);
    return RVS_OK;
  });
}

int rvs_on_timeout(rvs_conn* conn, uint64_t now_ms) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr);
    conn->conn.on_timeout(now_ms);
    return RVS_OK;
  });
}

int rvs_send_ping(rvs_conn* conn) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr);
    conn->conn.send_ping();
    return RVS_OK;
  });
}

int rvs_close(rvs_conn* conn, uint64_t error_code, const uint8_t* reason, size_t len) {
  return guarded([&] {
    RVS_REQUIRE(conn != nullptr && (reason != nullptr || len == 0));
    conn->conn.close(error_code, {reason, len});
    return RVS_OK;
  });
}

int rvs_conn_is_closed(const rvs_conn* conn) { return conn != nullptr && conn->conn.is_closed(); }

int rvs_conn_peer_closed(const rvs_conn* conn, uint64_t* error_code) {
  if (conn == nullptr || !conn->conn.peer_closed()) return 0;
  if (error_code != nullptr) *error_code = conn->conn.peer_error_code();
  return 1;
}

int rvs_conn_all_acked(const rvs_conn* conn) { return conn != nullptr && conn->conn.all_acked(); }

int rvs_conn_has_pending_send(const rvs_conn* conn) {
  return conn != nullptr && conn->conn.has_pending_send();
}

size_t rvs_conn_in_flight(const rvs_conn* conn) {
  return conn == nullptr ? 0 : conn->conn.packets_in_flight();
}

int rvs_conn_metrics(const rvs_conn* conn, rvs_metrics* out) {
  if (conn == nullptr || out == nullptr) return fail(RVS_ERR_INVALID_ARGUMENT, "null argument");
  const auto& m = conn->conn.metrics();
  out->payload_bytes_copied = m.payload_bytes_copied;
  out->payload_bytes_zero_copy = m.payload_bytes_zero_copy;
  out->payload_bytes_stashed = m.payload_bytes_stashed;
  out->packets_in_order = m.packets_in_order;
  out->packets_out_of_order = m.packets_out_of_order;
  out->packets_spurious = m.packets_spurious;
  out->packets_control_only = m.packets_control_only;
  out->packets_duplicate = m.packets_duplicate;
  out->decrypt_failures = m.decrypt_failures;
  out->packets_sent = m.packets_sent;
  out->packets_received = m.packets_received;
  out->bytes_sent = m.bytes_sent;
  out->bytes_received = m.bytes_received;
  out->retransmissions = m.retransmissions;
  return RVS_OK;
}

int rvs_appbuf_new(size_t default_capacity, rvs_appbuf** out) {
  return guarded([&] {
    RVS_REQUIRE(out != nullptr);
    const size_t cap = default_capacity == 0 ? reverso::stream::kDefaultCapacity : default_capacity;
    *out = new rvs_appbuf{reverso::stream::AppRecvBufMap(cap)};
    return RVS_OK;
  });
}

void rvs_appbuf_free(rvs_appbuf* appbuf) { delete appbuf; }

size_t rvs_appbuf_streams(const rvs_appbuf* appbuf) {
  return appbuf == nullptr ? 0 : appbuf->map.size();
}

int rvs_run_transfer(rvs_mode mode, uint64_t transfer_size, uint32_t streams,
                     const rvs_pipe_config* pipe, rvs_transfer_report* out) {
  return guarded([&] {
    RVS_REQUIRE(out != nullptr);
    reverso::harness::PipeConfig cfg;
    if (pipe != nullptr) {
      cfg.seed = pipe->seed;
      cfg.reorder_prob = pipe->reorder_prob;
      cfg.reorder_depth = pipe->reorder_depth == 0 ? 3 : pipe->reorder_depth;
      cfg.loss_prob = pipe->loss_prob;
      cfg.duplicate_prob = pipe->duplicate_prob;
    }
    const auto r = reverso::harness::run_transfer(to_mode(mode), transfer_size, streams, cfg);
    out->mode = from_mode(r.mode);
    out->bytes_transferred = r.bytes_transferred;
    out->streams = r.streams;
    out->wall_time_s = r.wall_time_s;
    out->throughput_MBps = r.throughput_MBps;
    out->payload_bytes_copied = r.payload_bytes_copied;
    out->payload_bytes_zero_copy = r.payload_bytes_zero_copy;
    out->payload_bytes_stashed = r.payload_bytes_stashed;
    out->packets_in_order = r.packets_in_order;
    out->packets_out_of_order = r.packets_out_of_order;
    out->ordered_ratio = r.ordered_ratio;
    out->decrypt_failures = r.decrypt_failures;
    out->retransmissions = r.retransmissions;
    out->packets_sent = r.packets_sent;
    out->packets_delivered = r.packets_delivered;
    out->checksum = r.checksum;
    out->verified = r.verified ? 1 : 0;
    return RVS_OK;
  });
}

int rvs_bench_batch(rvs_mode mode, size_t packets, size_t datagram_size, size_t repetitions,
                    uint64_t seed, rvs_bench_result* out) {
  return guarded([&] {
    RVS_REQUIRE(out != nullptr);
    fill(reverso::harness::bench_batch(to_mode(mode), packets, datagram_size, repetitions, seed),
         out);
    return RVS_OK;
  });
}

int rvs_bench_compare(size_t packets, size_t datagram_size, size_t repetitions, uint64_t seed,
                      rvs_bench_result* baseline, rvs_bench_result* reverso) {
  return guarded([&] {
    RVS_REQUIRE(baseline != nullptr && reverso != nullptr);
    const auto c = reverso::harness::bench_compare(packets, datagram_size, repetitions, seed);
    fill(c.baseline, baseline);
    fill(c.reverso, reverso);
    return RVS_OK;
  });
}

int rvs_inspect(rvs_mode mode, rvs_role sender, const uint8_t* secret, size_t secret_len,
                const uint8_t* datagram, size_t len, uint64_t pn_reference,
                uint64_t offset_reference, char* out, size_t out_cap, size_t* needed,
                int* authenticated) {
  return guarded([&] {
    RVS_REQUIRE(secret != nullptr && datagram != nullptr);
    reverso::InspectOptions opts;
    opts.mode = to_mode(mode);
    opts.sender = to_role(sender);
    opts.pn_reference = pn_reference;
    opts.offset_reference = offset_reference;
    const auto r = reverso::inspect_datagram({secret, secret_len}, {datagram, len}, opts);
    if (needed != nullptr) *needed = r.text.size() + 1;
    if (authenticated != nullptr) *authenticated = r.authenticated ? 1 : 0;
    if (out == nullptr || out_cap < r.text.size() + 1) {
      return fail(RVS_ERR_BUFFER_TOO_SMALL, "output buffer too small");
    }
    std::memcpy(out, r.text.c_str(), r.text.size() + 1);
    return RVS_OK;
  });
}

}  // extern "C"

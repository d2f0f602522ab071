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

#include "reverso/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <random>
#include <stdexcept>

#include "reverso/endpoint.hpp"
#include "reverso/error.hpp"

namespace reverso::harness {

namespace {

using Clock = std::chrono::steady_clock;
using Datagram = std::vector<std::uint8_t>;

constexpr std::uint64_t kVirtualTimeLimitMs = 3'600'000;

double elapsed_ns(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::nano>(b - a).count();
}

// One direction of the simulated network.
class Pipe {
 public:
  Pipe(const PipeConfig& config, std::uint64_t direction)
      : config_(config), rng_(config.seed * 0x9e3779b97f4a7c15ULL + direction) {}

  void send(Datagram datagram, std::vector<Datagram>& ready) {
    std::vector<Datagram> released;
    for (auto it = held_.begin(); it != held_.end();) {
      if (--it->remaining == 0) {
        released.push_back(std::move(it->datagram));
        it = held_.erase(it);
      } else {
        ++it;
      }
    }
    const bool lost = uniform() < config_.loss_prob;
    const bool duplicated = uniform() < config_.duplicate_prob;
    if (!lost) {
      const int copies = duplicated ? 2 : 1;
      for (int i = 0; i < copies; ++i) {
        const bool hold = uniform() < config_.reorder_prob;
        const auto depth = static_cast<std::uint32_t>(rng_() % config_.reorder_depth) + 1;
        if (hold) {
          held_.push_back({datagram, depth});
        } else {
          ready.push_back(datagram);
        }
      }
    }
    for (auto& d : released) ready.push_back(std::move(d));
  }

  bool flush(std::vector<Datagram>& ready) {
    if (held_.empty()) return false;
    for (auto& h : held_) ready.push_back(std::move(h.datagram));
    held_.clear();
    return true;
  }

 private:
  struct Held {
    Datagram datagram;
    std::uint32_t remaining;
  };

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  PipeConfig config_;
  std::mt19937_64 rng_;
  std::vector<Held> held_;
};

double percentile(std::vector<double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const auto idx = static_cast<std::size_t>(p * static_cast<double>(sorted.size() - 1) + 0.5);
  return sorted[std::min(idx, sorted.size() - 1)];
}

struct Batch {
  WireMode mode;
  std::array<std::uint8_t, 32> secret;
  std::vector<Datagram> datagrams;
  std::uint64_t bytes = 0;
};

Batch make_batch(WireMode mode, std::size_t n_packets, std::size_t datagram_size,
                 std::uint64_t seed) {
  if (n_packets == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one packet");
  Batch batch{mode, transfer_secret(seed), {}, 0};
  ConnectionOptions options;
  options.max_datagram_size = datagram_size;
  options.window_packets = n_packets + 1;
  Connection client(mode, Role::kClient, batch.secret, options);
  const auto payload = stream_payload(seed, 1, n_packets * datagram_size);
  client.stream_send(1, payload, false);
  std::array<std::uint8_t, kMaxDatagramSize> buf{};
  for (std::size_t i = 0; i < n_packets; ++i) {
    const auto len = client.build_packet(buf);
    if (!len) throw Error(ErrorCode::kInvalidArgument, "sender stalled");
    batch.datagrams.emplace_back(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(*len));
    batch.bytes += *len;
  }
  return batch;
}

struct RepResult {
  double ns;
  Metrics metrics;
};

// The buffer map outlives repetitions the way it outlives packets on a
// long-lived connection; only connection state is rebuilt.
RepResult time_receive(const Batch& batch, stream::AppRecvBufMap& bufs) {
  Connection server(batch.mode, Role::kServer, batch.secret);
  if (auto* b = bufs.find(1)) b->reset();
  std::vector<Datagram> work = batch.datagrams;
  const auto t0 = Clock::now();
  // Event-loop order: drain every ready datagram, then service the stream.
  for (auto& d : work) server.recv(d, bufs);
  const auto view = server.stream_recv(1, bufs);
  server.stream_consumed(1, view.data.size(), bufs);
  const auto t1 = Clock::now();
  return {elapsed_ns(t0, t1), server.metrics()};
}

double time_noop(const Batch& batch) {
  std::vector<Datagram> work = batch.datagrams;
  volatile std::uint8_t sink = 0;
  const auto t0 = Clock::now();
  for (auto& d : work) sink = static_cast<std::uint8_t>(sink + d[0]);
  const auto t1 = Clock::now();
  return elapsed_ns(t0, t1);
}

BenchResult summarize(const Batch& batch, std::vector<double> samples, std::vector<double> noop,
                      const Metrics& m) {
  std::sort(samples.begin(), samples.end());
  std::sort(noop.begin(), noop.end());
  BenchResult r;
  r.mode = batch.mode;
  r.packets = batch.datagrams.size();
  r.bytes = batch.bytes;
  r.repetitions = samples.size();
  r.median_ns = percentile(samples, 0.5);
  r.p5_ns = percentile(samples, 0.05);
  r.p95_ns = percentile(samples, 0.95);
  r.throughput_MBps = r.median_ns > 0 ? static_cast<double>(r.bytes) / r.median_ns * 1e3 : 0.0;
  r.payload_bytes_copied = m.payload_bytes_copied;
  r.payload_bytes_zero_copy = m.payload_bytes_zero_copy;
  r.calibration_ns = percentile(noop, 0.5);
  return r;
}

constexpr std::size_t kWarmup = 20;

}  // namespace

void PipeConfig::validate() const {
  auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!ok(reorder_prob) || !ok(loss_prob) || !ok(duplicate_prob)) {
    throw Error(ErrorCode::kInvalidArgument, "probability outside [0,1]");
  }
  if (reorder_depth == 0) throw Error(ErrorCode::kInvalidArgument, "reorder depth must be >= 1");
}

bool same_outcome(const TransferReport& a, const TransferReport& b) noexcept {
  return a.mode == b.mode && a.bytes_transferred == b.bytes_transferred &&
         a.streams == b.streams && a.payload_bytes_copied == b.payload_bytes_copied &&
         a.payload_bytes_zero_copy == b.payload_bytes_zero_copy &&
         a.payload_bytes_stashed == b.payload_bytes_stashed &&
         a.packets_in_order == b.packets_in_order &&
         a.packets_out_of_order == b.packets_out_of_order && a.ordered_ratio == b.ordered_ratio &&
         a.decrypt_failures == b.decrypt_failures && a.retransmissions == b.retransmissions &&
         a.packets_sent == b.packets_sent && a.packets_delivered == b.packets_delivered &&
         a.checksum == b.checksum && a.verified == b.verified;
}

std::array<std::uint8_t, 32> transfer_secret(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5265766572736f00ULL);
  std::array<std::uint8_t, 32> secret{};
  for (std::size_t i = 0; i < secret.size(); i += 8) {
    const std::uint64_t v = rng();
    std::memcpy(secret.data() + i, &v, 8);
  }
  return secret;
}

std::vector<std::uint8_t> stream_payload(std::uint64_t seed, std::uint64_t stream_id,
                                         std::size_t size) {
  std::mt19937_64 rng(seed * 0x100000001b3ULL + stream_id);
  std::vector<std::uint8_t> out(size);
  std::size_t i = 0;
  for (; i + 8 <= size; i += 8) {
    const std::uint64_t v = rng();
    std::memcpy(out.data() + i, &v, 8);
  }
  if (i < size) {
    const std::uint64_t v = rng();
    std::memcpy(out.data() + i, &v, size - i);
  }
  return out;
}

std::uint64_t fnv1a(std::span<const std::uint8_t> data, std::uint64_t state) noexcept {
  for (const auto b : data) {
    state ^= b;
    state *= 0x100000001b3ULL;
  }
  return state;
}

TransferReport run_transfer(WireMode mode, std::uint64_t transfer_size, std::uint32_t n_streams,
                            const PipeConfig& pipe, const DatagramObserver& observer) {
  pipe.validate();
  if (n_streams == 0 || n_streams >= kStreamIdLimit) {
    throw Error(ErrorCode::kInvalidArgument, "stream count out of range");
  }
  const auto secret = transfer_secret(pipe.seed);
  Connection client(mode, Role::kClient, secret);
  Connection server(mode, Role::kServer, secret);
  stream::AppRecvBufMap client_bufs;
  stream::AppRecvBufMap server_bufs;

  std::vector<std::vector<std::uint8_t>> expected(n_streams);
  std::vector<std::uint64_t> consumed(n_streams, 0);
  std::vector<std::uint64_t> digests(n_streams, 0xcbf29ce484222325ULL);
  std::vector<bool> finished(n_streams, false);
  for (std::uint32_t i = 0; i < n_streams; ++i) {
    std::uint64_t share = transfer_size / n_streams;
    if (i == 0) share += transfer_size % n_streams;
    expected[i] = stream_payload(pipe.seed, i + 1, static_cast<std::size_t>(share));
    client.stream_send(i + 1, expected[i], true);
  }

  bool verified = true;
  std::uint64_t delivered = 0;
  auto drain = [&] {
    for (const auto sid : server.readable()) {
      const auto view = server.stream_recv(sid, server_bufs);
      const std::size_t idx = static_cast<std::size_t>(sid - 1);
      if (idx >= n_streams || consumed[idx] + view.data.size() > expected[idx].size() ||
          std::memcmp(view.data.data(), expected[idx].data() + consumed[idx],
                      view.data.size()) != 0) {
        verified = false;
      }
      if (idx < n_streams) {
        digests[idx] = fnv1a(view.data, digests[idx]);
        consumed[idx] += view.data.size();
        if (view.fin) finished[idx] = true;
      }
      server.stream_consumed(sid, view.data.size(), server_bufs);
    }
  };
  auto complete = [&] {
    for (std::uint32_t i = 0; i < n_streams; ++i) {
      if (!finished[i] || consumed[i] != expected[i].size()) return false;
    }
    return true;
  };

  Pipe c2s(pipe, 1);
  Pipe s2c(pipe, 2);
  std::vector<Datagram> to_server;
  std::vector<Datagram> to_client;
  auto deliver = [&] {
    for (auto& d : to_server) {
      if (observer) observer(d);
      server.recv(d, server_bufs);
      ++delivered;
      drain();
    }
    to_server.clear();
    for (auto& d : to_client) client.recv(d, client_bufs);
    to_client.clear();
  };

  std::array<std::uint8_t, kMaxDatagramSize> buf{};
  std::uint64_t now = 0;
  const auto start = Clock::now();
  while (!complete()) {
    bool activity = false;
    while (const auto len = client.build_packet(buf, now)) {
      activity = true;
      c2s.send(Datagram(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(*len)), to_server);
      deliver();
    }
    if (complete()) break;
    while (const auto len = server.build_packet(buf, now)) {
      activity = true;
      s2c.send(Datagram(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(*len)), to_client);
      deliver();
    }
    if (activity) continue;
    const bool a = c2s.flush(to_server);
    const bool b = s2c.flush(to_client);
    deliver();
    if (a || b) continue;
    now += ConnectionOptions{}.rto_ms;
    if (now > kVirtualTimeLimitMs) throw std::runtime_error("transfer stalled");
    client.on_timeout(now);
    server.on_timeout(now);
  }
  const auto stop = Clock::now();

  const Metrics& m = server.metrics();
  TransferReport r;
  r.mode = mode;
  r.bytes_transferred = transfer_size;
  r.streams = n_streams;
  r.wall_time_s = elapsed_ns(start, stop) * 1e-9;
  r.throughput_MBps = r.wall_time_s > 0 ? static_cast<double>(transfer_size) / r.wall_time_s * 1e-6 : 0.0;
  r.payload_bytes_copied = m.payload_bytes_copied;
  r.payload_bytes_zero_copy = m.payload_bytes_zero_copy;
  r.payload_bytes_stashed = m.payload_bytes_stashed;
  r.packets_in_order = m.packets_in_order;
  r.packets_out_of_order = m.packets_out_of_order;
  const std::uint64_t data_packets = m.packets_in_order + m.packets_out_of_order;
  r.ordered_ratio = data_packets == 0 ? 1.0
                                      : static_cast<double>(m.packets_in_order) /
                                            static_cast<double>(data_packets);
  r.decrypt_failures = m.decrypt_failures;
  r.retransmissions = client.metrics().retransmissions;
  r.packets_sent = client.metrics().packets_sent;
  r.packets_delivered = delivered;
  std::vector<std::uint8_t> digest_bytes(digests.size() * 8);
  std::memcpy(digest_bytes.data(), digests.data(), digest_bytes.size());
  r.checksum = fnv1a(digest_bytes);
  r.verified = verified;
  return r;
}

BenchResult bench_batch(WireMode mode, std::size_t n_packets, std::size_t datagram_size,
                        std::size_t repetitions, std::uint64_t seed) {
  if (repetitions == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one repetition");
  const Batch batch = make_batch(mode, n_packets, datagram_size, seed);
  stream::AppRecvBufMap bufs;
  for (std::size_t i = 0; i < kWarmup; ++i) time_receive(batch, bufs);
  std::vector<double> samples;
  std::vector<double> noop;
  Metrics last;
  for (std::size_t i = 0; i < repetitions; ++i) {
    const auto rep = time_receive(batch, bufs);
    samples.push_back(rep.ns);
    last = rep.metrics;
    noop.push_back(time_noop(batch));
  }
  return summarize(batch, std::move(samples), std::move(noop), last);
}

BenchComparison bench_compare(std::size_t n_packets, std::size_t datagram_size,
                              std::size_t repetitions, std::uint64_t seed) {
  if (repetitions == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one repetition");
  const Batch batches[2] = {make_batch(WireMode::kBaseline, n_packets, datagram_size, seed),
                            make_batch(WireMode::kReverso, n_packets, datagram_size, seed)};
  stream::AppRecvBufMap bufs[2];
  for (std::size_t i = 0; i < kWarmup; ++i) {
    time_receive(batches[0], bufs[0]);
    time_receive(batches[1], bufs[1]);
  }
  std::vector<double> samples[2];
  std::vector<double> noop[2];
  Metrics last[2];
  for (std::size_t i = 0; i < repetitions; ++i) {
    // Alternate which mode goes first so neither always runs on a warmer cache.
    for (std::size_t k = 0; k < 2; ++k) {
      const std::size_t m = (i + k) % 2;
      const auto rep = time_receive(batches[m], bufs[m]);
      samples[m].push_back(rep.ns);
      last[m] = rep.metrics;
    }
    noop[i % 2].push_back(time_noop(batches[i % 2]));
  }
  for (auto& v : noop) {
    if (v.empty()) v.push_back(0.0);
  }
  BenchComparison out;
  out.baseline = summarize(batches[0], std::move(samples[0]), std::move(noop[0]), last[0]);
  out.reverso = summarize(batches[1], std::move(samples[1]), std::move(noop[1]), last[1]);
  return out;
}

std::vector<std::uint64_t> default_sweep_lengths() {
  return {1350, 13500, 67500, 135000, 212950};
}

SweepPoint sweep_point(std::uint64_t length, std::size_t repetitions, std::uint64_t seed) {
  SweepPoint p;
  p.length = length;
  p.packets = std::max<std::size_t>(1, static_cast<std::size_t>(length / kMaxDatagramSize));
  p.result = bench_compare(p.packets, kMaxDatagramSize, repetitions, seed);
  return p;
}

std::vector<SweepPoint> sweep_buffered_lengths(std::span<const std::uint64_t> lengths,
                                               std::size_t repetitions, std::uint64_t seed) {
  std::vector<SweepPoint> out;
  for (const auto len : lengths) out.push_back(sweep_point(len, repetitions, seed));
  return out;
}

}  // namespace reverso::harness

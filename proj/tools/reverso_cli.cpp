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

// Command-line front end over the C interface.

#include <arpa/inet.h>
#include <netdb.h>
#include <openssl/evp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csv_report.hpp"
#include "reverso/reverso.h"

namespace {

constexpr std::uint64_t kTransferStream = 1;
constexpr std::size_t kDigestLen = 32;

const char* mode_str(rvs_mode m) { return m == RVS_MODE_BASELINE ? "baseline" : "reverso"; }

struct Failure {
  std::string message;
};

void check(int rc, const char* what) {
  if (rc < 0) throw Failure{std::string(what) + ": " + rvs_strerror(rc) + " (" + rvs_last_error() + ")"};
}

std::vector<std::uint8_t> parse_hex(const std::string& text) {
  std::string digits;
  for (const char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) digits += c;
  }
  if (digits.size() % 2 != 0) throw Failure{"hex input has odd length"};
  std::vector<std::uint8_t> out(digits.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    unsigned v = 0;
    if (std::sscanf(digits.c_str() + 2 * i, "%2x", &v) != 1 ||
        !std::isxdigit(static_cast<unsigned char>(digits[2 * i])) ||
        !std::isxdigit(static_cast<unsigned char>(digits[2 * i + 1]))) {
      throw Failure{"invalid hex digit"};
    }
    out[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

std::vector<std::uint8_t> parse_secret(const std::string& hex) {
  auto s = parse_hex(hex);
  if (s.size() != RVS_SECRET_LEN) throw Failure{"secret must be 64 hex digits"};
  return s;
}

std::uint64_t now_ms(std::chrono::steady_clock::time_point start) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - start)
                                        .count());
}

sockaddr_storage resolve(const std::string& host_port, socklen_t* len) {
  const auto colon = host_port.rfind(':');
  if (colon == std::string::npos) throw Failure{"expected HOST:PORT, got " + host_port};
  std::string host = host_port.substr(0, colon);
  const std::string port = host_port.substr(colon + 1);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_DGRAM;
  addrinfo* res = nullptr;
  if (getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0 || res == nullptr) {
    throw Failure{"cannot resolve " + host_port};
  }
  sockaddr_storage addr{};
  std::memcpy(&addr, res->ai_addr, res->ai_addrlen);
  *len = static_cast<socklen_t>(res->ai_addrlen);
  freeaddrinfo(res);
  return addr;
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw Failure{"sha256 init"};
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;
  void update(const std::uint8_t* p, std::size_t n) { EVP_DigestUpdate(ctx_, p, n); }
  std::vector<std::uint8_t> finish() {
    std::vector<std::uint8_t> out(kDigestLen);
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx_, out.data(), &len);
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

// RAII owners for the C handles.
struct Conn {
  rvs_conn* p = nullptr;
  ~Conn() { rvs_conn_free(p); }
};
struct AppBuf {
  rvs_appbuf* p = nullptr;
  ~AppBuf() { rvs_appbuf_free(p); }
};
struct Socket {
  int fd = -1;
  ~Socket() {
    if (fd >= 0) ::close(fd);
  }
};

void print_transfer_row(rvs_mode mode, std::uint64_t bytes, double seconds, const rvs_metrics& m,
                        std::uint64_t checksum, bool verified) {
  reverso::csv::SimulateRow row;
  row.mode = mode_str(mode);
  row.bytes_transferred = bytes;
  row.streams = 1;
  row.wall_time_s = seconds;
  row.throughput_MBps = seconds > 0 ? static_cast<double>(bytes) / seconds * 1e-6 : 0.0;
  row.payload_bytes_copied = m.payload_bytes_copied;
  row.payload_bytes_zero_copy = m.payload_bytes_zero_copy;
  row.payload_bytes_stashed = m.payload_bytes_stashed;
  row.packets_in_order = m.packets_in_order;
  row.packets_out_of_order = m.packets_out_of_order;
  const auto data = m.packets_in_order + m.packets_out_of_order;
  row.ordered_ratio = data == 0 ? 1.0 : static_cast<double>(m.packets_in_order) / static_cast<double>(data);
  row.decrypt_failures = m.decrypt_failures;
  row.retransmissions = m.retransmissions;
  row.packets_sent = m.packets_sent;
  row.packets_delivered = m.packets_received;
  row.checksum = checksum;
  row.verified = verified;
  std::printf("%s\n%s\n", reverso::csv::kSimulateHeader, reverso::csv::format(row).c_str());
}

std::uint64_t digest_prefix(const std::vector<std::uint8_t>& digest) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | digest[i];
  return v;
}

// ---- bench ----

struct BenchArgs {
  std::string mode = "both";
  std::size_t packets = 10;
  std::size_t reps = 1000;
  bool sweep = false;
  std::uint64_t seed = 1;
  bool header = true;
};

reverso::csv::BenchRow bench_row(const rvs_bench_result& r, const std::string& scenario,
                                 double baseline_median) {
  reverso::csv::BenchRow row;
  row.mode = mode_str(r.mode);
  row.scenario = scenario;
  row.bytes = r.bytes;
  row.median_ns = r.median_ns;
  row.p5_ns = r.p5_ns;
  row.p95_ns = r.p95_ns;
  row.throughput_MBps = r.throughput_MBps;
  row.copied_bytes = r.payload_bytes_copied;
  row.zero_copy_bytes = r.payload_bytes_zero_copy;
  row.improvement = baseline_median > 0 && r.median_ns > 0 ? baseline_median / r.median_ns - 1.0 : 0.0;
  return row;
}

void run_bench_point(const BenchArgs& a, std::size_t packets, const std::string& scenario) {
  if (a.mode == "both") {
    rvs_bench_result base{};
    rvs_bench_result rev{};
    check(rvs_bench_compare(packets, RVS_MAX_DATAGRAM_SIZE, a.reps, a.seed, &base, &rev), "bench");
    std::printf("%s\n", reverso::csv::format(bench_row(base, scenario, base.median_ns)).c_str());
    std::printf("%s\n", reverso::csv::format(bench_row(rev, scenario, base.median_ns)).c_str());
  } else {
    const rvs_mode m = a.mode == "baseline" ? RVS_MODE_BASELINE : RVS_MODE_REVERSO;
    rvs_bench_result r{};
    check(rvs_bench_batch(m, packets, RVS_MAX_DATAGRAM_SIZE, a.reps, a.seed, &r), "bench");
    std::printf("%s\n", reverso::csv::format(bench_row(r, scenario, 0.0)).c_str());
  }
  std::fflush(stdout);
}

int cmd_bench(const BenchArgs& a) {
  if (a.header) std::printf("%s\n", reverso::csv::kBenchHeader);
  if (a.sweep) {
    for (const std::uint64_t len : {1350ULL, 13500ULL, 67500ULL, 135000ULL, 212950ULL}) {
      const std::size_t packets = std::max<std::size_t>(1, len / RVS_MAX_DATAGRAM_SIZE);
      run_bench_point(a, packets, "buffered_" + std::to_string(len));
    }
  } else {
    run_bench_point(a, a.packets, "batch_" + std::to_string(a.packets));
  }
  return 0;
}

// ---- simulate ----

struct SimulateArgs {
  std::string mode = "reverso";
  std::uint64_t size = 10485760;
  std::uint32_t streams = 1;
  double reorder = 0;
  std::uint32_t depth = 3;
  double loss = 0;
  double dup = 0;
  std::uint64_t seed = 1;
  bool header = true;
};

int cmd_simulate(const SimulateArgs& a) {
  rvs_pipe_config pipe{a.seed, a.reorder, a.depth, a.loss, a.dup};
  std::vector<rvs_mode> modes;
  if (a.mode == "both" || a.mode == "baseline") modes.push_back(RVS_MODE_BASELINE);
  if (a.mode == "both" || a.mode == "reverso") modes.push_back(RVS_MODE_REVERSO);
  if (a.header) std::printf("%s\n", reverso::csv::kSimulateHeader);
  bool ok = true;
  for (const auto m : modes) {
    rvs_transfer_report r{};
    check(rvs_run_transfer(m, a.size, a.streams, &pipe, &r), "simulate");
    reverso::csv::SimulateRow row;
    row.mode = mode_str(r.mode);
    row.bytes_transferred = r.bytes_transferred;
    row.streams = r.streams;
    row.seed = a.seed;
    row.reorder_prob = a.reorder;
    row.reorder_depth = a.depth;
    row.loss_prob = a.loss;
    row.duplicate_prob = a.dup;
    row.wall_time_s = r.wall_time_s;
    row.throughput_MBps = r.throughput_MBps;
    row.payload_bytes_copied = r.payload_bytes_copied;
    row.payload_bytes_zero_copy = r.payload_bytes_zero_copy;
    row.payload_bytes_stashed = r.payload_bytes_stashed;
    row.packets_in_order = r.packets_in_order;
    row.packets_out_of_order = r.packets_out_of_order;
    row.ordered_ratio = r.ordered_ratio;
    row.decrypt_failures = r.decrypt_failures;
    row.retransmissions = r.retransmissions;
    row.packets_sent = r.packets_sent;
    row.packets_delivered = r.packets_delivered;
    row.checksum = r.checksum;
    row.verified = r.verified != 0;
    ok = ok && row.verified;
    std::printf("%s\n", reverso::csv::format(row).c_str());
  }
  return ok ? 0 : 1;
}

// ---- transfer ----

struct TransferArgs {
  std::string mode = "reverso";
  std::string peer;
  std::string listen;
  std::string file;
  std::string out;
  std::string secret;
  double timeout_s = 10.0;
};

int cmd_send(const TransferArgs& a) {
  const rvs_mode mode = a.mode == "baseline" ? RVS_MODE_BASELINE : RVS_MODE_REVERSO;
  const auto secret = parse_secret(a.secret);
  std::ifstream in(a.file, std::ios::binary);
  if (!in) throw Failure{"cannot open " + a.file};
  std::vector<std::uint8_t> payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::uint64_t file_size = payload.size();
  Sha256 sha;
  sha.update(payload.data(), payload.size());
  const auto digest = sha.finish();
  payload.insert(payload.end(), digest.begin(), digest.end());

  Conn conn;
  AppBuf appbuf;
  check(rvs_conn_new(mode, RVS_ROLE_CLIENT, secret.data(), secret.size(), nullptr, &conn.p), "connect");
  check(rvs_appbuf_new(0, &appbuf.p), "appbuf");
  check(rvs_stream_send(conn.p, kTransferStream, payload.data(), payload.size(), 1, nullptr), "send");

  socklen_t addr_len = 0;
  const auto addr = resolve(a.peer, &addr_len);
  Socket sock;
  sock.fd = ::socket(addr.ss_family, SOCK_DGRAM, 0);
  if (sock.fd < 0 || ::connect(sock.fd, reinterpret_cast<const sockaddr*>(&addr), addr_len) != 0) {
    throw Failure{"cannot connect to " + a.peer};
  }

  const auto start = std::chrono::steady_clock::now();
  std::uint64_t last_progress = 0;
  std::uint64_t last_received = 0;
  std::uint8_t buf[RVS_MAX_DATAGRAM_SIZE];
  std::uint8_t rx[2048];
  while (true) {
    const std::uint64_t t = now_ms(start);
    size_t n = 0;
    while (rvs_build_packet(conn.p, buf, sizeof buf, t, &n) == RVS_OK) {
      if (::send(sock.fd, buf, n, 0) < 0 && errno != ECONNREFUSED) {
        pollfd w{sock.fd, POLLOUT, 0};
        ::poll(&w, 1, 5);
      }
    }
    if (rvs_conn_all_acked(conn.p) || rvs_conn_peer_closed(conn.p, nullptr)) break;
    pollfd p{sock.fd, POLLIN, 0};
    ::poll(&p, 1, 5);
    while (true) {
      const ssize_t got = ::recv(sock.fd, rx, sizeof rx, MSG_DONTWAIT);
      if (got <= 0) break;
      const int rc = rvs_recv(conn.p, rx, static_cast<size_t>(got), appbuf.p);
      if (rc < 0) std::fprintf(stderr, "recv: %s\n", rvs_last_error());
    }
    rvs_metrics m{};
    rvs_conn_metrics(conn.p, &m);
    if (m.packets_received != last_received) {
      last_received = m.packets_received;
      last_progress = now_ms(start);
    }
    check(rvs_on_timeout(conn.p, now_ms(start)), "timeout");
    if (static_cast<double>(now_ms(start) - last_progress) > a.timeout_s * 1e3) {
      throw Failure{"no response from peer"};
    }
  }
  const double seconds = static_cast<double>(now_ms(start)) * 1e-3;
  rvs_metrics m{};
  rvs_conn_metrics(conn.p, &m);
  print_transfer_row(mode, file_size, seconds, m, digest_prefix(digest), true);
  return 0;
}

int cmd_recv(const TransferArgs& a) {
  const rvs_mode mode = a.mode == "baseline" ? RVS_MODE_BASELINE : RVS_MODE_REVERSO;
  const auto secret = parse_secret(a.secret);
  Conn conn;
  AppBuf appbuf;
  check(rvs_conn_new(mode, RVS_ROLE_SERVER, secret.data(), secret.size(), nullptr, &conn.p), "connect");
  check(rvs_appbuf_new(0, &appbuf.p), "appbuf");

  socklen_t addr_len = 0;
  const auto addr = resolve(a.listen, &addr_len);
  Socket sock;
  sock.fd = ::socket(addr.ss_family, SOCK_DGRAM, 0);
  if (sock.fd < 0 || ::bind(sock.fd, reinterpret_cast<const sockaddr*>(&addr), addr_len) != 0) {
    throw Failure{"cannot bind " + a.listen};
  }
  std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{"cannot create " + a.out};

  Sha256 sha;
  std::vector<std::uint8_t> tail;  // last bytes seen; the final 32 are the digest
  std::uint64_t written = 0;
  bool finished = false;
  bool verified = false;
  sockaddr_storage peer{};
  socklen_t peer_len = 0;
  std::uint8_t rx[2048];
  std::uint8_t buf[RVS_MAX_DATAGRAM_SIZE];
  auto start = std::chrono::steady_clock::now();
  bool started = false;
  std::uint64_t last_rx = 0;

  auto emit = [&](const std::uint8_t* p, std::size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
    sha.update(p, n);
    written += n;
  };

  while (true) {
    pollfd pfd{sock.fd, POLLIN, 0};
    ::poll(&pfd, 1, 5);
    while (true) {
      sockaddr_storage from{};
      socklen_t from_len = sizeof from;
      const ssize_t got = ::recvfrom(sock.fd, rx, sizeof rx, MSG_DONTWAIT,
                                     reinterpret_cast<sockaddr*>(&from), &from_len);
      if (got <= 0) break;
      if (!started) {
        start = std::chrono::steady_clock::now();
        started = true;
      }
      peer = from;
      peer_len = from_len;
      last_rx = now_ms(start);
      const int rc = rvs_recv(conn.p, rx, static_cast<size_t>(got), appbuf.p);
      if (rc < 0) std::fprintf(stderr, "recv: %s\n", rvs_last_error());
    }

    uint64_t ids[16];
    const size_t count = rvs_readable(conn.p, ids, 16);
    for (size_t i = 0; i < count && i < 16; ++i) {
      const std::uint8_t* data = nullptr;
      size_t len = 0;
      int fin = 0;
      check(rvs_stream_recv(conn.p, ids[i], appbuf.p, &data, &len, &fin), "stream_recv");
      if (ids[i] == kTransferStream && !finished) {
        if (len >= kDigestLen) {
          emit(tail.data(), tail.size());
          emit(data, len - kDigestLen);
          tail.assign(data + len - kDigestLen, data + len);
        } else {
          tail.insert(tail.end(), data, data + len);
          if (tail.size() > kDigestLen) {
            const std::size_t extra = tail.size() - kDigestLen;
            emit(tail.data(), extra);
            tail.erase(tail.begin(), tail.begin() + static_cast<std::ptrdiff_t>(extra));
          }
        }
      }
      check(rvs_stream_consumed(conn.p, ids[i], len, appbuf.p), "stream_consumed");
      if (ids[i] == kTransferStream && fin && !finished) {
        finished = true;
        verified = tail.size() == kDigestLen && sha.finish() == tail;
        out.flush();
        check(rvs_close(conn.p, verified ? 0 : 1, nullptr, 0), "close");
      }
    }

    if (peer_len != 0) {
      size_t n = 0;
      while (rvs_build_packet(conn.p, buf, sizeof buf, now_ms(start), &n) == RVS_OK) {
        ::sendto(sock.fd, buf, n, 0, reinterpret_cast<const sockaddr*>(&peer), peer_len);
      }
    }
    if (finished && rvs_conn_is_closed(conn.p)) break;
    check(rvs_on_timeout(conn.p, now_ms(start)), "timeout");
    const double idle_ms = static_cast<double>(now_ms(start) - last_rx);
    if (started && idle_ms > a.timeout_s * 1e3) throw Failure{"peer went silent"};
    if (!started && static_cast<double>(now_ms(start)) > a.timeout_s * 1e3 * 3) {
      throw Failure{"no datagrams received"};
    }
  }
  const double seconds = static_cast<double>(now_ms(start)) * 1e-3;
  rvs_metrics m{};
  rvs_conn_metrics(conn.p, &m);
  std::uint64_t prefix = 0;
  for (std::size_t i = 0; i < 8 && i < tail.size(); ++i) prefix = (prefix << 8) | tail[i];
  print_transfer_row(mode, written, seconds, m, prefix, verified);
  if (!verified) {
    std::fprintf(stderr, "checksum mismatch\n");
    return 1;
  }
  return 0;
}

// ---- inspect ----

struct InspectArgs {
  std::string hex;
  std::string mode = "reverso";
  std::string secret;
  std::string from = "client";
  std::uint64_t pn_ref = 0;
  std::uint64_t offset_ref = 0;
};

int cmd_inspect(const InspectArgs& a) {
  const rvs_mode mode = a.mode == "baseline" ? RVS_MODE_BASELINE : RVS_MODE_REVERSO;
  const rvs_role from = a.from == "server" ? RVS_ROLE_SERVER : RVS_ROLE_CLIENT;
  const auto secret = parse_secret(a.secret);
  const auto datagram = parse_hex(a.hex);
  size_t needed = 0;
  int authenticated = 0;
  int rc = rvs_inspect(mode, from, secret.data(), secret.size(), datagram.data(), datagram.size(),
                       a.pn_ref, a.offset_ref, nullptr, 0, &needed, &authenticated);
  if (rc != RVS_ERR_BUFFER_TOO_SMALL) check(rc, "inspect");
  std::string text(needed, '\0');
  check(rvs_inspect(mode, from, secret.data(), secret.size(), datagram.data(), datagram.size(),
                    a.pn_ref, a.offset_ref, text.data(), text.size(), &needed, &authenticated),
        "inspect");
  std::fputs(text.c_str(), stdout);
  return authenticated ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reverso: zero-copy receive transport experiments"};
  app.require_subcommand(1);
  const std::vector<std::string> modes = {"baseline", "reverso"};
  const std::vector<std::string> modes_both = {"baseline", "reverso", "both"};

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "time the receive loop over in-order datagrams (CSV)");
  b->add_option("--mode", bench.mode, "baseline, reverso or both")->check(CLI::IsMember(modes_both));
  b->add_option("--packets", bench.packets, "datagrams per timed batch")->check(CLI::Range(1, 1 << 20));
  b->add_option("--reps", bench.reps, "timed repetitions")->check(CLI::Range(1, 1 << 24));
  b->add_flag("--sweep", bench.sweep, "sweep buffered lengths from 1350 to 212950 bytes");
  b->add_option("--seed", bench.seed, "payload seed");
  b->add_flag("!--no-header", bench.header, "omit the CSV header line");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "transfer through the simulated pipe (CSV)");
  s->add_option("--mode", sim.mode, "baseline, reverso or both")->check(CLI::IsMember(modes_both));
  s->add_option("--size", sim.size, "bytes to transfer");
  s->add_option("--streams", sim.streams, "number of streams")->check(CLI::Range(1, 1 << 20));
  s->add_option("--reorder", sim.reorder, "per-packet reorder probability")->check(CLI::Range(0.0, 1.0));
  s->add_option("--depth", sim.depth, "maximum reorder displacement")->check(CLI::Range(1, 1 << 16));
  s->add_option("--loss", sim.loss, "per-packet loss probability")->check(CLI::Range(0.0, 1.0));
  s->add_option("--dup", sim.dup, "per-packet duplication probability")->check(CLI::Range(0.0, 1.0));
  s->add_option("--seed", sim.seed, "pipe seed");
  s->add_flag("!--no-header", sim.header, "omit the CSV header line");

  TransferArgs tx;
  auto* t = app.add_subcommand("transfer", "UDP file transfer; secrets on the command line are for demos only");
  t->require_subcommand(1);
  t->add_option("--mode", tx.mode, "baseline or reverso")->check(CLI::IsMember(modes));
  t->add_option("--timeout", tx.timeout_s, "seconds without progress before giving up");
  auto* ts = t->add_subcommand("send", "send a file");
  ts->add_option("--peer", tx.peer, "HOST:PORT")->required();
  ts->add_option("--file", tx.file, "file to send")->required()->check(CLI::ExistingFile);
  ts->add_option("--secret", tx.secret, "64 hex digits")->required();
  ts->add_option("--mode", tx.mode, "baseline or reverso")->check(CLI::IsMember(modes));
  auto* tr = t->add_subcommand("recv", "receive a file");
  tr->add_option("--listen", tx.listen, "HOST:PORT")->required();
  tr->add_option("--out", tx.out, "output path")->required();
  tr->add_option("--secret", tx.secret, "64 hex digits")->required();
  tr->add_option("--mode", tx.mode, "baseline or reverso")->check(CLI::IsMember(modes));

  InspectArgs insp;
  auto* i = app.add_subcommand("inspect", "decode a datagram");
  i->add_option("--hex", insp.hex, "datagram bytes in hex")->required();
  i->add_option("--mode", insp.mode, "baseline or reverso")->check(CLI::IsMember(modes));
  i->add_option("--secret", insp.secret, "64 hex digits")->required();
  i->add_option("--pn-ref", insp.pn_ref, "largest packet number received so far");
  i->add_option("--offset-ref", insp.offset_ref, "stream contiguous offset");
  i->add_option("--from", insp.from, "sender role: client or server")
      ->check(CLI::IsMember(std::vector<std::string>{"client", "server"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*b) return cmd_bench(bench);
    if (*s) return cmd_simulate(sim);
    if (*ts) return cmd_send(tx);
    if (*tr) return cmd_recv(tx);
    if (*i) return cmd_inspect(insp);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return 1;
  }
  return 2;
}

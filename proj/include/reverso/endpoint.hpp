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

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "reverso/crypto.hpp"
#include "reverso/header.hpp"
#include "reverso/stream_buf.hpp"
#include "reverso/types.hpp"
#include "reverso/wire.hpp"

namespace reverso {

namespace detail {
class IntervalSet;
}

enum class Role : std::uint8_t { kClient = 0, kServer = 1 };

/// Receive-path copy accounting. All counters are monotone.
struct Metrics {
  // Bytes memcpy'd into application stream storage: Baseline reassembly,
  // stash drains, copy-path deliveries and storage relocations.
  std::uint64_t payload_bytes_copied = 0;
  // Bytes written into stream storage directly by the AEAD primitive.
  std::uint64_t payload_bytes_zero_copy = 0;
  // Bytes copied into the out-of-order stash.
  std::uint64_t payload_bytes_stashed = 0;
  std::uint64_t packets_in_order = 0;
  std::uint64_t packets_out_of_order = 0;
  std::uint64_t packets_spurious = 0;
  std::uint64_t packets_control_only = 0;
  std::uint64_t packets_duplicate = 0;
  std::uint64_t decrypt_failures = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t retransmissions = 0;
};

struct ConnectionOptions {
  std::uint64_t rto_ms = 100;
  std::size_t window_packets = 64;
  // Advertise MaxStreamData each time this many bytes are consumed.
  std::uint64_t max_stream_data_step = std::uint64_t{4} << 20;
  // Upper bound on built datagrams, at most kMaxDatagramSize.
  std::size_t max_datagram_size = kMaxDatagramSize;
};

struct StreamView {
  std::span<const std::uint8_t> data;
  bool fin = false;
};

/// One endpoint of a connection using a pre-shared 32-byte secret.
///
/// The receive pipeline is
///   unprotect header -> choose destination -> AEAD open -> parse -> commit.
/// In Reverso mode an in-order packet is opened straight into the stream's
/// application buffer; anything else is opened in place in the datagram.
/// Failed authentication is silent: the packet is dropped, a counter moves,
/// and nothing is queued for sending.
///
/// Single-owner: move between threads freely, never share concurrently.
class Connection {
 public:
  Connection(WireMode mode, Role role, std::span<const std::uint8_t> shared_secret,
             ConnectionOptions options = {});
  ~Connection();
  Connection(Connection&&) noexcept;
  Connection& operator=(Connection&&) noexcept;

  WireMode mode() const noexcept { return mode_; }
  Role role() const noexcept { return role_; }

  /// Queues data for a stream; returns the number of bytes queued.
  std::size_t stream_send(std::uint64_t stream_id, std::span<const std::uint8_t> data,
                          bool fin);

  /// Builds one datagram, or nullopt when there is nothing to send.
  std::optional<std::size_t> build_packet(std::span<std::uint8_t> out,
                                          std::uint64_t now_ms = 0);

  /// Processes one datagram. The buffer is modified (header unprotection,
  /// in-place decryption). Returns the number of bytes processed.
  std::size_t recv(std::span<std::uint8_t> datagram, stream::AppRecvBufMap& appbuf);

  std::vector<std::uint64_t> readable() const;
  StreamView stream_recv(std::uint64_t stream_id, stream::AppRecvBufMap& appbuf);
  void stream_consumed(std::uint64_t stream_id, std::size_t n,
                       stream::AppRecvBufMap& appbuf);

  /// Declares packets unacknowledged for longer than the RTO lost and queues
  /// their stream ranges for retransmission.
  void on_timeout(std::uint64_t now_ms);

  void send_ping();
  void close(std::uint64_t error_code, std::span<const std::uint8_t> reason = {});

  bool is_closed() const noexcept { return close_sent_ || peer_closed_; }
  bool peer_closed() const noexcept { return peer_closed_; }
  std::uint64_t peer_error_code() const noexcept { return peer_error_code_; }

  std::size_t packets_in_flight() const noexcept { return unacked_.size(); }
  /// True when every queued byte (and fin) of every stream has been acked.
  bool all_acked() const;
  bool has_pending_send() const;
  std::optional<std::uint64_t> peer_max_stream_data(std::uint64_t stream_id) const;

  const Metrics& metrics() const noexcept { return metrics_; }

 private:
  struct SendStream;
  struct Range {
    std::uint64_t stream_id = 0;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
    bool fin = false;
  };
  struct SentPacket {
    std::uint64_t sent_ms = 0;
    std::optional<Range> range;
    std::vector<wire::MaxStreamDataFrame> max_stream_data;
  };

  std::optional<Range> next_stream_range(std::size_t room_hint);
  wire::AckFrame make_ack() const;
  void on_ack(const wire::AckFrame& ack);
  void mark_readable(std::uint64_t stream_id, stream::StreamRecvBuffer& buffer);
  void account_relocation(std::uint64_t stream_id, const stream::StreamRecvBuffer& buffer);
  std::size_t process_reverso(std::span<std::uint8_t> datagram, stream::AppRecvBufMap& appbuf);
  std::size_t process_baseline(std::span<std::uint8_t> datagram, stream::AppRecvBufMap& appbuf);
  void handle_control(const wire::Frame& frame, bool* ack_eliciting);
  void record_received(std::uint64_t pn, bool ack_eliciting);

  WireMode mode_;
  Role role_;
  ConnectionOptions options_;
  crypto::PacketCipher send_cipher_;
  crypto::PacketCipher recv_cipher_;
  header::ConnectionId peer_cid_{};

  std::uint64_t next_pn_ = 0;
  std::optional<std::uint64_t> largest_acked_;
  std::optional<std::uint64_t> largest_received_;
  std::unique_ptr<detail::IntervalSet> received_;
  bool ack_pending_ = false;

  std::map<std::uint64_t, std::unique_ptr<SendStream>> send_streams_;
  std::uint64_t last_served_stream_ = 0;
  std::deque<Range> retransmit_;
  std::map<std::uint64_t, SentPacket> unacked_;
  std::vector<wire::MaxStreamDataFrame> pending_max_stream_data_;
  bool ping_pending_ = false;
  std::optional<wire::ConnectionCloseFrame> pending_close_;
  bool close_sent_ = false;
  bool peer_closed_ = false;
  std::uint64_t peer_error_code_ = 0;
  std::map<std::uint64_t, std::uint64_t> peer_max_stream_data_;

  std::set<std::uint64_t> readable_;
  std::map<std::uint64_t, std::uint64_t> advertised_max_;
  std::map<std::uint64_t, std::size_t> seen_relocated_;

  std::vector<wire::Frame> frames_;
  Metrics metrics_;
};

}  // namespace reverso

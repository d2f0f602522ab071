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

#include "reverso/endpoint.hpp"

#include <algorithm>
#include <cstring>

#include "interval_set.hpp"
#include "reverso/error.hpp"
#include "reverso/varint.hpp"

namespace reverso {

namespace {

constexpr std::size_t kMinPlaintext = 28;
constexpr std::size_t kMinDatagramSize = 128;
constexpr std::uint64_t kSendTrimThreshold = std::uint64_t{1} << 20;
constexpr std::uint64_t kMaxStreamDataWindow = std::uint64_t{16} << 20;

header::ConnectionId connection_id_for(Role role) {
  header::ConnectionId cid{'r', 'e', 'v', 'e', 'r', 's', 'o', 0};
  cid[7] = static_cast<std::uint8_t>(role);
  return cid;
}

std::uint64_t saturating_sub(std::uint64_t a, std::uint64_t b) {
  return a > b ? a - b : 0;
}

}  // namespace

struct Connection::SendStream {
  std::vector<std::uint8_t> data;  // bytes from offset `base` onwards
  std::uint64_t base = 0;
  std::uint64_t next_offset = 0;   // first byte never sent
  std::uint64_t end = 0;           // total bytes queued
  bool fin_queued = false;
  bool fin_sent = false;
  bool fin_acked = false;
  detail::IntervalSet acked;

  std::uint64_t acked_prefix() const { return acked.prefix_end(0); }
  bool has_new() const { return next_offset < end || (fin_queued && !fin_sent); }
};

Connection::Connection(WireMode mode, Role role, std::span<const std::uint8_t> shared_secret,
                       ConnectionOptions options)
    : mode_(mode),
      role_(role),
      options_(options),
      send_cipher_(crypto::derive_keys(shared_secret, role == Role::kClient ? "c2s" : "s2c")),
      recv_cipher_(crypto::derive_keys(shared_secret, role == Role::kClient ? "s2c" : "c2s")),
      peer_cid_(connection_id_for(role == Role::kClient ? Role::kServer : Role::kClient)),
      received_(std::make_unique<detail::IntervalSet>()) {
  if (options_.window_packets == 0) {
    throw Error(ErrorCode::kInvalidArgument, "window must be positive");
  }
  if (options_.max_datagram_size < kMinDatagramSize ||
      options_.max_datagram_size > kMaxDatagramSize) {
    throw Error(ErrorCode::kInvalidArgument, "datagram size out of range");
  }
}

Connection::~Connection() = default;
Connection::Connection(Connection&&) noexcept = default;
Connection& Connection::operator=(Connection&&) noexcept = default;

std::size_t Connection::stream_send(std::uint64_t stream_id, std::span<const std::uint8_t> data,
                                    bool fin) {
  if (stream_id == 0) throw Error(ErrorCode::kInvalidArgument, "stream 0 is reserved");
  if (stream_id >= kStreamIdLimit) throw Error(ErrorCode::kStreamIdOverflow);
  if (is_closed()) throw Error(ErrorCode::kConnectionClosed);
  auto& slot = send_streams_[stream_id];
  if (!slot) slot = std::make_unique<SendStream>();
  SendStream& s = *slot;
  if (s.fin_queued) {
    if (!data.empty()) throw Error(ErrorCode::kSendAfterFin);
    return 0;
  }
  if (kMaxVarInt - s.end < data.size()) throw Error(ErrorCode::kFinalSize);
  s.data.insert(s.data.end(), data.begin(), data.end());
  s.end += data.size();
  if (fin) s.fin_queued = true;
  return data.size();
}

void Connection::send_ping() { ping_pending_ = true; }

void Connection::close(std::uint64_t error_code, std::span<const std::uint8_t> reason) {
  wire::ConnectionCloseFrame f;
  f.error_code = error_code;
  f.reason.assign(reason.begin(), reason.end());
  pending_close_ = std::move(f);
}

bool Connection::all_acked() const {
  if (!retransmit_.empty()) return false;
  for (const auto& [id, s] : send_streams_) {
    if (s->acked_prefix() < s->end) return false;
    if (s->fin_queued && !s->fin_acked) return false;
  }
  return true;
}

bool Connection::has_pending_send() const {
  if (ack_pending_ || ping_pending_ || pending_close_ || !pending_max_stream_data_.empty() ||
      !retransmit_.empty()) {
    return true;
  }
  return std::any_of(send_streams_.begin(), send_streams_.end(),
                     [](const auto& kv) { return kv.second->has_new(); });
}

std::optional<std::uint64_t> Connection::peer_max_stream_data(std::uint64_t stream_id) const {
  auto it = peer_max_stream_data_.find(stream_id);
  if (it == peer_max_stream_data_.end()) return std::nullopt;
  return it->second;
}

std::optional<Connection::Range> Connection::next_stream_range(std::size_t) {
  while (!retransmit_.empty()) {
    Range r = retransmit_.front();
    const SendStream& s = *send_streams_.at(r.stream_id);
    const std::uint64_t floor = std::max(s.base, s.acked_prefix());
    if (r.offset < floor) {
      const std::uint64_t cut = std::min(floor - r.offset, r.length);
      r.offset += cut;
      r.length -= cut;
    }
    const bool fin_needed = r.fin && !s.fin_acked;
    if (r.length == 0 && !fin_needed) {
      retransmit_.pop_front();
      continue;
    }
    retransmit_.front() = r;
    return r;
  }
  if (send_streams_.empty()) return std::nullopt;
  auto it = send_streams_.upper_bound(last_served_stream_);
  for (std::size_t i = 0; i < send_streams_.size(); ++i, ++it) {
    if (it == send_streams_.end()) it = send_streams_.begin();
    const SendStream& s = *it->second;
    if (s.has_new()) {
      return Range{it->first, s.next_offset, s.end - s.next_offset, s.fin_queued};
    }
  }
  return std::nullopt;
}

wire::AckFrame Connection::make_ack() const {
  wire::AckFrame ack;
  const auto& iv = received_->intervals();
  auto it = iv.rbegin();
  ack.largest_acked = it->second - 1;
  ack.first_range = it->second - 1 - it->first;
  std::uint64_t prev_lo = it->first;
  for (++it; it != iv.rend() && ack.ranges.size() < wire::kMaxAckRanges; ++it) {
    ack.ranges.push_back({prev_lo - it->second - 1, it->second - 1 - it->first});
    prev_lo = it->first;
  }
  return ack;
}

std::optional<std::size_t> Connection::build_packet(std::span<std::uint8_t> out,
                                                    std::uint64_t now_ms) {
  if (out.size() < kMaxDatagramSize) throw Error(ErrorCode::kBufferTooSmall);
  if (is_closed()) return std::nullopt;
  out = out.first(options_.max_datagram_size);

  frames_.clear();
  std::vector<wire::MaxStreamDataFrame> sent_msd;
  bool ack_included = false;
  bool ack_eliciting = false;
  std::optional<Range> candidate;

  if (pending_close_) {
    frames_.emplace_back(*pending_close_);
  } else {
    if (ack_pending_ && !received_->empty()) {
      frames_.emplace_back(make_ack());
      ack_included = true;
    }
    for (const auto& msd : pending_max_stream_data_) {
      frames_.emplace_back(msd);
      sent_msd.push_back(msd);
    }
    if (ping_pending_) frames_.emplace_back(wire::PingFrame{});
    if (unacked_.size() < options_.window_packets) candidate = next_stream_range(0);
  }
  if (frames_.empty() && !candidate) return std::nullopt;

  std::size_t control_bytes = 0;
  for (const auto& f : frames_) control_bytes += wire::frame_wire_size(f, mode_);

  header::ShortHeader h;
  h.packet_number = next_pn_;
  h.dcid = peer_cid_;
  {
    std::uint64_t distance = largest_acked_ ? next_pn_ - *largest_acked_ : next_pn_ + 1;
    distance = std::max<std::uint64_t>(distance, options_.window_packets);
    h.pn_length = crypto::truncated_length(distance);
  }

  auto set_stream_fields = [&](const std::optional<Range>& r) {
    if (mode_ != WireMode::kReverso) return;
    if (!r) {
      h.stream_id = 0;
      h.offset = 0;
      h.sid_length = 1;
      h.off_length = 1;
      return;
    }
    const SendStream& s = *send_streams_.at(r->stream_id);
    const std::uint64_t distance = std::max(saturating_sub(r->offset, s.acked_prefix()),
                                            saturating_sub(s.next_offset, r->offset));
    h.stream_id = r->stream_id;
    h.offset = r->offset;
    h.sid_length = header::stream_id_length(r->stream_id);
    h.off_length = crypto::truncated_length(distance);
  };

  std::size_t data_len = 0;
  bool data_fin = false;
  if (candidate) {
    set_stream_fields(candidate);
    const std::size_t budget = out.size() - header::header_length(mode_, h) - kAeadTagLen;
    std::size_t footer = 1 + varint::encoded_length(candidate->stream_id);
    if (mode_ == WireMode::kReverso || candidate->offset != 0) {
      footer += varint::encoded_length(candidate->offset);
    }
    if (budget >= control_bytes + footer) {
      const std::size_t room = budget - control_bytes - footer;
      data_len = static_cast<std::size_t>(std::min<std::uint64_t>(candidate->length, room));
      data_fin = candidate->fin && data_len == candidate->length;
      if (data_len == 0 && !data_fin) candidate.reset();
    } else {
      candidate.reset();
    }
    if (!candidate) {
      set_stream_fields(std::nullopt);
      if (frames_.empty()) return std::nullopt;
    }
  } else {
    set_stream_fields(std::nullopt);
  }

  if (candidate) {
    SendStream& s = *send_streams_.at(candidate->stream_id);
    wire::StreamFrame sf;
    sf.stream_id = candidate->stream_id;
    sf.offset = candidate->offset;
    sf.fin = data_fin;
    sf.data = std::span<const std::uint8_t>(s.data).subspan(
        static_cast<std::size_t>(candidate->offset - s.base), data_len);
    if (mode_ == WireMode::kReverso) {
      frames_.insert(frames_.begin(), sf);
    } else {
      frames_.push_back(sf);
    }
  }

  const std::size_t hl = header::encode_header(mode_, std::as_const(h), out);
  std::size_t plain_len = 0;
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const bool leftmost_stream = mode_ == WireMode::kReverso && i == 0 && candidate;
    const bool last = i + 1 == frames_.size();
    const bool with_length = mode_ == WireMode::kReverso ? !leftmost_stream : !last;
    plain_len += wire::frame_wire_size(frames_[i], mode_, with_length);
  }
  const std::size_t padding = plain_len < kMinPlaintext ? kMinPlaintext - plain_len : 0;
  auto payload = out.subspan(hl);
  if (mode_ == WireMode::kReverso) {
    const std::size_t n = wire::serialize_reversed(frames_, payload);
    std::memset(payload.data() + n, 0, padding);
  } else {
    std::memset(payload.data(), 0, padding);
    wire::serialize_forward(frames_, payload.subspan(padding));
  }
  plain_len += padding;
  const std::size_t ct_len =
      send_cipher_.seal(next_pn_, out.first(hl), payload.first(plain_len), payload);
  const std::size_t total = hl + ct_len;
  header::protect_header(mode_, out.first(total), send_cipher_);

  // Bookkeeping once the datagram is final.
  SentPacket sent;
  sent.sent_ms = now_ms;
  if (candidate) {
    SendStream& s = *send_streams_.at(candidate->stream_id);
    const Range r{candidate->stream_id, candidate->offset, data_len, data_fin};
    if (!retransmit_.empty() && retransmit_.front().stream_id == r.stream_id &&
        retransmit_.front().offset == r.offset) {
      Range rest = retransmit_.front();
      retransmit_.pop_front();
      if (data_len < rest.length) {
        rest.offset += data_len;
        rest.length -= data_len;
        retransmit_.push_front(rest);
      }
    } else {
      s.next_offset += data_len;
      if (data_fin) s.fin_sent = true;
      last_served_stream_ = candidate->stream_id;
    }
    sent.range = r;
    ack_eliciting = true;
  }
  if (!sent_msd.empty()) {
    sent.max_stream_data = std::move(sent_msd);
    pending_max_stream_data_.clear();
    ack_eliciting = true;
  }
  if (ping_pending_ && !pending_close_) {
    ping_pending_ = false;
    ack_eliciting = true;
  }
  if (ack_included) ack_pending_ = false;
  if (pending_close_) {
    pending_close_.reset();
    close_sent_ = true;
  } else if (ack_eliciting) {
    unacked_.emplace(next_pn_, std::move(sent));
  }
  ++next_pn_;
  ++metrics_.packets_sent;
  metrics_.bytes_sent += total;
  return total;
}

void Connection::on_ack(const wire::AckFrame& ack) {
  if (ack.largest_acked >= next_pn_) {
    throw Error(ErrorCode::kProtocolViolation, "ack for unsent packet");
  }
  largest_acked_ = std::max(largest_acked_.value_or(0), ack.largest_acked);
  auto settle = [&](std::uint64_t lo, std::uint64_t hi) {
    for (auto it = unacked_.lower_bound(lo); it != unacked_.end() && it->first <= hi;) {
      if (it->second.range) {
        const Range& r = *it->second.range;
        SendStream& s = *send_streams_.at(r.stream_id);
        s.acked.insert(r.offset, r.offset + r.length);
        if (r.fin) s.fin_acked = true;
        const std::uint64_t prefix = s.acked_prefix();
        if (prefix - s.base >= kSendTrimThreshold) {
          s.data.erase(s.data.begin(), s.data.begin() + static_cast<std::ptrdiff_t>(prefix - s.base));
          s.base = prefix;
        }
      }
      it = unacked_.erase(it);
    }
  };
  std::uint64_t hi = ack.largest_acked;
  std::uint64_t lo = hi - ack.first_range;
  settle(lo, hi);
  for (const auto& r : ack.ranges) {
    hi = lo - r.gap - 2;
    lo = hi - r.length;
    settle(lo, hi);
  }
}

void Connection::on_timeout(std::uint64_t now_ms) {
  for (auto it = unacked_.begin(); it != unacked_.end();) {
    if (it->second.sent_ms + options_.rto_ms > now_ms) {
      ++it;
      continue;
    }
    if (it->second.range) retransmit_.push_back(*it->second.range);
    for (const auto& msd : it->second.max_stream_data) pending_max_stream_data_.push_back(msd);
    ++metrics_.retransmissions;
    it = unacked_.erase(it);
  }
}

void Connection::handle_control(const wire::Frame& frame, bool* ack_eliciting) {
  if (const auto* ack = std::get_if<wire::AckFrame>(&frame)) {
    on_ack(*ack);
  } else if (std::holds_alternative<wire::PingFrame>(frame)) {
    *ack_eliciting = true;
  } else if (const auto* msd = std::get_if<wire::MaxStreamDataFrame>(&frame)) {
    auto& limit = peer_max_stream_data_[msd->stream_id];
    limit = std::max(limit, msd->maximum);
    *ack_eliciting = true;
  } else if (const auto* close = std::get_if<wire::ConnectionCloseFrame>(&frame)) {
    peer_closed_ = true;
    peer_error_code_ = close->error_code;
  }
}

void Connection::record_received(std::uint64_t pn, bool ack_eliciting) {
  received_->insert(pn, pn + 1);
  received_->keep_highest(wire::kMaxAckRanges + 1);
  largest_received_ = std::max(largest_received_.value_or(0), pn);
  if (ack_eliciting) ack_pending_ = true;
}

void Connection::account_relocation(std::uint64_t stream_id,
                                    const stream::StreamRecvBuffer& buffer) {
  auto& seen = seen_relocated_[stream_id];
  if (buffer.relocated_bytes() > seen) {
    metrics_.payload_bytes_copied += buffer.relocated_bytes() - seen;
    seen = buffer.relocated_bytes();
  }
}

void Connection::mark_readable(std::uint64_t stream_id, stream::StreamRecvBuffer& buffer) {
  account_relocation(stream_id, buffer);
  if (buffer.contiguous_offset() > buffer.consumed_offset() || buffer.fin_reached()) {
    readable_.insert(stream_id);
  }
}

std::size_t Connection::recv(std::span<std::uint8_t> datagram, stream::AppRecvBufMap& appbuf) {
  metrics_.bytes_received += datagram.size();
  if (mode_ == WireMode::kReverso) return process_reverso(datagram, appbuf);
  return process_baseline(datagram, appbuf);
}

std::size_t Connection::process_reverso(std::span<std::uint8_t> datagram,
                                        stream::AppRecvBufMap& appbuf) {
  const auto decoded = header::unprotect_and_decode(
      WireMode::kReverso, datagram, recv_cipher_, largest_received_.value_or(0),
      [&](std::uint64_t sid) { return appbuf.contiguous_offset(sid); });
  const header::ShortHeader& h = decoded.header;
  const auto aad = datagram.first(decoded.length);
  const auto ciphertext = datagram.subspan(decoded.length);
  const std::uint64_t sid = h.stream_id;

  // A fresh stream borrows the spare buffer before decryption; the binding
  // is settled the same way whether or not the tag verifies.
  const bool fresh = sid != 0 && appbuf.bind_spare(sid);
  stream::Plan plan;
  try {
    plan = appbuf.decryption_plan(sid, h.offset, ciphertext.size());
  } catch (...) {
    if (fresh) appbuf.take_or_recycle(sid, false);
    throw;
  }
  const auto dest = plan.kind == stream::PlanKind::kZeroCopy ? plan.destination : ciphertext;
  const auto opened = recv_cipher_.open(h.packet_number, aad, ciphertext, dest);
  if (fresh) appbuf.take_or_recycle(sid, opened.has_value());
  if (!opened) {
    ++metrics_.decrypt_failures;
    return datagram.size();
  }
  ++metrics_.packets_received;
  if (received_->contains(h.packet_number)) {
    ++metrics_.packets_duplicate;
    ack_pending_ = true;
    return datagram.size();
  }

  const auto plaintext = dest.first(*opened);
  frames_.clear();
  wire::parse_reversed(plaintext, [&](wire::Frame&& f) { frames_.push_back(std::move(f)); });

  const wire::StreamFrame* primary = nullptr;
  if (!frames_.empty()) {
    const auto* last = std::get_if<wire::StreamFrame>(&frames_.back());
    if (last && last->data.data() == plaintext.data()) primary = last;
  }
  if (sid == 0) {
    if (primary != nullptr) throw Error(ErrorCode::kProtocolViolation, "stream frame in control-only packet");
  } else if (primary == nullptr || primary->stream_id != sid || primary->offset != h.offset) {
    throw Error(ErrorCode::kProtocolViolation, "footer does not match header");
  }

  bool ack_eliciting = false;
  bool dropped = false;
  for (const auto& frame : frames_) {
    const auto* sf = std::get_if<wire::StreamFrame>(&frame);
    if (sf == primary && primary != nullptr) continue;
    if (sf != nullptr) {
      if (sf->stream_id == 0 || sf->stream_id == sid) {
        throw Error(ErrorCode::kProtocolViolation, "bad multiplexed stream frame");
      }
      auto& buffer = appbuf.get_or_create(sf->stream_id);
      const auto r = buffer.deliver_copy(sf->offset, sf->data, sf->fin);
      metrics_.payload_bytes_copied += r.copied;
      metrics_.payload_bytes_stashed += r.stashed;
      dropped = dropped || r.dropped;
      mark_readable(sf->stream_id, buffer);
      ack_eliciting = true;
    } else {
      handle_control(frame, &ack_eliciting);
    }
  }

  if (primary != nullptr) {
    ack_eliciting = true;
    stream::StreamRecvBuffer& buffer = *plan.buffer;
    const std::size_t data_len = primary->data.size();
    if (plan.kind == stream::PlanKind::kZeroCopy) {
      metrics_.payload_bytes_copied +=
          buffer.commit_zero_copy(data_len, primary->fin, plaintext.size() - data_len);
      metrics_.payload_bytes_zero_copy += data_len;
      ++metrics_.packets_in_order;
    } else {
      const auto r = buffer.deliver_copy(primary->offset, primary->data, primary->fin);
      metrics_.payload_bytes_copied += r.copied;
      metrics_.payload_bytes_stashed += r.stashed;
      dropped = dropped || r.dropped;
      ++metrics_.packets_out_of_order;
      if (plan.kind == stream::PlanKind::kInPlaceSuspicious && r.copied == 0 && r.stashed == 0) {
        ++metrics_.packets_spurious;
      }
    }
    mark_readable(sid, buffer);
  } else {
    ++metrics_.packets_control_only;
  }
  if (!dropped) record_received(h.packet_number, ack_eliciting);
  return datagram.size();
}

std::size_t Connection::process_baseline(std::span<std::uint8_t> datagram,
                                         stream::AppRecvBufMap& appbuf) {
  const auto decoded = header::unprotect_and_decode(WireMode::kBaseline, datagram, recv_cipher_,
                                                    largest_received_.value_or(0),
                                                    [](std::uint64_t) { return std::uint64_t{0}; });
  const header::ShortHeader& h = decoded.header;
  const auto aad = datagram.first(decoded.length);
  const auto ciphertext = datagram.subspan(decoded.length);
  const auto opened = recv_cipher_.open(h.packet_number, aad, ciphertext, ciphertext);
  if (!opened) {
    ++metrics_.decrypt_failures;
    return datagram.size();
  }
  ++metrics_.packets_received;
  if (received_->contains(h.packet_number)) {
    ++metrics_.packets_duplicate;
    ack_pending_ = true;
    return datagram.size();
  }

  const auto plaintext = ciphertext.first(*opened);
  frames_.clear();
  wire::parse_forward(plaintext, [&](wire::Frame&& f) { frames_.push_back(std::move(f)); });

  bool ack_eliciting = false;
  bool dropped = false;
  bool first_stream = true;
  for (const auto& frame : frames_) {
    const auto* sf = std::get_if<wire::StreamFrame>(&frame);
    if (sf == nullptr) {
      handle_control(frame, &ack_eliciting);
      continue;
    }
    if (sf->stream_id == 0) throw Error(ErrorCode::kProtocolViolation, "stream 0 is reserved");
    auto& buffer = appbuf.get_or_create(sf->stream_id);
    const std::uint64_t contiguous = buffer.contiguous_offset();
    const auto r = buffer.deliver_copy(sf->offset, sf->data, sf->fin);
    if (first_stream) {
      if (sf->offset == contiguous) {
        ++metrics_.packets_in_order;
      } else {
        ++metrics_.packets_out_of_order;
        if (sf->offset < contiguous && r.copied == 0 && r.stashed == 0) ++metrics_.packets_spurious;
      }
      first_stream = false;
    }
    metrics_.payload_bytes_copied += r.copied;
    metrics_.payload_bytes_stashed += r.stashed;
    dropped = dropped || r.dropped;
    mark_readable(sf->stream_id, buffer);
    ack_eliciting = true;
  }
  if (first_stream) ++metrics_.packets_control_only;
  if (!dropped) record_received(h.packet_number, ack_eliciting);
  return datagram.size();
}

std::vector<std::uint64_t> Connection::readable() const {
  return {readable_.begin(), readable_.end()};
}

StreamView Connection::stream_recv(std::uint64_t stream_id, stream::AppRecvBufMap& appbuf) {
  const auto* buffer = appbuf.find(stream_id);
  if (buffer == nullptr) throw Error(ErrorCode::kStreamNotFound);
  return {buffer->readable_span(), buffer->fin_reached()};
}

void Connection::stream_consumed(std::uint64_t stream_id, std::size_t n,
                                 stream::AppRecvBufMap& appbuf) {
  auto* buffer = appbuf.find(stream_id);
  if (buffer == nullptr) throw Error(ErrorCode::kStreamNotFound);
  buffer->consume(n);
  if (buffer->consumed_offset() == buffer->contiguous_offset()) readable_.erase(stream_id);
  if (options_.max_stream_data_step > 0 && !buffer->fin_offset()) {
    auto& last = advertised_max_[stream_id];
    if (buffer->consumed_offset() >= last + options_.max_stream_data_step) {
      last = buffer->consumed_offset();
      pending_max_stream_data_.push_back({stream_id, last + kMaxStreamDataWindow});
    }
  }
}

}  // namespace reverso

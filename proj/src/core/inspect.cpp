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

#include "reverso/inspect.hpp"

#include <cinttypes>
#include <cstdio>
#include <vector>

#include "reverso/crypto.hpp"
#include "reverso/header.hpp"
#include "reverso/wire.hpp"

namespace reverso {

namespace {

template <typename... Args>
void appendf(std::string& out, const char* fmt, Args... args) {
  char line[256];
  std::snprintf(line, sizeof line, fmt, args...);
  out += line;
}

std::string hex(std::span<const std::uint8_t> bytes, std::size_t limit = 16) {
  std::string s;
  for (std::size_t i = 0; i < bytes.size() && i < limit; ++i) {
    char b[3];
    std::snprintf(b, sizeof b, "%02x", bytes[i]);
    s += b;
  }
  if (bytes.size() > limit) s += "..";
  return s;
}

std::string describe(const wire::Frame& frame) {
  std::string s;
  if (std::holds_alternative<wire::PaddingFrame>(frame)) {
    s = "PADDING";
  } else if (std::holds_alternative<wire::PingFrame>(frame)) {
    s = "PING";
  } else if (const auto* a = std::get_if<wire::AckFrame>(&frame)) {
    appendf(s, "ACK largest=%" PRIu64 " delay=%" PRIu64 " first_range=%" PRIu64, a->largest_acked,
            a->ack_delay, a->first_range);
    for (const auto& r : a->ranges) appendf(s, " (gap=%" PRIu64 " len=%" PRIu64 ")", r.gap, r.length);
  } else if (const auto* f = std::get_if<wire::StreamFrame>(&frame)) {
    appendf(s, "STREAM id=%" PRIu64 " off=%" PRIu64 " len=%zu fin=%d data=%s", f->stream_id,
            f->offset, f->data.size(), f->fin ? 1 : 0, hex(f->data, 8).c_str());
  } else if (const auto* m = std::get_if<wire::MaxStreamDataFrame>(&frame)) {
    appendf(s, "MAX_STREAM_DATA id=%" PRIu64 " max=%" PRIu64, m->stream_id, m->maximum);
  } else if (const auto* c = std::get_if<wire::ConnectionCloseFrame>(&frame)) {
    appendf(s, "CONNECTION_CLOSE code=%" PRIu64 " reason=\"%s\"", c->error_code,
            std::string(c->reason.begin(), c->reason.end()).c_str());
  }
  return s;
}

struct Located {
  wire::Frame frame;
  std::size_t begin;
  std::size_t end;
};

void print_frames(std::string& out, const std::vector<Located>& frames, bool backward) {
  std::size_t i = 0;
  while (i < frames.size()) {
    // Collapse runs of padding.
    std::size_t j = i;
    while (j < frames.size() && std::holds_alternative<wire::PaddingFrame>(frames[j].frame)) ++j;
    if (j > i + 1) {
      const std::size_t lo = std::min(frames[i].begin, frames[j - 1].begin);
      const std::size_t hi = std::max(frames[i].end, frames[j - 1].end);
      appendf(out, "  #%zu-%zu [%4zu..%4zu) PADDING x%zu\n", i, j - 1, lo, hi, j - i);
      i = j;
      continue;
    }
    appendf(out, "  #%zu [%4zu..%4zu) %s\n", i, frames[i].begin, frames[i].end,
            describe(frames[i].frame).c_str());
    ++i;
  }
  if (backward) out += "  (#0 is the rightmost frame; the last one holds plaintext position 0)\n";
}

}  // namespace

InspectResult inspect_datagram(std::span<const std::uint8_t> secret,
                               std::span<const std::uint8_t> datagram,
                               const InspectOptions& options) {
  InspectResult result;
  std::string& out = result.text;
  const auto keys = crypto::derive_keys(secret, options.sender == Role::kClient ? "c2s" : "s2c");
  crypto::PacketCipher cipher(keys);
  std::vector<std::uint8_t> packet(datagram.begin(), datagram.end());

  const auto decoded = header::unprotect_and_decode(
      options.mode, packet, cipher, options.pn_reference,
      [&](std::uint64_t) { return options.offset_reference; });
  const header::ShortHeader& h = decoded.header;

  appendf(out, "mode            %s\n", mode_name(options.mode));
  appendf(out, "datagram        %zu bytes\n", datagram.size());
  appendf(out, "header          %zu bytes: %s\n", decoded.length,
          hex(std::span<const std::uint8_t>(packet).first(decoded.length), 32).c_str());
  appendf(out, "  flags         0x%02x key_phase=%d\n", packet[0], h.key_phase ? 1 : 0);
  appendf(out, "  dcid          %s\n", hex(h.dcid).c_str());
  appendf(out, "  packet_number %" PRIu64 " (%zu bytes, reference %" PRIu64 ")\n", h.packet_number,
          h.pn_length, options.pn_reference);
  if (options.mode == WireMode::kReverso) {
    appendf(out, "  stream_id     %" PRIu64 " (%zu bytes)%s\n", h.stream_id, h.sid_length,
            h.stream_id == 0 ? " control-only" : "");
    appendf(out, "  offset        %" PRIu64 " (%zu bytes, reference %" PRIu64 ")\n", h.offset,
            h.off_length, options.offset_reference);
  }

  const auto aad = std::span<const std::uint8_t>(packet).first(decoded.length);
  const auto ct = std::span<std::uint8_t>(packet).subspan(decoded.length);
  const auto opened = cipher.open(h.packet_number, aad, ct, ct);
  if (!opened) {
    appendf(out, "payload         %zu bytes, authentication FAILED\n", ct.size());
    return result;
  }
  result.authenticated = true;
  const auto plaintext = std::span<const std::uint8_t>(ct).first(*opened);
  appendf(out, "payload         %zu bytes ciphertext, %zu bytes plaintext\n", ct.size(),
          plaintext.size());

  std::vector<Located> frames;
  if (options.mode == WireMode::kReverso) {
    out += "frames          parsed backward from the end\n";
    std::size_t cursor = plaintext.size();
    while (cursor > 0) {
      const std::size_t end = cursor;
      auto f = wire::detail::parse_one_reversed(plaintext, &cursor);
      frames.push_back({std::move(f), cursor, end});
    }
  } else {
    out += "frames          parsed forward\n";
    std::size_t cursor = 0;
    while (cursor < plaintext.size()) {
      const std::size_t begin = cursor;
      auto f = wire::detail::parse_one_forward(plaintext, &cursor);
      frames.push_back({std::move(f), begin, cursor});
    }
  }
  print_frames(out, frames, options.mode == WireMode::kReverso);
  return result;
}

}  // namespace reverso

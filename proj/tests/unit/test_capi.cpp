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

#include <gtest/gtest.h>

#include <cstring>
#include <string>
#include <vector>

#include "reverso/reverso.h"

namespace {

std::vector<uint8_t> secret() { return std::vector<uint8_t>(RVS_SECRET_LEN, 0x11); }

TEST(CApi, VersionAndErrors) {
  EXPECT_STREQ(rvs_version(), "0.1.0");
  EXPECT_STRNE(rvs_strerror(RVS_ERR_FINAL_SIZE), "");
  rvs_conn* c = nullptr;
  const auto s = secret();
  EXPECT_EQ(rvs_conn_new(RVS_MODE_REVERSO, RVS_ROLE_CLIENT, s.data(), 5, nullptr, &c),
            RVS_ERR_KEY_DERIVATION);
  EXPECT_EQ(c, nullptr);
  EXPECT_NE(std::string(rvs_last_error()), "");
  EXPECT_EQ(rvs_conn_new(RVS_MODE_REVERSO, RVS_ROLE_CLIENT, s.data(), s.size(), nullptr, nullptr),
            RVS_ERR_INVALID_ARGUMENT);
  rvs_conn_free(nullptr);
  rvs_appbuf_free(nullptr);
}

TEST(CApi, LoopbackExchange) {
  for (const rvs_mode mode : {RVS_MODE_BASELINE, RVS_MODE_REVERSO}) {
    const auto s = secret();
    rvs_conn* client = nullptr;
    rvs_conn* server = nullptr;
    rvs_appbuf* cbuf = nullptr;
    rvs_appbuf* sbuf = nullptr;
    ASSERT_EQ(rvs_conn_new(mode, RVS_ROLE_CLIENT, s.data(), s.size(), nullptr, &client), RVS_OK);
    ASSERT_EQ(rvs_conn_new(mode, RVS_ROLE_SERVER, s.data(), s.size(), nullptr, &server), RVS_OK);
    ASSERT_EQ(rvs_appbuf_new(0, &cbuf), RVS_OK);
    ASSERT_EQ(rvs_appbuf_new(0, &sbuf), RVS_OK);

    std::vector<uint8_t> payload(50000);
    for (size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<uint8_t>(i * 7);
    size_t queued = 0;
    ASSERT_EQ(rvs_stream_send(client, 4, payload.data(), payload.size(), 1, &queued), RVS_OK);
    EXPECT_EQ(queued, payload.size());
    EXPECT_TRUE(rvs_conn_has_pending_send(client));

    uint8_t dgram[RVS_MAX_DATAGRAM_SIZE];
    size_t n = 0;
    std::vector<uint8_t> got;
    int fin = 0;
    for (int round = 0; round < 100 && !rvs_conn_all_acked(client); ++round) {
      while (rvs_build_packet(client, dgram, sizeof dgram, 0, &n) == RVS_OK) {
        ASSERT_GE(rvs_recv(server, dgram, n, sbuf), 0);
      }
      uint64_t ids[4];
      const size_t k = rvs_readable(server, ids, 4);
      for (size_t i = 0; i < k; ++i) {
        const uint8_t* data = nullptr;
        size_t len = 0;
        ASSERT_EQ(rvs_stream_recv(server, ids[i], sbuf, &data, &len, &fin), RVS_OK);
        got.insert(got.end(), data, data + len);
        ASSERT_EQ(rvs_stream_consumed(server, ids[i], len, sbuf), RVS_OK);
      }
      while (rvs_build_packet(server, dgram, sizeof dgram, 0, &n) == RVS_OK) {
        ASSERT_GE(rvs_recv(client, dgram, n, cbuf), 0);
      }
    }
    EXPECT_EQ(got, payload);
    EXPECT_EQ(fin, 1);
    EXPECT_TRUE(rvs_conn_all_acked(client));
    EXPECT_EQ(rvs_appbuf_streams(sbuf), 1u);

    rvs_metrics m{};
    ASSERT_EQ(rvs_conn_metrics(server, &m), RVS_OK);
    EXPECT_EQ(m.payload_bytes_copied + m.payload_bytes_zero_copy, payload.size());
    EXPECT_EQ(mode == RVS_MODE_REVERSO ? m.payload_bytes_copied : m.payload_bytes_zero_copy, 0u);

    // Consuming past the readable end is an error code, not a crash.
    EXPECT_EQ(rvs_stream_consumed(server, 4, 1, sbuf), RVS_ERR_CONSUME_OUT_OF_RANGE);
    EXPECT_EQ(rvs_stream_send(client, 4, payload.data(), 1, 0, nullptr), RVS_ERR_SEND_AFTER_FIN);

    ASSERT_EQ(rvs_close(server, 0, nullptr, 0), RVS_OK);
    ASSERT_EQ(rvs_build_packet(server, dgram, sizeof dgram, 0, &n), RVS_OK);
    ASSERT_GE(rvs_recv(client, dgram, n, cbuf), 0);
    uint64_t code = 99;
    EXPECT_TRUE(rvs_conn_peer_closed(client, &code));
    EXPECT_EQ(code, 0u);
    EXPECT_EQ(rvs_build_packet(server, dgram, sizeof dgram, 0, &n), RVS_DONE);
    EXPECT_EQ(n, 0u);

    rvs_appbuf_free(cbuf);
    rvs_appbuf_free(sbuf);
    rvs_conn_free(client);
    rvs_conn_free(server);
  }
}

TEST(CApi, InspectReportsFramesAndFailures) {
  const auto s = secret();
  rvs_conn* c = nullptr;
  ASSERT_EQ(rvs_conn_new(RVS_MODE_REVERSO, RVS_ROLE_CLIENT, s.data(), s.size(), nullptr, &c), RVS_OK);
  const uint8_t hello[] = "hello";
  ASSERT_EQ(rvs_stream_send(c, 1, hello, 5, 1, nullptr), RVS_OK);
  uint8_t dgram[RVS_MAX_DATAGRAM_SIZE];
  size_t n = 0;
  ASSERT_EQ(rvs_build_packet(c, dgram, sizeof dgram, 0, &n), RVS_OK);
  rvs_conn_free(c);

  size_t needed = 0;
  int auth = 0;
  EXPECT_EQ(rvs_inspect(RVS_MODE_REVERSO, RVS_ROLE_CLIENT, s.data(), s.size(), dgram, n, 0, 0,
                        nullptr, 0, &needed, &auth),
            RVS_ERR_BUFFER_TOO_SMALL);
  std::string text(needed, '\0');
  ASSERT_EQ(rvs_inspect(RVS_MODE_REVERSO, RVS_ROLE_CLIENT, s.data(), s.size(), dgram, n, 0, 0,
                        text.data(), text.size(), &needed, &auth),
            RVS_OK);
  EXPECT_EQ(auth, 1);
  EXPECT_NE(text.find("STREAM"), std::string::npos) << text;
  EXPECT_NE(text.find("rightmost"), std::string::npos) << text;

  dgram[n - 1] ^= 1;
  ASSERT_EQ(rvs_inspect(RVS_MODE_REVERSO, RVS_ROLE_CLIENT, s.data(), s.size(), dgram, n, 0, 0,
                        text.data(), text.size(), &needed, &auth),
            RVS_OK);
  EXPECT_EQ(auth, 0);
  EXPECT_NE(text.find("FAILED"), std::string::npos);
}

TEST(CApi, SimulatorEntryPoint) {
  rvs_pipe_config pipe{7, 0.05, 3, 0.01, 0.0};
  rvs_transfer_report r{};
  ASSERT_EQ(rvs_run_transfer(RVS_MODE_REVERSO, 200000, 2, &pipe, &r), RVS_OK);
  EXPECT_EQ(r.verified, 1);
  EXPECT_EQ(r.bytes_transferred, 200000u);
  pipe.loss_prob = 2;
  EXPECT_EQ(rvs_run_transfer(RVS_MODE_REVERSO, 1000, 1, &pipe, &r), RVS_ERR_INVALID_ARGUMENT);
}

}  // namespace

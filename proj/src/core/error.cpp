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

#include "reverso/error.hpp"

namespace reverso {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kEncodingOverflow: return "EncodingOverflow";
    case ErrorCode::kTruncatedVarInt: return "TruncatedVarInt";
    case ErrorCode::kKeyDerivation: return "KeyDerivationError";
    case ErrorCode::kBufferTooSmall: return "BufferTooSmall";
    case ErrorCode::kTruncationRange: return "TruncationRangeError";
    case ErrorCode::kStreamIdOverflow: return "StreamIdOverflow";
    case ErrorCode::kPacketTooShortForSampling: return "PacketTooShortForSampling";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kUnknownFrameType: return "UnknownFrameType";
    case ErrorCode::kMalformedFrame: return "MalformedFrame";
    case ErrorCode::kFrameOrderViolation: return "FrameOrderViolation";
    case ErrorCode::kFinalSize: return "FinalSizeError";
    case ErrorCode::kConsumeOutOfRange: return "ConsumeOutOfRange";
    case ErrorCode::kProtocolViolation: return "ProtocolViolation";
    case ErrorCode::kSendAfterFin: return "SendAfterFin";
    case ErrorCode::kStreamNotFound: return "StreamNotFound";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConnectionClosed: return "ConnectionClosed";
    case ErrorCode::kBufferLimit: return "BufferLimit";
    case ErrorCode::kCrypto: return "CryptoError";
  }
  return "Unknown";
}

}  // namespace reverso

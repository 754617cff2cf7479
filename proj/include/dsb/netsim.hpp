// Copyright 2026 The dsbsim Authors
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

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dsb/error.hpp"
#include "dsb/value.hpp"

namespace dsb {

using ChannelId = std::uint64_t;

enum class ChannelKind { Plaintext, Tls };
std::string_view to_string(ChannelKind k);

struct Channel {
  ChannelId id = 0;
  ChannelKind kind = ChannelKind::Tls;
  bool client_validates = true;  // tls only
  std::string client;
  std::string server;
};

struct Message {
  std::map<std::string, std::string> headers;
  std::string body;
  /// Credential carried in the body, if any.
  std::optional<std::string> contains_token;

  /// Throws Error{InvalidMessage} when contains_token is not a substring of body.
  void validate() const;
  Json to_json() const;
};

struct Interceptor {
  ChannelId channel = 0;
  bool forged_certificate = true;
  std::vector<Message> captured;
};

struct DeliveryResult {
  bool delivered = false;
  bool captured = false;
};

/// Shared network with a boolean certificate-trust model. A forged
/// certificate is accepted only by clients that skip validation.
class Network {
 public:
  ChannelId open_channel(std::string client, std::string server, ChannelKind kind,
                         bool client_validates = true);
  /// Replaces any interceptor already on the channel. Throws Error{UnknownChannel}.
  void attach_interceptor(ChannelId channel, bool forged_certificate = true);

  /// Throws Error{UnknownChannel}, Error{InvalidMessage}, Error{HandshakeRejected}.
  DeliveryResult transmit(ChannelId channel, const Message& msg);

  const Channel& channel(ChannelId id) const;
  const Interceptor* interceptor(ChannelId channel) const;
  const std::vector<Message>& delivered(ChannelId channel) const;

  /// Tokens from every captured message on `channel`, deduplicated, in
  /// capture order.
  std::vector<std::string> extract_token(ChannelId channel) const;
  /// Same over all interceptors, in global capture order.
  std::vector<std::string> extract_tokens() const;

  void write_capture_jsonl(std::ostream& os) const;

 private:
  std::map<ChannelId, Channel> channels_;
  std::map<ChannelId, Interceptor> interceptors_;
  std::map<ChannelId, std::vector<Message>> delivered_;
  std::vector<std::pair<ChannelId, std::size_t>> capture_order_;
  ChannelId next_ = 1;
};

/// Cloud-status request shaped like the one a smart-plug app sends, with
/// the account token embedded in the JSON body.
Message account_status_request(const std::string& token, const std::string& host);

}  // namespace dsb

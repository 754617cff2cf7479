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

#include "dsb/netsim.hpp"

#include <set>

#include "dsb/error.hpp"

namespace dsb {

std::string_view to_string(ChannelKind k) {
  return k == ChannelKind::Plaintext ? "plaintext" : "tls";
}

void Message::validate() const {
  if (contains_token && body.find(*contains_token) == std::string::npos) {
    throw Error(Errc::InvalidMessage, "contains_token does not occur in body");
  }
}

Json Message::to_json() const {
  Json headers_json = Json::object();
  for (const auto& [k, v] : headers) headers_json[k] = v;
  return Json{{"headers", headers_json},
              {"body", body},
              {"contains_token", contains_token ? Json(*contains_token) : Json()}};
}

ChannelId Network::open_channel(std::string client, std::string server, ChannelKind kind,
                                bool client_validates) {
  const ChannelId id = next_++;
  channels_[id] = Channel{id, kind, kind == ChannelKind::Tls && client_validates,
                          std::move(client), std::move(server)};
  delivered_[id];
  return id;
}

const Channel& Network::channel(ChannelId id) const {
  auto it = channels_.find(id);
  if (it == channels_.end()) throw Error(Errc::UnknownChannel, std::to_string(id));
  return it->second;
}

void Network::attach_interceptor(ChannelId id, bool forged_certificate) {
  channel(id);
  interceptors_[id] = Interceptor{id, forged_certificate, {}};
}

const Interceptor* Network::interceptor(ChannelId id) const {
  auto it = interceptors_.find(id);
  return it == interceptors_.end() ? nullptr : &it->second;
}

const std::vector<Message>& Network::delivered(ChannelId id) const {
  channel(id);
  return delivered_.at(id);
}

DeliveryResult Network::transmit(ChannelId id, const Message& msg) {
  const auto& ch = channel(id);
  msg.validate();
  DeliveryResult result;
  auto it = interceptors_.find(id);
  if (it != interceptors_.end()) {
    auto& icpt = it->second;
    // Without a certificate the interceptor can only sit on plaintext.
    const bool readable = ch.kind == ChannelKind::Plaintext ||
                          (icpt.forged_certificate && !ch.client_validates);
    if (ch.kind == ChannelKind::Tls && icpt.forged_certificate && ch.client_validates) {
      throw Error(Errc::HandshakeRejected, ch.client + " -> " + ch.server);
    }
    if (readable) {
      icpt.captured.push_back(msg);
      capture_order_.emplace_back(id, icpt.captured.size() - 1);
      result.captured = true;
    }
  }
  delivered_[id].push_back(msg);
  result.delivered = true;
  return result;
}

std::vector<std::string> Network::extract_token(ChannelId id) const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  if (const auto* icpt = interceptor(id)) {
    for (const auto& m : icpt->captured) {
      if (m.contains_token && seen.insert(*m.contains_token).second) out.push_back(*m.contains_token);
    }
  }
  return out;
}

std::vector<std::string> Network::extract_tokens() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& [id, idx] : capture_order_) {
    const auto& m = interceptors_.at(id).captured[idx];
    if (m.contains_token && seen.insert(*m.contains_token).second) out.push_back(*m.contains_token);
  }
  return out;
}

void Network::write_capture_jsonl(std::ostream& os) const {
  for (const auto& [id, idx] : capture_order_) {
    const auto& ch = channels_.at(id);
    Json j{{"channel", id},
           {"client", ch.client},
           {"server", ch.server},
           {"kind", std::string(to_string(ch.kind))}};
    j.update(interceptors_.at(id).captured[idx].to_json());
    os << j.dump() << '\n';
  }
}

Message account_status_request(const std::string& token, const std::string& host) {
  Message m;
  m.headers = {{"Host", host}, {"Content-Type", "application/json"}, {"Method", "GET"}};
  Json body{{"data", {{"uri", "com.tplinkra.iot.authentication.impl.RetrieveAccountSettingRequest"}}},
            {"iotContext",
             {{"userContext",
               {{"accountToken", token},
                {"app", {{"appType", "Kasa_Android"}}},
                {"email", "user@example.com"},
                {"terminalId", "terminal-0"}}}}}};
  m.body = body.dump();
  m.contains_token = token;
  return m;
}

}  // namespace dsb

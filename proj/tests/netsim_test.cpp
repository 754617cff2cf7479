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

#include <gtest/gtest.h>

#include <sstream>

#include "dsb/netsim.hpp"

namespace dsb {
namespace {

class NetworkTest : public ::testing::Test {
 protected:
  Network net;
  const Message msg = account_status_request("tok-secret", "wap.tplinkcloud.com");
};

TEST_F(NetworkTest, AccountRequestCarriesToken) {
  const auto body = Json::parse(msg.body);
  EXPECT_EQ(body["iotContext"]["userContext"]["accountToken"], "tok-secret");
  EXPECT_EQ(msg.headers.at("Host"), "wap.tplinkcloud.com");
  EXPECT_NO_THROW(msg.validate());
}

TEST_F(NetworkTest, TokenMustAppearInBody) {
  Message bad;
  bad.body = "{}";
  bad.contains_token = "tok";
  try {
    bad.validate();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidMessage);
  }
}

TEST_F(NetworkTest, DeliveryWithoutInterceptor) {
  const auto ch = net.open_channel("plug", "cloud", ChannelKind::Tls);
  const auto r = net.transmit(ch, msg);
  EXPECT_TRUE(r.delivered);
  EXPECT_FALSE(r.captured);
  EXPECT_EQ(net.delivered(ch).size(), 1u);
}

TEST_F(NetworkTest, BrokenValidationLeaksToForgedCertificate) {
  const auto ch = net.open_channel("plug", "cloud", ChannelKind::Tls, false);
  net.attach_interceptor(ch, true);
  const auto r = net.transmit(ch, msg);
  EXPECT_TRUE(r.captured);
  EXPECT_TRUE(r.delivered);
  EXPECT_EQ(net.extract_token(ch), std::vector<std::string>{"tok-secret"});
}

TEST_F(NetworkTest, StrictValidationRejectsForgedCertificate) {
  const auto ch = net.open_channel("plug", "cloud", ChannelKind::Tls, true);
  net.attach_interceptor(ch, true);
  try {
    net.transmit(ch, msg);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::HandshakeRejected);
  }
  EXPECT_TRUE(net.interceptor(ch)->captured.empty());
  EXPECT_TRUE(net.delivered(ch).empty());
  EXPECT_TRUE(net.extract_tokens().empty());
}

TEST_F(NetworkTest, InterceptorWithoutCertificateSeesNothingOnTls) {
  const auto ch = net.open_channel("plug", "cloud", ChannelKind::Tls, false);
  net.attach_interceptor(ch, false);
  EXPECT_FALSE(net.transmit(ch, msg).captured);
}

TEST_F(NetworkTest, PlaintextIsAlwaysReadable) {
  const auto ch = net.open_channel("plug", "cloud", ChannelKind::Plaintext, true);
  EXPECT_FALSE(net.channel(ch).client_validates);
  net.attach_interceptor(ch, false);
  EXPECT_TRUE(net.transmit(ch, msg).captured);
}

TEST_F(NetworkTest, ExtractTokensDeduplicatesInCaptureOrder) {
  const auto a = net.open_channel("plug", "cloud", ChannelKind::Plaintext);
  const auto b = net.open_channel("cam", "cloud", ChannelKind::Plaintext);
  net.attach_interceptor(a);
  net.attach_interceptor(b);
  net.transmit(b, account_status_request("tok-b", "h"));
  net.transmit(a, account_status_request("tok-a", "h"));
  net.transmit(b, account_status_request("tok-b", "h"));
  EXPECT_EQ(net.extract_tokens(), (std::vector<std::string>{"tok-b", "tok-a"}));
  std::ostringstream os;
  net.write_capture_jsonl(os);
  const auto text = os.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST_F(NetworkTest, UnknownChannel) {
  try {
    net.attach_interceptor(42);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownChannel);
  }
  EXPECT_THROW(net.transmit(42, msg), Error);
}

}  // namespace
}  // namespace dsb

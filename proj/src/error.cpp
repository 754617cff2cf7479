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

#include "dsb/error.hpp"

namespace dsb {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidPath: return "invalid-path";
    case Errc::InvalidPattern: return "invalid-pattern";
    case Errc::UnknownPath: return "unknown-path";
    case Errc::TypeMismatch: return "type-mismatch";
    case Errc::EnumViolation: return "enum-violation";
    case Errc::NotDeletable: return "not-deletable";
    case Errc::ReadOnlyVariable: return "read-only-variable";
    case Errc::UnknownPrincipal: return "unknown-principal";
    case Errc::InvalidSchema: return "invalid-schema";
    case Errc::InvalidPolicy: return "invalid-policy";
    case Errc::UnknownPermission: return "unknown-permission";
    case Errc::ConsentDenied: return "consent-denied";
    case Errc::UnknownToken: return "unknown-token";
    case Errc::UnknownProduct: return "unknown-product";
    case Errc::UnknownOwner: return "unknown-owner";
    case Errc::WrongPlatformMode: return "wrong-platform-mode";
    case Errc::LinkButtonNotPressed: return "link-button-not-pressed";
    case Errc::UnknownTarget: return "unknown-target";
    case Errc::InvalidManifest: return "invalid-manifest";
    case Errc::InvalidRoutine: return "invalid-routine";
    case Errc::HandshakeRejected: return "handshake-rejected";
    case Errc::UnknownChannel: return "unknown-channel";
    case Errc::InvalidMessage: return "invalid-message";
    case Errc::UniverseMismatch: return "universe-mismatch";
    case Errc::UnknownScenario: return "unknown-scenario";
    case Errc::InvalidScenario: return "invalid-scenario";
  }
  return "unknown-error";
}

}  // namespace dsb

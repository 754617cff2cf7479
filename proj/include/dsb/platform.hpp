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
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dsb/behaviors.hpp"
#include "dsb/datastore.hpp"
#include "dsb/error.hpp"
#include "dsb/policy.hpp"
#include "dsb/routines.hpp"

namespace dsb {

enum class Method { Get, Put, Delete };
std::string_view to_string(Method m);
Method method_from_string(std::string_view s);

struct Request {
  Method method = Method::Get;
  std::string path;
  Token token;
  std::optional<Value> body;  // PUT only
};

struct Response {
  enum class Status { Ok, Denied, Error };

  Status status = Status::Ok;
  /// Value, readable subtree fragment, or error detail.
  Json payload;
  std::optional<DenyReason> reason;  // Denied only
  std::optional<Errc> error;         // Error only
  std::optional<CascadeTrace> cascade;

  bool ok() const { return status == Status::Ok; }
  bool denied() const { return status == Status::Denied; }
  Json to_json() const;
};

std::string_view to_string(Response::Status s);

struct TraceRecord {
  std::uint64_t seq = 0;
  Request request;
  Response response;
  Revision revision_after = 0;
};

Json trace_record_to_json(const TraceRecord& r);

/// Request gateway: every external principal reaches the data store only
/// through handle_request, and every committed write runs the routine
/// cascade before the response is returned.
class Platform {
 public:
  /// Link-button window, in committed operations.
  static constexpr Revision kLinkWindow = 30;

  Platform(std::shared_ptr<const HomeSchema> schema, PolicyDocument doc, std::uint64_t seed);
  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

  PolicyMode mode() const { return policy_.mode(); }
  const HomeSchema& schema() const { return *schema_; }
  std::shared_ptr<const HomeSchema> schema_ptr() const { return schema_; }
  DataStore& store() { return store_; }
  const DataStore& store() const { return store_; }
  PolicyEngine& policy() { return policy_; }
  const PolicyEngine& policy() const { return policy_; }
  RoutineEngine& routines() { return routines_; }
  const RoutineEngine& routines() const { return routines_; }
  BehaviorHost& behaviors() { return behaviors_; }

  ProductId register_product(const ProductManifest& manifest);
  Grant authorize(const ProductId& product, Consent consent = Consent::Granted);
  /// Issues a grant without a consent prompt (also registers the principal).
  Grant issue(const ProductId& product, std::set<PermissionId> permissions, Token token = {});
  void revoke(const Token& token);

  Response handle_request(const Request& req);
  Response get(const std::string& path, const Token& token);
  Response put(const std::string& path, const Value& body, const Token& token);
  Response del(const std::string& path, const Token& token);

  // Hue pairing. All throw Error{WrongPlatformMode} outside Hue modes.
  void press_link_button();
  void expire_link_button();
  int link_button_presses() const { return link_presses_; }
  /// Throws Error{LinkButtonNotPressed} unless config/linkbutton is true.
  Grant hue_create_user(const std::string& devicetype);
  /// Throws Error{UnknownTarget}; otherwise the DELETE response.
  Response hue_delete_user(const Token& caller, const Token& target);

  const std::vector<TraceRecord>& trace() const { return trace_; }
  void write_trace_jsonl(std::ostream& os) const;
  const std::vector<CascadeTrace>& cascades() const { return cascades_; }

  /// Copy of store and grants with no routines, behaviors or trace; used
  /// by the prober so probes never touch live state.
  std::unique_ptr<Platform> scratch_copy() const;

 private:
  Platform(std::shared_ptr<const HomeSchema> schema, DataStore store, PolicyEngine policy);

  void init_hue();
  Response run(const Request& req);
  Response read_subtree(const Path& prefix, const Token& token, const AccessContext& ctx);
  void run_cascade(const ChangeEvent& e, Response& resp);
  void maybe_reset_link_button();
  void require_hue() const;

  std::shared_ptr<const HomeSchema> schema_;
  DataStore store_;
  PolicyEngine policy_;
  BehaviorHost behaviors_;
  RoutineEngine routines_;
  std::vector<TraceRecord> trace_;
  std::vector<CascadeTrace> cascades_;
  int link_presses_ = 0;
  std::optional<Revision> link_armed_at_;
};

}  // namespace dsb

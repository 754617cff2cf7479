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

#include "dsb/platform.hpp"

#include <cctype>

namespace dsb {
namespace {

const Path& linkbutton_path() {
  static const Path p = Path::parse("config/linkbutton");
  return p;
}

const Path& whitelist_path() {
  static const Path p = Path::parse("config/whitelist");
  return p;
}

bool is_whitelist_entry(const Path& p) {
  return p.size() == 3 && p.parent() == whitelist_path();
}

std::string product_name_for(const std::string& devicetype) {
  std::string out;
  for (char c : devicetype) {
    const auto u = static_cast<unsigned char>(c);
    out += std::isalnum(u) || c == '_' || c == '-' ? static_cast<char>(std::tolower(u)) : '_';
  }
  return out.empty() ? "client" : out;
}

Response denied(DenyReason r) {
  Response resp;
  resp.status = Response::Status::Denied;
  resp.reason = r;
  resp.payload = std::string(to_string(r));
  return resp;
}

Response failed(Errc code, const std::string& detail) {
  Response resp;
  resp.status = Response::Status::Error;
  resp.error = code;
  resp.payload = detail;
  return resp;
}

void insert_fragment(Json& root, const std::vector<std::string>& segs, const Json& value) {
  Json* node = &root;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) node = &(*node)[segs[i]];
  (*node)[segs.back()] = value;
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Get: return "GET";
    case Method::Put: return "PUT";
    case Method::Delete: return "DELETE";
  }
  return "?";
}

Method method_from_string(std::string_view s) {
  if (s == "GET") return Method::Get;
  if (s == "PUT") return Method::Put;
  if (s == "DELETE") return Method::Delete;
  throw Error(Errc::InvalidMessage, "unknown method '" + std::string(s) + "'");
}

std::string_view to_string(Response::Status s) {
  switch (s) {
    case Response::Status::Ok: return "ok";
    case Response::Status::Denied: return "denied";
    case Response::Status::Error: return "error";
  }
  return "?";
}

Json Response::to_json() const {
  Json j{{"status", std::string(to_string(status))}, {"payload", payload}};
  if (reason) j["reason"] = std::string(to_string(*reason));
  if (error) j["error"] = std::string(to_string(*error));
  if (cascade) j["cascade"] = cascade->to_json();
  return j;
}

Json trace_record_to_json(const TraceRecord& r) {
  Json j;
  j["seq"] = r.seq;
  j["method"] = std::string(to_string(r.request.method));
  j["path"] = r.request.path;
  j["token"] = r.request.token;
  j["body"] = r.request.body ? value_to_json(*r.request.body) : Json();
  j["status"] = std::string(to_string(r.response.status));
  j["reason"] = r.response.reason ? Json(std::string(to_string(*r.response.reason))) : Json();
  j["error"] = r.response.error ? Json(std::string(to_string(*r.response.error))) : Json();
  j["payload"] = r.response.payload;
  j["revision"] = r.revision_after;
  return j;
}

Platform::Platform(std::shared_ptr<const HomeSchema> schema, PolicyDocument doc,
                   std::uint64_t seed)
    : Platform(schema, DataStore(schema), PolicyEngine((doc.validate(*schema), doc), schema, seed)) {
  if (is_hue(mode())) init_hue();
}

Platform::Platform(std::shared_ptr<const HomeSchema> schema, DataStore store, PolicyEngine policy)
    : schema_(std::move(schema)),
      store_(std::move(store)),
      policy_(std::move(policy)),
      behaviors_(store_),
      routines_(store_, policy_,
                [this](const ProductId& p, const std::string& cmd, Integrity chain) {
                  return behaviors_.run_command(p, cmd, chain);
                }) {
  if (is_hue(mode()) && store_.contains(linkbutton_path())) {
    store_.subscribe(linkbutton_path().str(), kSystemPrincipal, [this](const ChangeEvent& e) {
      if (e.new_value && values_equal(*e.new_value, Value(true))) {
        link_armed_at_ = e.revision;
      } else {
        link_armed_at_.reset();
      }
    });
  }
}

void Platform::init_hue() {
  for (const auto& coll : schema_->collections()) {
    if (coll.path != whitelist_path()) continue;
    for (const auto& [token, devicetype] : coll.initial_entries) {
      const auto* name = std::get_if<std::string>(&devicetype);
      const auto product = product_name_for(name ? *name : token);
      if (!policy_.product(product)) {
        ProductManifest m;
        m.name = product;
        m.permissions.push_back({policy_.hue_permission(), "Control the lights on this bridge",
                                 DeclaredIntent::ReadWrite, {}, std::nullopt, false});
        register_product(m);
      }
      issue(product, {policy_.hue_permission()}, token);
    }
  }
}

ProductId Platform::register_product(const ProductManifest& manifest) {
  auto id = policy_.register_product(manifest);
  store_.register_principal(id);
  return id;
}

Grant Platform::authorize(const ProductId& product, Consent consent) {
  return policy_.authorize(product, consent);
}

Grant Platform::issue(const ProductId& product, std::set<PermissionId> permissions, Token token) {
  return policy_.issue(product, std::move(permissions), std::move(token));
}

void Platform::revoke(const Token& token) { policy_.revoke(token); }

Response Platform::get(const std::string& path, const Token& token) {
  return handle_request({Method::Get, path, token, std::nullopt});
}

Response Platform::put(const std::string& path, const Value& body, const Token& token) {
  return handle_request({Method::Put, path, token, body});
}

Response Platform::del(const std::string& path, const Token& token) {
  return handle_request({Method::Delete, path, token, std::nullopt});
}

Response Platform::handle_request(const Request& req) {
  Response resp = run(req);
  maybe_reset_link_button();
  trace_.push_back({trace_.size() + 1, req, resp, store_.revision()});
  return resp;
}

Response Platform::run(const Request& req) {
  if ((req.method == Method::Put) != req.body.has_value()) {
    return failed(Errc::InvalidMessage, "PUT requires a body; GET/DELETE must not carry one");
  }
  try {
    const auto path = Path::parse(req.path);
    const auto ctx = access_context(store_);
    const AccessKind kind = req.method == Method::Get   ? AccessKind::Read
                            : req.method == Method::Put ? AccessKind::Write
                                                        : AccessKind::Delete;
    if (kind == AccessKind::Read && !store_.contains(path)) {
      return read_subtree(path, req.token, ctx);
    }
    const auto decision = policy_.check_access(req.token, path, kind, ctx);
    if (!decision) return denied(*decision.reason);

    Response resp;
    if (kind == AccessKind::Read) {
      resp.payload = value_to_json(store_.get(path));
      return resp;
    }

    const auto* grant = policy_.find_grant(req.token);
    const auto* product = policy_.product(grant->product);
    const WriteContext wctx{grant->product, product->integrity, Cause::external()};
    if (kind == AccessKind::Write) {
      std::optional<ChangeEvent> e;
      if (!store_.contains(path) && schema_->collection_for(path)) {
        e = store_.create(path, *req.body, wctx);
      } else {
        e = store_.set(path, *req.body, wctx);
      }
      if (e) run_cascade(*e, resp);
      resp.payload = value_to_json(store_.get(path));
      return resp;
    }

    const auto e = store_.erase(path, wctx);
    if (is_whitelist_entry(path)) {
      const auto* victim = policy_.find_grant(path.leaf());
      if (victim && !victim->revoked) policy_.revoke(victim->token);
    }
    run_cascade(e, resp);
    resp.payload = nullptr;
    return resp;
  } catch (const Error& e) {
    return failed(e.code(), e.what());
  }
}

Response Platform::read_subtree(const Path& prefix, const Token& token, const AccessContext& ctx) {
  const auto snap = store_.snapshot();
  Json fragment = Json::object();
  std::optional<DenyReason> first_deny;
  bool any = false;
  for (const auto& [key, value] : snap.values) {
    const auto p = Path::parse(key);
    if (!p.starts_with(prefix) || p == prefix) continue;
    any = true;
    const auto d = policy_.check_access(token, p, AccessKind::Read, ctx);
    if (!d) {
      if (!first_deny) first_deny = d.reason;
      continue;
    }
    const auto& segs = p.segments();
    insert_fragment(fragment, {segs.begin() + static_cast<long>(prefix.size()), segs.end()},
                    value_to_json(value));
  }
  if (!any) return failed(Errc::UnknownPath, prefix.str());
  if (fragment.empty()) return denied(*first_deny);
  Response resp;
  resp.payload = std::move(fragment);
  return resp;
}

void Platform::run_cascade(const ChangeEvent& e, Response& resp) {
  cascades_.push_back(routines_.on_commit(e));
  resp.cascade = cascades_.back();
}

void Platform::require_hue() const {
  if (!is_hue(mode())) throw Error(Errc::WrongPlatformMode, std::string(to_string(mode())));
}

void Platform::press_link_button() {
  require_hue();
  ++link_presses_;
  store_.set(linkbutton_path(), true, WriteContext::system());
  // Re-pressing an open window restarts it.
  link_armed_at_ = store_.revision();
}

void Platform::expire_link_button() {
  require_hue();
  store_.set(linkbutton_path(), false, WriteContext::system());
  link_armed_at_.reset();
}

void Platform::maybe_reset_link_button() {
  if (!link_armed_at_ || store_.revision() - *link_armed_at_ < kLinkWindow) return;
  expire_link_button();
}

Grant Platform::hue_create_user(const std::string& devicetype) {
  require_hue();
  if (!access_context(store_).link_window_open) {
    throw Error(Errc::LinkButtonNotPressed, "config/linkbutton is false");
  }
  const auto product = product_name_for(devicetype);
  if (!policy_.product(product)) {
    ProductManifest m;
    m.name = product;
    m.permissions.push_back({policy_.hue_permission(), "Control the lights on this bridge",
                             DeclaredIntent::ReadWrite, {}, std::nullopt, false});
    register_product(m);
  }
  auto grant = issue(product, {policy_.hue_permission()});
  store_.create(whitelist_path().child(grant.token), devicetype, WriteContext::system());
  maybe_reset_link_button();
  return grant;
}

Response Platform::hue_delete_user(const Token& caller, const Token& target) {
  require_hue();
  if (!is_valid_segment(target) || !store_.contains(whitelist_path().child(target))) {
    throw Error(Errc::UnknownTarget, target);
  }
  return del(whitelist_path().child(target).str(), caller);
}

void Platform::write_trace_jsonl(std::ostream& os) const {
  for (const auto& r : trace_) os << trace_record_to_json(r).dump() << '\n';
}

std::unique_ptr<Platform> Platform::scratch_copy() const {
  return std::unique_ptr<Platform>(new Platform(schema_, store_.fork(), policy_));
}

}  // namespace dsb

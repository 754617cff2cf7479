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

#include "dsb/behaviors.hpp"

#include "dsb/error.hpp"

namespace dsb {

BehaviorHost::~BehaviorHost() {
  for (auto& [_, e] : products_) {
    for (auto id : e.subscriptions) store_.unsubscribe(id);
  }
}

void BehaviorHost::attach(const ProductManifest& manifest, Integrity integrity) {
  if (products_.count(manifest.name)) {
    throw Error(Errc::InvalidManifest, manifest.name + " already attached");
  }
  const auto& schema = store_.schema();
  auto check_effects = [&](const std::vector<Effect>& effects, const PathPattern* watch) {
    for (const auto& eff : effects) {
      const auto target = manifest.device->child(eff.variable);
      const auto* spec = schema.find_static(target);
      if (!spec) {
        throw Error(Errc::InvalidManifest, manifest.name + ": no device variable " + target.str());
      }
      if (eff.value) {
        if (!conforms(*eff.value, spec->type)) {
          throw Error(Errc::InvalidManifest, manifest.name + ": bad value for " + target.str());
        }
        continue;
      }
      if (!watch) throw Error(Errc::InvalidManifest, manifest.name + ": commands cannot mirror");
      for (const auto& v : schema.variables()) {
        if (watch->matches(v.path) && v.type.kind != spec->type.kind) {
          throw Error(Errc::InvalidManifest,
                      manifest.name + ": cannot mirror " + v.path.str() + " into " + target.str());
        }
      }
    }
  };
  for (const auto& b : manifest.behaviors) check_effects(b.effects, &b.watch);
  for (const auto& c : manifest.commands) check_effects(c.effects, nullptr);

  auto& e = products_[manifest.name];
  e.manifest = manifest;
  e.integrity = integrity;
  for (const auto& b : manifest.behaviors) {
    const auto name = manifest.name;
    e.subscriptions.push_back(store_.subscribe(
        b.watch.str(), name, [this, name](const ChangeEvent& ev) { step_behavior(name, ev); }));
  }
}

const BehaviorHost::Entry& BehaviorHost::entry(const ProductId& product) const {
  auto it = products_.find(product);
  if (it == products_.end()) throw Error(Errc::UnknownProduct, product);
  return it->second;
}

std::vector<ChangeEvent> BehaviorHost::step_behavior(const ProductId& product,
                                                     const ChangeEvent& event) {
  const auto& e = entry(product);
  std::vector<ChangeEvent> out;
  for (const auto& rule : e.manifest.behaviors) {
    if (!rule.watch.matches(event.path) || !rule.when.matches(event)) continue;
    auto effects = apply(e, rule.effects, &event,
                         min_integrity(event.writer_integrity, e.integrity), product);
    out.insert(out.end(), effects.begin(), effects.end());
  }
  return out;
}

std::vector<ChangeEvent> BehaviorHost::run_command(const ProductId& product,
                                                   const std::string& command, Integrity chain) {
  const auto& e = entry(product);
  for (const auto& c : e.manifest.commands) {
    if (c.name == command) {
      return apply(e, c.effects, nullptr, min_integrity(chain, e.integrity), product);
    }
  }
  throw Error(Errc::UnknownTarget, product + " has no command " + command);
}

std::vector<ChangeEvent> BehaviorHost::apply(const Entry& e, const std::vector<Effect>& effects,
                                             const ChangeEvent* trigger, Integrity chain,
                                             const std::string& cause_ref) {
  std::vector<ChangeEvent> out;
  const WriteContext ctx{e.manifest.name, chain, Cause::device(cause_ref)};
  for (const auto& eff : effects) {
    std::optional<Value> v = eff.value;
    if (eff.mirror && trigger) v = trigger->new_value;
    if (!v) continue;  // mirrored tombstone
    if (auto ev = store_.set(e.manifest.device->child(eff.variable), *v, ctx)) {
      out.push_back(std::move(*ev));
    }
  }
  return out;
}

}  // namespace dsb

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

#include <map>
#include <string>
#include <vector>

#include "dsb/datastore.hpp"
#include "dsb/manifest.hpp"

namespace dsb {

/// Runs product-internal reaction rules. Effects only ever touch variables
/// under the product's own device subtree and commit with
/// cause=device-behavior.
class BehaviorHost {
 public:
  explicit BehaviorHost(DataStore& store) : store_(store) {}
  BehaviorHost(const BehaviorHost&) = delete;
  BehaviorHost& operator=(const BehaviorHost&) = delete;
  ~BehaviorHost();

  /// Validates effect targets against the schema and subscribes the
  /// product's rules. Throws Error{InvalidManifest}.
  void attach(const ProductManifest& manifest, Integrity integrity);
  bool attached(const ProductId& product) const { return products_.count(product) > 0; }

  /// Applies `product`'s rules to `event`. Throws Error{UnknownProduct}.
  std::vector<ChangeEvent> step_behavior(const ProductId& product, const ChangeEvent& event);

  /// Throws Error{UnknownProduct} or Error{UnknownTarget} (no such command).
  std::vector<ChangeEvent> run_command(const ProductId& product, const std::string& command,
                                       Integrity chain);

 private:
  struct Entry {
    ProductManifest manifest;
    Integrity integrity;
    std::vector<SubscriptionId> subscriptions;
  };

  const Entry& entry(const ProductId& product) const;
  std::vector<ChangeEvent> apply(const Entry& e, const std::vector<Effect>& effects,
                                 const ChangeEvent* trigger, Integrity chain,
                                 const std::string& cause_ref);

  DataStore& store_;
  std::map<ProductId, Entry> products_;
};

}  // namespace dsb

// Copyright 2026 The Declip Lab Authors.
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

#ifndef DECLIP_TOOLS_JSON_CONFIG_HPP_
#define DECLIP_TOOLS_JSON_CONFIG_HPP_

#include <istream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace declip::tools {

// Reads CLI11 options from a JSON object. Nested objects name subcommands,
// e.g. {"train": {"epochs": 5}} sets `train --epochs 5`.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    return dump(app, default_also).dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config: top level must be an object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        collect(value, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static nlohmann::json dump(const CLI::App* app, bool default_also) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto* opt : app->get_options()) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const auto& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& r = opt->results();
        j[name] = r.size() == 1 ? nlohmann::json(r.front()) : nlohmann::json(r);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const auto* sub : app->get_subcommands({})) {
      auto child = dump(sub, default_also);
      if (!child.empty()) j[sub->get_name()] = child;
    }
    return j;
  }
};

}  // namespace declip::tools

#endif  // DECLIP_TOOLS_JSON_CONFIG_HPP_

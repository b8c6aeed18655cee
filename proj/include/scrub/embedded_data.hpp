#pragma once

#include <string_view>

// Copies of data/lang_map.json and data/secret_rules.yaml baked in at build time.
namespace scrub::embedded {

std::string_view lang_map_json();
std::string_view secret_rules_yaml();

}  // namespace scrub::embedded

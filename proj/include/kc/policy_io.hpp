#pragma once

#include <string>

#include "kc/policy.hpp"

namespace kc {

/// JSON text for a policy. Rule-backed adaptive policies have no table and
/// cannot be written; they throw InvalidPolicy.
std::string policy_to_json_text(const Policy& policy);
Policy policy_from_json_text(const std::string& text);

void write_policy(const Policy& policy, const std::string& path);
Policy read_policy(const std::string& path);

}  // namespace kc

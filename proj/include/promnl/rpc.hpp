// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "promnl/engine.hpp"

namespace promnl {

namespace rpc_code {
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;
inline constexpr int kToolError = -32000;
}  // namespace rpc_code

struct ToolDescriptor {
  std::string name;
  std::string description;
  /// JSON-schema style: {"type":"object","properties":{...},"required":[...]}.
  nlohmann::json input_schema;
  std::function<nlohmann::json(const nlohmann::json& params)> handler;
};

/// JSON-RPC 2.0 front end. Each tool is callable directly as a method and via
/// "tools/call"; "tools/list" enumerates them. Batches and notifications are
/// supported.
class RpcService {
 public:
  explicit RpcService(const Engine& engine);

  const std::vector<ToolDescriptor>& tools() const noexcept { return tools_; }

  /// nullopt when nothing should be sent back (notifications only).
  std::optional<nlohmann::json> handle(const nlohmann::json& message) const;
  std::optional<std::string> handle_text(std::string_view body) const;

 private:
  nlohmann::json handle_single(const nlohmann::json& request, bool& respond) const;
  nlohmann::json dispatch(const std::string& method, const nlohmann::json& params) const;
  const ToolDescriptor* find(std::string_view name) const;

  const Engine& engine_;
  std::vector<ToolDescriptor> tools_;
};

/// Checks `params` against a tool's input schema. Returns an error message or
/// an empty string.
std::string check_params(const nlohmann::json& schema, const nlohmann::json& params);

}  // namespace promnl

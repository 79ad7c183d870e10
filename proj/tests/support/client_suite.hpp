// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "promnl/prom_client.hpp"

namespace promnl::testing {

/// Builds a client that serves the given fixture directory.
using ClientFactory = std::function<std::shared_ptr<PromClient>(const std::filesystem::path& fixture_dir)>;

struct SuiteOutcome {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty() && checks > 0; }
};

/// The behavioural contract every PromClient backend must meet. Runs against
/// the shipped fixtures and the tests/fixtures variants.
SuiteOutcome run_client_interface_suite(const ClientFactory& make);

}  // namespace promnl::testing

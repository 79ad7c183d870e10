// SPDX-License-Identifier: Apache-2.0
#include "promnl/errors.hpp"

namespace promnl {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Input: return "input";
    case ErrorKind::Config: return "config";
    case ErrorKind::NoMetricFound: return "no_metric_found";
    case ErrorKind::Transport: return "transport";
    case ErrorKind::Api: return "api";
    case ErrorKind::Query: return "query";
    case ErrorKind::Repair: return "repair";
  }
  return "unknown";
}

}  // namespace promnl

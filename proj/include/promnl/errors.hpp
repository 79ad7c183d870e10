// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace promnl {

enum class ErrorKind {
  Parse,
  Validation,
  Input,
  Config,
  NoMetricFound,
  Transport,
  Api,
  Query,
  Repair,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed JSON input; carries the byte offset reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : Error(ErrorKind::Parse, message), byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// A query the repair pass could not fix. The original text is kept intact.
class RepairError : public Error {
 public:
  RepairError(const std::string& message, std::string original)
      : Error(ErrorKind::Repair, message), original_(std::move(original)) {}

  const std::string& original() const noexcept { return original_; }

 private:
  std::string original_;
};

/// Prometheus answered with an error body. `error_type` is Prometheus's errorType.
class ApiError : public Error {
 public:
  ApiError(ErrorKind kind, const std::string& message, int http_status, std::string error_type)
      : Error(kind, message), http_status_(http_status), error_type_(std::move(error_type)) {}

  int http_status() const noexcept { return http_status_; }
  const std::string& error_type() const noexcept { return error_type_; }

 private:
  int http_status_;
  std::string error_type_;
};

/// Failure inside one stage of the question pipeline.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, ErrorKind inner, const std::string& message)
      : Error(inner, stage + ": " + message), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace promnl

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ltlgrid {

enum class ErrorCode {
  syntax,
  validation,
  resource,
  io,
  integrity,
  missing_edge,
  no_progress,
  invariant,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message), code_(code), offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  // byte offset into the parsed text, when the error comes from a parser
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace ltlgrid

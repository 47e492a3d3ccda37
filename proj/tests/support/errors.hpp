#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <optional>

#include "atelier/error.hpp"

namespace atelier::testkit {

/// Code of the atelier::Error thrown by `fn`, or nullopt when none is thrown.
inline std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace atelier::testkit

#pragma once

#include <stdexcept>
#include <string>

namespace depgen {

struct DepgenError : std::runtime_error {
  explicit DepgenError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace depgen

#include "invplan/error.hpp"

namespace invplan {

namespace {

std::string join(const std::vector<std::string>& problems) {
  std::string out = "scenario is invalid";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

}  // namespace invplan

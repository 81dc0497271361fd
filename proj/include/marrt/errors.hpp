#pragma once

#include <stdexcept>
#include <string>

namespace marrt {

struct InvalidCell : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InfeasibleInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation requested on a tree in the wrong state (e.g. nearest on empty).
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

struct UndefinedReference : std::domain_error {
  using std::domain_error::domain_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace marrt

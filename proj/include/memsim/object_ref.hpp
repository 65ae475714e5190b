#pragma once

#include <compare>
#include <string>

namespace memsim {

// Room-scoped object identity, rendered as `name(id)`.
struct ObjectRef {
  std::string name;
  int id = 0;

  auto operator<=>(const ObjectRef&) const = default;
  bool operator==(const ObjectRef&) const = default;

  std::string str() const { return name + "(" + std::to_string(id) + ")"; }
};

// Parses `name(id)`; throws InputError on anything else.
ObjectRef parse_object_ref(const std::string& text);

}  // namespace memsim

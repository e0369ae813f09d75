#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>

namespace occ {

/// Dense index into one of the model or log tables. The tag keeps place,
/// transition, object and event indices from being mixed up.
template <class Tag>
struct Index {
  std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

  constexpr Index() = default;
  constexpr explicit Index(std::uint32_t v) : value(v) {}
  constexpr explicit Index(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
  constexpr explicit Index(int v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t get() const { return value; }
  constexpr bool valid() const { return value != std::numeric_limits<std::uint32_t>::max(); }

  friend constexpr auto operator<=>(Index, Index) = default;
};

using TypeIdx = Index<struct TypeTag>;
using PlaceIdx = Index<struct PlaceTag>;
using TransitionIdx = Index<struct TransitionTag>;
using ObjectIdx = Index<struct ObjectTag>;
using EventIdx = Index<struct EventTag>;

}  // namespace occ

template <class Tag>
struct std::hash<occ::Index<Tag>> {
  std::size_t operator()(occ::Index<Tag> i) const noexcept { return std::hash<std::uint32_t>{}(i.value); }
};

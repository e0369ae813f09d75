#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "occ/ids.hpp"

namespace occ {

struct Token {
  PlaceIdx place;
  ObjectIdx object;

  friend constexpr auto operator<=>(const Token&, const Token&) = default;
};

/// Multiset of tokens. Entries are kept sorted by (place, object) with
/// positive counts, so equality, ordering and hashing are canonical.
class Marking {
 public:
  struct Entry {
    Token token;
    std::uint32_t count;

    friend constexpr auto operator<=>(const Entry&, const Entry&) = default;
  };

  Marking() = default;
  Marking(std::initializer_list<Token> tokens);

  void add(Token t, std::uint32_t n = 1);
  /// Removes `n` copies of `t`; returns false and leaves the marking
  /// untouched if fewer are present.
  bool remove(Token t, std::uint32_t n = 1);

  std::uint32_t count(Token t) const;
  /// `other` <= `*this` as multisets.
  bool contains(const Marking& other) const;

  Marking& operator+=(const Marking& other);
  /// Requires contains(other).
  Marking& operator-=(const Marking& other);
  friend Marking operator+(Marking a, const Marking& b) { return a += b; }
  friend Marking operator-(Marking a, const Marking& b) { return a -= b; }

  /// Number of tokens counted with multiplicity.
  std::size_t total() const;
  bool empty() const { return entries_.empty(); }
  std::span<const Entry> entries() const { return entries_; }

  /// Entries of one place, contiguous thanks to the sort order.
  std::span<const Entry> in_place(PlaceIdx p) const;

  std::size_t hash() const;

  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking& a, const Marking& b) { return a.entries_ <=> b.entries_; }

 private:
  std::vector<Entry> entries_;
};

/// Invariant of a marking under renaming objects: the sorted multiset of
/// per-object token signatures. Two markings map to the same shape iff one
/// is the other with objects renamed (types follow from the places).
using MarkingShape = std::vector<std::vector<std::pair<PlaceIdx, std::uint32_t>>>;
MarkingShape marking_shape(const Marking& m);

struct MarkingHash {
  std::size_t operator()(const Marking& m) const noexcept { return m.hash(); }
};

}  // namespace occ

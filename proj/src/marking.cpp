#include "occ/marking.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace occ {

namespace {

auto find_entry(auto& entries, Token t) {
  return std::lower_bound(entries.begin(), entries.end(), t,
                          [](const Marking::Entry& e, const Token& tok) { return e.token < tok; });
}

}  // namespace

Marking::Marking(std::initializer_list<Token> tokens) {
  for (const auto& t : tokens) add(t);
}

void Marking::add(Token t, std::uint32_t n) {
  if (n == 0) return;
  auto it = find_entry(entries_, t);
  if (it != entries_.end() && it->token == t) it->count += n;
  else entries_.insert(it, Entry{t, n});
}

bool Marking::remove(Token t, std::uint32_t n) {
  if (n == 0) return true;
  auto it = find_entry(entries_, t);
  if (it == entries_.end() || it->token != t || it->count < n) return false;
  it->count -= n;
  if (it->count == 0) entries_.erase(it);
  return true;
}

std::uint32_t Marking::count(Token t) const {
  auto it = find_entry(entries_, t);
  return (it != entries_.end() && it->token == t) ? it->count : 0;
}

bool Marking::contains(const Marking& other) const {
  auto it = entries_.begin();
  for (const auto& e : other.entries_) {
    while (it != entries_.end() && it->token < e.token) ++it;
    if (it == entries_.end() || it->token != e.token || it->count < e.count) return false;
  }
  return true;
}

Marking& Marking::operator+=(const Marking& other) {
  std::vector<Entry> merged;
  merged.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->token < b->token)) {
      merged.push_back(*a++);
    } else if (a == entries_.end() || b->token < a->token) {
      merged.push_back(*b++);
    } else {
      merged.push_back({a->token, a->count + b->count});
      ++a;
      ++b;
    }
  }
  entries_ = std::move(merged);
  return *this;
}

Marking& Marking::operator-=(const Marking& other) {
  for (const auto& e : other.entries_) {
    [[maybe_unused]] bool ok = remove(e.token, e.count);
    assert(ok && "subtracting a marking that is not contained");
  }
  return *this;
}

std::size_t Marking::total() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.count;
  return n;
}

std::span<const Marking::Entry> Marking::in_place(PlaceIdx p) const {
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), p,
                             [](const Entry& e, PlaceIdx place) { return e.token.place < place; });
  auto hi = std::upper_bound(lo, entries_.end(), p,
                             [](PlaceIdx place, const Entry& e) { return place < e.token.place; });
  return {lo, hi};
}

std::size_t Marking::hash() const {
  // FNV-1a over (place, object, count) triples.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& e : entries_) {
    mix(e.token.place.value);
    mix(e.token.object.value);
    mix(e.count);
  }
  return static_cast<std::size_t>(h);
}

MarkingShape marking_shape(const Marking& m) {
  std::map<ObjectIdx, std::vector<std::pair<PlaceIdx, std::uint32_t>>> per_object;
  for (const auto& e : m.entries()) per_object[e.token.object].emplace_back(e.token.place, e.count);
  MarkingShape shape;
  shape.reserve(per_object.size());
  for (auto& [o, sig] : per_object) {
    std::ranges::sort(sig);
    shape.push_back(std::move(sig));
  }
  std::ranges::sort(shape);
  return shape;
}

}  // namespace occ

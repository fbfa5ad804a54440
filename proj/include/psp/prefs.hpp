#pragma once

// Strict preference orders over a small set of objects.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psp {

/// Dense index of an object within a setting. Index order is used only for
/// canonical serialization, never as a preference.
struct ObjectId {
  std::uint32_t index = 0;

  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};

/// Largest object count for which all m! orders may be enumerated.
inline constexpr std::size_t kMaxEnumeratedObjects = 8;

/// A strict ranking of all m objects, most preferred first.
class PreferenceOrder {
 public:
  PreferenceOrder() = default;

  /// Throws std::invalid_argument unless `ranking` is a permutation of 0..m-1.
  explicit PreferenceOrder(std::vector<ObjectId> ranking);

  /// Convenience for tests and literals: PreferenceOrder::of({2, 0, 3, 1}).
  static PreferenceOrder of(std::initializer_list<std::uint32_t> ranking);

  std::size_t size() const { return ranking_.size(); }
  ObjectId operator[](std::size_t position) const { return ranking_[position]; }
  std::span<const ObjectId> ranking() const { return ranking_; }

  /// Zero-based position of `object` (0 = top). Throws std::domain_error for
  /// objects outside the universe.
  std::size_t position(ObjectId object) const;

  /// True iff `a` is ranked strictly above `b`.
  bool prefers(ObjectId a, ObjectId b) const { return position(a) < position(b); }

  /// Copy with the objects at positions k and k+1 swapped.
  PreferenceOrder swapped(std::size_t k) const;

  friend bool operator==(const PreferenceOrder& a, const PreferenceOrder& b) {
    return a.ranking_ == b.ranking_;
  }
  friend auto operator<=>(const PreferenceOrder& a, const PreferenceOrder& b) {
    return a.ranking_ <=> b.ranking_;
  }

 private:
  std::vector<ObjectId> ranking_;
  std::vector<std::uint32_t> positions_;
};

using PreferenceProfile = std::vector<PreferenceOrder>;

/// All m! orders in lexicographic order of their rankings.
/// Throws EnumerationLimitError unless 1 <= m <= kMaxEnumeratedObjects.
std::vector<PreferenceOrder> all_preference_orders(std::size_t m);

/// Position of `order` in the sequence returned by all_preference_orders.
std::size_t order_index(const PreferenceOrder& order);

std::size_t factorial(std::size_t m);

/// The m-1 orders reachable by one adjacent transposition, in order of the
/// swapped position (top pair first).
std::vector<PreferenceOrder> neighborhood(const PreferenceOrder& order);

bool is_neighbor(const PreferenceOrder& a, const PreferenceOrder& b);

/// 1 + number of objects ranked above `object`.
std::size_t rank(const PreferenceOrder& order, ObjectId object);

/// Bubble-sort path from `from` to `to`. Each phase takes the highest object
/// under `to` that is not yet in its final position and swaps it upward until
/// it is. The result starts with `from`, ends with `to`, and consecutive
/// elements differ by exactly one adjacent transposition.
std::vector<PreferenceOrder> canonical_transition(const PreferenceOrder& from,
                                                  const PreferenceOrder& to);

/// Default display names: a, b, c, ... (then o8, o9, ... past 26).
std::vector<std::string> default_object_names(std::size_t m);

/// "a>b>c" rendering.
std::string format_order(const PreferenceOrder& order, std::span<const std::string> names);

/// Parses "a>b>c" against the given names. Throws ParseError.
PreferenceOrder parse_order(std::string_view text, std::span<const std::string> names);

/// Parses "a>b>c" and derives the name list from the letters used, sorted.
/// Used by the CLI where no mechanism file supplies names.
PreferenceOrder parse_order_with_letters(std::string_view text,
                                         std::vector<std::string>& names);

}  // namespace psp

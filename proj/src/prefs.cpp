#include "psp/prefs.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "psp/errors.hpp"

namespace psp {

PreferenceOrder::PreferenceOrder(std::vector<ObjectId> ranking) : ranking_(std::move(ranking)) {
  const auto m = ranking_.size();
  positions_.assign(m, static_cast<std::uint32_t>(m));
  for (std::size_t k = 0; k < m; ++k) {
    auto idx = ranking_[k].index;
    if (idx >= m || positions_[idx] != m) {
      throw std::invalid_argument("preference order is not a permutation");
    }
    positions_[idx] = static_cast<std::uint32_t>(k);
  }
}

PreferenceOrder PreferenceOrder::of(std::initializer_list<std::uint32_t> ranking) {
  std::vector<ObjectId> ids;
  ids.reserve(ranking.size());
  for (auto i : ranking) ids.push_back(ObjectId{i});
  return PreferenceOrder(std::move(ids));
}

std::size_t PreferenceOrder::position(ObjectId object) const {
  if (object.index >= positions_.size()) {
    throw std::domain_error("object " + std::to_string(object.index) +
                            " is not in the preference universe");
  }
  return positions_[object.index];
}

PreferenceOrder PreferenceOrder::swapped(std::size_t k) const {
  PreferenceOrder out = *this;
  std::swap(out.ranking_[k], out.ranking_[k + 1]);
  out.positions_[out.ranking_[k].index] = static_cast<std::uint32_t>(k);
  out.positions_[out.ranking_[k + 1].index] = static_cast<std::uint32_t>(k + 1);
  return out;
}

std::size_t factorial(std::size_t m) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= m; ++k) f *= k;
  return f;
}

std::vector<PreferenceOrder> all_preference_orders(std::size_t m) {
  if (m < 1 || m > kMaxEnumeratedObjects) {
    throw EnumerationLimitError("cannot enumerate preference orders for m = " +
                                std::to_string(m) + " (supported: 1..." +
                                std::to_string(kMaxEnumeratedObjects) + ")");
  }
  std::vector<ObjectId> ranking(m);
  for (std::size_t k = 0; k < m; ++k) ranking[k] = ObjectId{static_cast<std::uint32_t>(k)};
  std::vector<PreferenceOrder> out;
  out.reserve(factorial(m));
  do {
    out.emplace_back(ranking);
  } while (std::next_permutation(ranking.begin(), ranking.end()));
  return out;
}

std::size_t order_index(const PreferenceOrder& order) {
  // Lehmer code read as a factorial-base number.
  const auto m = order.size();
  std::size_t index = 0;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t smaller_later = 0;
    for (std::size_t l = k + 1; l < m; ++l) {
      if (order[l] < order[k]) ++smaller_later;
    }
    index = index * (m - k) + smaller_later;
  }
  return index;
}

std::vector<PreferenceOrder> neighborhood(const PreferenceOrder& order) {
  std::vector<PreferenceOrder> out;
  if (order.size() < 2) return out;
  out.reserve(order.size() - 1);
  for (std::size_t k = 0; k + 1 < order.size(); ++k) out.push_back(order.swapped(k));
  return out;
}

bool is_neighbor(const PreferenceOrder& a, const PreferenceOrder& b) {
  if (a.size() != b.size()) return false;
  std::size_t first = a.size();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != b[k]) {
      first = k;
      break;
    }
  }
  if (first + 1 >= a.size()) return false;
  return a.swapped(first) == b;
}

std::size_t rank(const PreferenceOrder& order, ObjectId object) {
  return order.position(object) + 1;
}

std::vector<PreferenceOrder> canonical_transition(const PreferenceOrder& from,
                                                  const PreferenceOrder& to) {
  if (from.size() != to.size()) {
    throw std::invalid_argument("canonical_transition: orders have different universes");
  }
  std::vector<PreferenceOrder> path{from};
  PreferenceOrder current = from;
  for (std::size_t target = 0; target < to.size(); ++target) {
    std::size_t at = current.position(to[target]);
    while (at > target) {
      current = current.swapped(at - 1);
      path.push_back(current);
      --at;
    }
  }
  return path;
}

std::vector<std::string> default_object_names(std::size_t m) {
  std::vector<std::string> names;
  names.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    names.push_back(k < 26 ? std::string(1, static_cast<char>('a' + k)) : "o" + std::to_string(k));
  }
  return names;
}

std::string format_order(const PreferenceOrder& order, std::span<const std::string> names) {
  std::string out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k) out += '>';
    out += names[order[k].index];
  }
  return out;
}

namespace {

std::vector<std::string> split_order(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto gt = text.find('>', start);
    auto piece = text.substr(start, gt == std::string_view::npos ? text.npos : gt - start);
    // trim spaces
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    parts.emplace_back(piece);
    if (gt == std::string_view::npos) break;
    start = gt + 1;
  }
  return parts;
}

}  // namespace

PreferenceOrder parse_order(std::string_view text, std::span<const std::string> names) {
  auto parts = split_order(text);
  if (parts.size() != names.size()) {
    throw ParseError("order '" + std::string(text) + "' must rank exactly " +
                     std::to_string(names.size()) + " objects");
  }
  std::vector<ObjectId> ids;
  ids.reserve(parts.size());
  for (const auto& part : parts) {
    auto it = std::find(names.begin(), names.end(), part);
    if (it == names.end()) {
      throw ParseError("unknown object '" + part + "' in order '" + std::string(text) + "'");
    }
    ids.push_back(ObjectId{static_cast<std::uint32_t>(it - names.begin())});
  }
  try {
    return PreferenceOrder(std::move(ids));
  } catch (const std::invalid_argument&) {
    throw ParseError("order '" + std::string(text) + "' repeats an object");
  }
}

PreferenceOrder parse_order_with_letters(std::string_view text, std::vector<std::string>& names) {
  auto parts = split_order(text);
  names = parts;
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw ParseError("order '" + std::string(text) + "' repeats an object");
  }
  return parse_order(text, names);
}

}  // namespace psp

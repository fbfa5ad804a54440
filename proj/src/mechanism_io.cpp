#include "psp/mechanism_io.hpp"

#include <fstream>
#include <sstream>

#include "psp/errors.hpp"

namespace psp {

using nlohmann::json;

json mechanism_to_json(const TabulatedMechanism& mech) {
  const auto& setting = mech.setting();
  json doc;
  doc["setting"] = {{"n", setting.n}, {"m", setting.m}, {"q", setting.q}};
  doc["objects"] = mech.names();
  json table = json::array();
  for (std::size_t p = 0; p < mech.profile_count(); ++p) {
    json entry;
    json profile = json::array();
    for (std::size_t i = 0; i < setting.n; ++i) {
      profile.push_back(format_order(mech.orders()[mech.report(p, i)], mech.names()));
    }
    json rows = json::array();
    for (std::size_t i = 0; i < setting.n; ++i) {
      json row = json::array();
      for (const auto& v : mech.row(p, i)) row.push_back(to_string(v));
      rows.push_back(std::move(row));
    }
    entry["profile"] = std::move(profile);
    entry["assignment"] = std::move(rows);
    table.push_back(std::move(entry));
  }
  doc["table"] = std::move(table);
  return doc;
}

namespace {

std::size_t require_count(const json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number_integer() || node[key].get<long long>() < 0) {
    throw ParseError(std::string("setting.") + key + " must be a non-negative integer");
  }
  return node[key].get<std::size_t>();
}

Rational parse_entry(const json& value, const std::string& where) {
  try {
    if (value.is_number_integer()) return Rational(value.get<long>());
    if (value.is_string()) return parse_canonical_rational(value.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(std::string(e.what()) + " in " + where);
  }
  throw ParseError("assignment entries must be rational strings or integers in " + where);
}

}  // namespace

TabulatedMechanism mechanism_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("setting") || !doc.contains("objects") ||
      !doc.contains("table")) {
    throw ParseError("mechanism file needs 'setting', 'objects' and 'table'");
  }
  const auto& s = doc["setting"];
  Setting setting;
  setting.n = require_count(s, "n");
  setting.m = require_count(s, "m");
  if (!s.contains("q") || !s["q"].is_array()) throw ParseError("setting.q must be an array");
  for (const auto& c : s["q"]) {
    if (!c.is_number_integer() || c.get<long long>() < 0) {
      throw ParseError("capacities must be non-negative integers");
    }
    setting.q.push_back(c.get<std::uint32_t>());
  }
  if (!doc["objects"].is_array()) throw ParseError("'objects' must be an array of names");
  std::vector<std::string> names;
  for (const auto& name : doc["objects"]) {
    if (!name.is_string()) throw ParseError("object names must be strings");
    auto text = name.get<std::string>();
    if (text.empty() || text.find('>') != std::string::npos) {
      throw ParseError("object name '" + text + "' is empty or contains '>'");
    }
    names.push_back(std::move(text));
  }
  TabulatedMechanism::Assembler assembler(setting, names);
  if (!doc["table"].is_array()) throw ParseError("'table' must be an array");
  for (const auto& entry : doc["table"]) {
    if (!entry.contains("profile") || !entry["profile"].is_array() ||
        entry["profile"].size() != setting.n) {
      throw ParseError("table entry needs a 'profile' with one order per agent");
    }
    PreferenceProfile profile;
    std::string label = "[";
    for (const auto& order : entry["profile"]) {
      if (!order.is_string()) throw ParseError("profile orders must be strings");
      auto text = order.get<std::string>();
      label += (label.size() > 1 ? ", " : "") + text;
      profile.push_back(parse_order(text, names));
    }
    label += "]";
    if (!entry.contains("assignment") || !entry["assignment"].is_array() ||
        entry["assignment"].size() != setting.n) {
      throw ParseError("profile " + label + " needs an n x m 'assignment'");
    }
    AssignmentMatrix x;
    for (const auto& row : entry["assignment"]) {
      if (!row.is_array() || row.size() != setting.m) {
        throw ParseError("profile " + label + " has a row of the wrong length");
      }
      AssignmentVector v;
      for (const auto& value : row) v.push_back(parse_entry(value, "profile " + label));
      x.push_back(std::move(v));
    }
    assembler.set(assembler.profile_index(profile), x);
  }
  return std::move(assembler).finish();
}

std::string dump_mechanism(const TabulatedMechanism& mech) {
  return mechanism_to_json(mech).dump(2) + "\n";
}

TabulatedMechanism load_mechanism(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mechanism file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return mechanism_from_json(doc);
}

void save_mechanism(const TabulatedMechanism& mech, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_mechanism(mech);
}

}  // namespace psp

#pragma once

// JSON mechanism-table files.
//
//   {"setting": {"n": 2, "m": 3, "q": [1, 1, 1]},
//    "objects": ["a", "b", "c"],
//    "table": [{"profile": ["a>b>c", "b>a>c"],
//               "assignment": [["1/2", "0", "1/2"], ...]}, ...]}
//
// Rationals are "p/q" strings in lowest terms; integers may be written as
// JSON numbers or "k". Every one of the (m!)^n profiles must appear once.

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "psp/assign.hpp"

namespace psp {

nlohmann::json mechanism_to_json(const TabulatedMechanism& mech);

/// Throws ParseError for malformed content and ValidationError for missing,
/// duplicate or infeasible profiles (the message names the profile).
TabulatedMechanism mechanism_from_json(const nlohmann::json& doc);

/// Canonical serialized text (two-space indented JSON, trailing newline).
std::string dump_mechanism(const TabulatedMechanism& mech);

TabulatedMechanism load_mechanism(const std::filesystem::path& path);
void save_mechanism(const TabulatedMechanism& mech, const std::filesystem::path& path);

}  // namespace psp

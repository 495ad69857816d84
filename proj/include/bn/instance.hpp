#pragma once

#include "bn/structures.hpp"

#include <optional>
#include <string>

namespace bn {

// JSON instance files.
//
// Algebroid object:
//   { "dim": d,
//     "twist": { "F2": [[i, j, "poly"], ...],
//                "H3": [[i, j, k, "poly"], ...] } }
// with 1-based coordinate indices, strictly increasing per entry, and
// coefficients in the grammar of parse_polynomial. "twist" and both of its
// members are optional.
//
// Structure object (frame order d_1..d_d, e, dx_1..dx_d):
//   { "algebroid": <algebroid object>,
//     "F":    ["poly"; (2d+1)^2 entries, row-major],
//     "u0":   ["poly"; 2d+1 entries],
//     "Gend": optional, same shape as "F" }
//
// A file holding a bare algebroid object is also accepted by load_instance.
struct Instance {
    Algebroid E;
    std::optional<BnStructure> S;
};

// All loaders throw BnError with a description (and, for polynomial syntax
// errors, a character position) on malformed input.
Algebroid algebroid_from_json_text(const std::string& text);
Instance instance_from_json_text(const std::string& text);
Instance load_instance(const std::string& path);

// Serializes in the format above; real (rational) coefficients round-trip.
std::string instance_to_json(const Algebroid& E, const BnStructure* S);

}  // namespace bn

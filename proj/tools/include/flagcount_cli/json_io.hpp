#pragma once

// JSON forms of lattices and flags.  Rationals are "p/q" strings; integer
// entries are JSON numbers when they fit in int64 and decimal strings
// otherwise.

#include <string>

#include "flagcount/exact_lattice.hpp"
#include "json.hpp"

namespace flagcount::io {

using nlohmann::json;

json integer_to_json(Integer const& v);
Integer integer_from_json(json const& j);

// {"basis": [[...], ...], "covol_sq": "p/q"}
json lattice_to_json(PrimitiveLattice const& l);
PrimitiveLattice lattice_from_json(json const& j);

// {"partition", "bases", "covol_sq", "h_inf_sq", "h_ac_sq"}
json flag_to_json(FlagChain const& f);
// Validates the chain; throws on malformed records.
FlagChain flag_from_json(json const& j);

void add_shapes(json& record, FlagChain const& f);
void add_directions(json& record, FlagChain const& f);

}  // namespace flagcount::io

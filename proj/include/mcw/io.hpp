#pragma once

#include <string>
#include <utility>

#include "json.hpp"
#include "mcw/normalform.hpp"

namespace mcw {

using Json = nlohmann::json;

// "d(a,b)"
Diagonal parse_diagonal(const std::string& s, int N);
// "d(a,b):+1" or "d(a,b):-1"
std::pair<Diagonal, int> parse_move(const std::string& s, int N);

Json to_json(const Dissection& t);
Json to_json(const QuiverWithRelations& q);
Json to_json(const IntMatrix& m);
Json to_json(const DerivedInvariant& inv);
Json to_json(const MoveRecord& r);
Json to_json(const ReductionTrace& tr);

// All parsers validate and throw InvalidInput.
Dissection dissection_from_json(const Json& j);
QuiverWithRelations quiver_from_json(const Json& j);
IntMatrix matrix_from_json(const Json& j);
DerivedInvariant invariant_from_json(const Json& j);
MoveRecord move_record_from_json(const Json& j);
ReductionTrace trace_from_json(const Json& j);

Json parse_json_text(const std::string& text);

// rendering, byte-deterministic
std::string render_dot(const QuiverWithRelations& q);
std::string render_dot(const Dissection& t);
std::string render_svg(const Dissection& t);
std::string render_svg(const QuiverWithRelations& q);

}  // namespace mcw

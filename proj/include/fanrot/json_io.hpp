#pragma once

// JSON encodings. Integers travel as decimal strings so nothing is lost;
// on input plain JSON integers are accepted too.

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "fanrot/dyadic.hpp"
#include "fanrot/errors.hpp"
#include "fanrot/lattice.hpp"
#include "fanrot/pl_map.hpp"
#include "fanrot/rotation.hpp"
#include "fanrot/sharp.hpp"

namespace fanrot::json_io {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

inline Json to_json(const Int& v) { return v.str(); }

inline Json to_json(const IntVector& v) { return Json::array({to_json(v.x), to_json(v.y)}); }

inline Json to_json(const Fan& fan) {
  Json rays = Json::array();
  for (const auto& r : fan.rays()) rays.push_back(to_json(r.generator()));
  return rays;
}

inline Json to_json(const UnimodularMatrix& m) {
  return Json::array({Json::array({to_json(m.a()), to_json(m.b())}), Json::array({to_json(m.c()), to_json(m.d())})});
}

inline Json to_json(const PLAutomorphism& f) {
  Json mats = Json::array();
  for (const auto& m : f.matrices()) mats.push_back(to_json(m));
  return Json{{"rays", to_json(f.fan())}, {"matrices", std::move(mats)}};
}

inline Json to_json(const DyadicPLMap& f) {
  Json b = Json::array(), y = Json::array();
  for (const auto& t : f.breakpoints()) b.push_back(t.str());
  for (const auto& t : f.images()) y.push_back(t.str());
  return Json{{"breakpoints", std::move(b)}, {"images", std::move(y)}};
}

inline Json to_json(const std::vector<SimpleMapStep>& steps) {
  Json out = Json::array();
  for (const auto& s : steps) {
    out.push_back(Json{{"kind", to_string(s.kind)},
                       {"source_fan", to_json(s.source_fan)},
                       {"target_fan", to_json(s.target_fan)},
                       {"map", to_json(s.map)}});
  }
  return out;
}

inline Json to_json(const DeterministicFan& det) {
  return Json{{"rays", to_json(det.fan)}, {"passes", det.passes}, {"split_counts", det.split_counts}};
}

inline Int int_from_json(const Json& j) {
  if (j.is_string()) return parse_int(j.get<std::string>());
  if (j.is_number_integer()) return j.is_number_unsigned() ? Int(j.get<std::uint64_t>()) : Int(j.get<std::int64_t>());
  throw ParseError("expected an integer or a decimal string, got " + j.dump());
}

inline IntVector vector_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected a vector [x, y], got " + j.dump());
  return {int_from_json(j[0]), int_from_json(j[1])};
}

/// [[a,b],[c,d]] or [a,b,c,d].
inline std::array<Int, 4> matrix_from_json(const Json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_array() && j[1].is_array() && j[0].size() == 2 && j[1].size() == 2) {
    return {int_from_json(j[0][0]), int_from_json(j[0][1]), int_from_json(j[1][0]), int_from_json(j[1][1])};
  }
  if (j.is_array() && j.size() == 4) {
    return {int_from_json(j[0]), int_from_json(j[1]), int_from_json(j[2]), int_from_json(j[3])};
  }
  throw ParseError("expected a matrix [[a,b],[c,d]], got " + j.dump());
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_array()) throw ParseError(std::string("field \"") + key + "\" must be an array");
  return v;
}

inline PLAutomorphism element_from_json(const Json& j) {
  std::vector<IntVector> rays;
  std::vector<std::array<Int, 4>> mats;
  for (const auto& r : field(j, "rays")) rays.push_back(vector_from_json(r));
  for (const auto& m : field(j, "matrices")) mats.push_back(matrix_from_json(m));
  return PLAutomorphism::validate(rays, mats);
}

inline DyadicRational dyadic_from_json(const Json& j) {
  if (j.is_string()) return DyadicRational::parse(j.get<std::string>());
  if (j.is_number_integer()) return DyadicRational::integer(int_from_json(j));
  throw ParseError("expected a dyadic string such as \"3/2^3\", got " + j.dump());
}

inline DyadicPLMap dyadic_map_from_json(const Json& j) {
  std::vector<DyadicRational> b, y;
  for (const auto& t : field(j, "breakpoints")) b.push_back(dyadic_from_json(t));
  for (const auto& t : field(j, "images")) y.push_back(dyadic_from_json(t));
  return DyadicPLMap::validate(std::move(b), std::move(y));
}

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace fanrot::json_io

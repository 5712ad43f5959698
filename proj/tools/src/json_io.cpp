#include "flagcount_cli/json_io.hpp"

#include "flagcount/enumerate.hpp"
#include "flagcount/shape.hpp"

namespace flagcount::io {

json integer_to_json(Integer const& v) {
  if (v <= INT64_MAX && v >= INT64_MIN) return v.convert_to<std::int64_t>();
  return v.str();
}

Integer integer_from_json(json const& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    Rational const r = parse_fraction(j.get<std::string>());
    if (denominator(r) != 1) throw std::invalid_argument("expected an integer");
    return numerator(r);
  }
  throw std::invalid_argument("expected an integer");
}

namespace {

json basis_to_json(IntegerBasis const& b) {
  json rows = json::array();
  for (auto const& row : b.rows()) {
    json r = json::array();
    for (auto const& e : row) r.push_back(integer_to_json(e));
    rows.push_back(std::move(r));
  }
  return rows;
}

IntegerBasis basis_from_json(json const& j) {
  IntegerMatrix rows;
  for (auto const& r : j) {
    IntegerVector row;
    for (auto const& e : r) row.push_back(integer_from_json(e));
    rows.push_back(std::move(row));
  }
  return IntegerBasis(std::move(rows));
}

}  // namespace

json lattice_to_json(PrimitiveLattice const& l) {
  return json{{"basis", basis_to_json(l.basis())}, {"covol_sq", to_fraction_string(l.covol_sq())}};
}

PrimitiveLattice lattice_from_json(json const& j) {
  PrimitiveLattice l = PrimitiveLattice::from_basis(basis_from_json(j.at("basis")));
  if (j.contains("covol_sq") && parse_fraction(j.at("covol_sq").get<std::string>()) != l.covol_sq()) {
    throw std::invalid_argument("covol_sq does not match the basis");
  }
  return l;
}

json flag_to_json(FlagChain const& f) {
  json bases = json::array();
  json covols = json::array();
  for (auto const& l : f.lattices()) {
    bases.push_back(basis_to_json(l.basis()));
    covols.push_back(to_fraction_string(l.covol_sq()));
  }
  json j;
  j["partition"] = f.partition();
  j["bases"] = std::move(bases);
  j["covol_sq"] = std::move(covols);
  j["h_inf_sq"] = to_fraction_string(height_inf(f));
  j["h_ac_sq"] = to_fraction_string(height_ac(f));
  return j;
}

FlagChain flag_from_json(json const& j) {
  auto partition = j.at("partition").get<std::vector<int>>();
  std::vector<PrimitiveLattice> lattices;
  for (auto const& b : j.at("bases")) {
    lattices.push_back(PrimitiveLattice::from_basis(basis_from_json(b)));
  }
  FlagChain f(std::move(partition), std::move(lattices));
  if (j.contains("covol_sq")) {
    auto const& c = j.at("covol_sq");
    for (std::size_t i = 0; i < f.length(); ++i) {
      if (parse_fraction(c.at(i).get<std::string>()) != f.lattices()[i].covol_sq()) {
        throw std::invalid_argument("covol_sq does not match the bases");
      }
    }
  }
  return f;
}

void add_shapes(json& record, FlagChain const& f) {
  json shapes = json::array();
  for (auto const& s : shape_vector(f)) {
    switch (s.kind) {
      case BlockShape::Kind::Trivial:
        shapes.push_back("trivial");
        break;
      case BlockShape::Kind::Point2:
        shapes.push_back(json{{"x", s.point.x}, {"y", s.point.y}});
        break;
      case BlockShape::Kind::NonCanonical:
        shapes.push_back(json{{"gram", s.gram}, {"canonical", false}});
        break;
    }
  }
  record["shapes"] = std::move(shapes);
}

void add_directions(json& record, FlagChain const& f) {
  json dirs = json::array();
  for (auto const& d : direction(f)) dirs.push_back(d.frame);
  record["directions"] = std::move(dirs);
}

}  // namespace flagcount::io

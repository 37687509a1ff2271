#pragma once

// Stable JSON renderings. Unbounded integers and all coordinates are decimal
// strings; residues modulo t, symbols and bits are JSON numbers. Key order is
// fixed so repeated runs are byte-identical.

#include <json.hpp>

#include "unitcert/certify.hpp"
#include "unitcert/residual.hpp"

namespace unitcert::json {

using Json = nlohmann::ordered_json;

inline long small(const Integer& z) {
  if (!z.fits_slong_p()) throw invalid_argument("value too large for a JSON number: " + z.get_str());
  return z.get_si();
}

template <unsigned K>
Json field(const RadicalTower<K>& tower) {
  Json params = Json::array();
  for (const auto& p : tower.parameters()) params.push_back(p.get_str());
  Json basis = Json::array();
  for (std::size_t i = 0; i < RadicalTower<K>::kDegree; ++i) basis.push_back(tower.basis_name(i));
  return Json{{"kind", tower.kind()}, {"parameters", params}, {"basis", basis}};
}

template <unsigned K>
Json element(const RadicalElement<K>& x) {
  Json coords = Json::array();
  for (const auto& c : x.coords()) coords.push_back(c.get_str());
  return Json{{"text", x.to_string()}, {"coords", coords}};
}

inline Json unit(const QuadUnit& u) {
  return Json{{"d", u.d.get_str()}, {"x", u.x.get_str()}, {"y", u.y.get_str()}, {"norm", u.norm}};
}

inline Json place(const SplitPlace& p) {
  static constexpr std::array<const char*, 8> kNames{"1", "r2", "rpq", "r2pq", "rps", "r2ps", "rqs", "r2qs"};
  Json residues = Json::object();
  for (std::size_t i = 0; i < 8; ++i) residues[kNames[i]] = small(p.residue_of_basis(i));
  return Json{{"t", small(p.t())},
              {"signs", {p.signs[0], p.signs[1], p.signs[2]}},
              {"r2", small(p.r2())},
              {"rpq", small(p.rpq())},
              {"rps", small(p.rps())},
              {"basis_residues", residues}};
}

inline Json triple(const Triple& t) { return Json::array({small(t.p), small(t.q), small(t.s)}); }

inline Json datum(const ClassicalDatum& d) {
  Json out = Json::array();
  for (long v : d.tuple()) out.push_back(v);
  return out;
}

inline Json generator(const FsuGenerator& g) {
  Json out{{"name", g.name}, {"symbol", g.symbol}, {"status", to_string(g.status)}};
  out["value"] = g.value ? element(*g.value) : Json(nullptr);
  out["square_of"] = g.square ? element(*g.square) : Json(nullptr);
  return out;
}

inline Json fsu(const std::vector<FsuGenerator>& gens) {
  Json out = Json::array();
  for (const auto& g : gens) out.push_back(generator(g));
  return out;
}

inline Json evaluation(const PlaceEvaluation& ev) {
  return Json{{"place", place(ev.place)},
              {"theta_residue", small(ev.theta_residue)},
              {"eps_pq_residue", small(ev.eps_pq_residue)},
              {"legendre_theta", ev.legendre_theta},
              {"legendre_eps", ev.legendre_eps},
              {"delta", ev.delta()}};
}

inline Json certificate(const Certificate& c) {
  Json out;
  out["triple"] = triple(c.triple);
  out["hypotheses"] = c.hypotheses_verified ? "verified" : "unverified";
  out["datum"] = datum(c.datum);
  out["epsilon_convention"] = c.epsilon_convention;
  out["place"] = c.place ? place(*c.place) : Json(nullptr);
  out["theta_residue"] = small(c.theta_residue);
  out["eps_pq_residue"] = small(c.eps_pq_residue);
  out["legendre_theta"] = c.legendre_theta;
  out["legendre_eps"] = c.legendre_eps;
  out["delta"] = c.delta;
  out["mu"] = c.mu;
  out["fsu"] = fsu(c.fsu);
  out["oracle_checked"] = c.oracle_checked;
  out["warnings"] = c.warnings;
  if (!c.other_places.empty()) {
    Json others = Json::array();
    for (const auto& ev : c.other_places) others.push_back(evaluation(ev));
    out["other_places"] = others;
  }
  return out;
}

inline Json functional(const TestFunctional& f) {
  return Json{{"t", small(f.place.t())},
              {"signs", {f.place.signs[0], f.place.signs[1], f.place.signs[2]}},
              {"basis_element", f.kind_name()},
              {"b", small(f.b)}};
}

inline Json separation(const SeparationCertificate& s) {
  Json cands = Json::array(), funcs = Json::array(), table = Json::array();
  for (const auto& c : s.candidates) cands.push_back(c.to_string());
  for (const auto& f : s.functionals) funcs.push_back(functional(f));
  for (const auto& row : s.table) {
    std::string bits;
    for (auto b : row) bits += b ? '1' : '0';
    table.push_back(bits);
  }
  Json out;
  out["field"] = s.candidates.empty() ? Json(nullptr) : field(*s.candidates[0].tower());
  out["candidates"] = cands;
  out["functionals"] = funcs;
  out["table"] = table;
  out["minimal"] = s.minimal;
  return out;
}

}  // namespace unitcert::json

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "unitcert/replay.hpp"
#include "unitcert/serialize.hpp"

namespace {

using namespace unitcert;
using json::Json;

enum Exit { kOk = 0, kError = 1, kHypothesis = 2, kSearch = 3, kVerification = 4 };

struct RunConfig {
  long prime_bound = 100000;
  unsigned precision_bits = 256;
  std::string place_mode = "first";
  bool json = false;
  bool force = false;
  bool oracle = false;
  std::optional<std::filesystem::path> cache_path;
};

struct Session {
  RunConfig cfg;
  std::optional<PellCache> cache;

  void open_cache() {
    if (const char* env = std::getenv("UNITCERT_CACHE"); env && *env) cfg.cache_path = env;
    if (cfg.cache_path) cache.emplace(*cfg.cache_path);
  }

  DeltaOptions options() {
    DeltaOptions o;
    o.prime_bound = cfg.prime_bound;
    o.force = cfg.force;
    o.oracle_check = cfg.oracle || cfg.force;
    o.all_places = cfg.place_mode == "all";
    o.sqrt.initial_bits = cfg.precision_bits;
    o.sqrt.max_bits = std::max<mpfr_prec_t>(o.sqrt.max_bits, cfg.precision_bits);
    o.cache = cache ? &*cache : nullptr;
    return o;
  }

  void close() {
    if (!cache) return;
    if (cache->rejected_entries() > 0 && !cfg.json) {
      std::cerr << "note: " << cache->rejected_entries() << " corrupt cache entries were recomputed\n";
    }
    cache->save();
  }
};

// Non-prime or repeated entries are reported like any other hypothesis breach.
Triple checked_triple(long p, long q, long s) {
  Triple t{p, q, s};
  try {
    require_distinct_odd_primes(t);
  } catch (const unitcert::invalid_argument& e) {
    throw hypothesis_violation(e.what());
  }
  return t;
}

std::string sign_string(const SplitPlace& place) {
  std::string out = "(";
  for (std::size_t i = 0; i < 3; ++i) out += std::string(i ? "," : "") + (place.signs[i] > 0 ? "+" : "-");
  return out + ")";
}

std::string place_line(const SplitPlace& place) {
  return "t=" + place.t().get_str() + " signs=" + sign_string(place) + " r2=" + place.r2().get_str() +
         " rpq=" + place.rpq().get_str() + " rps=" + place.rps().get_str();
}

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

void print_fsu(const std::vector<FsuGenerator>& gens) {
  for (const auto& g : gens) {
    std::cout << g.name << " = " << g.symbol << "  [" << to_string(g.status) << "]\n";
    if (g.value) std::cout << "    " << g.value->to_string() << '\n';
  }
}

int cmd_delta(Session& s, long p, long q, long r) {
  const Triple tr = checked_triple(p, q, r);
  const Certificate c = delta(tr, s.options());
  if (s.cfg.json) {
    print_json(json::certificate(c));
    return kOk;
  }
  const std::string pq = Integer(tr.p * tr.q).get_str();
  const std::string t = c.place->t().get_str();
  const std::string eps_label = "eps_" + pq;
  std::cout << "delta" << tr.to_string() << " = " << c.delta << ", mu = " << (c.delta ? "eps_" + pq : "1") << '\n'
            << "  hypotheses  " << (c.hypotheses_verified ? "verified" : "NOT verified (forced)") << '\n'
            << "  datum       " << c.datum.to_string() << '\n'
            << "  convention  " << c.epsilon_convention << '\n'
            << "  place       " << place_line(*c.place) << '\n'
            << "  Theta       " << c.theta_residue << " mod " << t << ", (" << c.theta_residue << "/" << t
            << ") = " << c.legendre_theta << '\n'
            << "  " << eps_label << std::string(eps_label.size() < 12 ? 12 - eps_label.size() : 1, ' ') << c.eps_pq_residue
            << " mod " << t << ", (" << c.eps_pq_residue << "/" << t << ") = " << c.legendre_eps << '\n'
            << "  oracle      " << (c.oracle_checked ? "exact square roots agree" : "not run") << '\n';
  if (!c.other_places.empty()) {
    std::cout << "  " << c.other_places.size() << " further valid places, all with delta = " << c.delta << ":\n";
    for (const auto& ev : c.other_places) {
      std::cout << "    " << place_line(ev.place) << "  Theta " << ev.theta_residue << " eps "
                << ev.eps_pq_residue << '\n';
    }
  }
  for (const auto& w : c.warnings) std::cout << "  warning: " << w << '\n';
  return kOk;
}

int cmd_fsu(Session& s, long p, long q, long r) {
  const Triple tr = checked_triple(p, q, r);
  const Certificate c = delta(tr, s.options());
  if (s.cfg.json) {
    Json out;
    out["triple"] = json::triple(tr);
    out["delta"] = c.delta;
    out["mu"] = c.mu;
    out["epsilon_convention"] = c.epsilon_convention;
    out["fsu"] = json::fsu(c.fsu);
    out["warnings"] = c.warnings;
    print_json(out);
    return kOk;
  }
  std::cout << "FSU of Q(sqrt2, sqrt" << (tr.p * tr.q) << ", sqrt" << (tr.p * tr.s) << "), mu = "
            << (c.delta ? "eps_" + Integer(tr.p * tr.q).get_str() : "1") << '\n';
  print_fsu(c.fsu);
  for (const auto& w : c.warnings) std::cout << "warning: " << w << '\n';
  return kOk;
}

int cmd_datum(Session& s, long p, long q, long r) {
  const Triple tr = checked_triple(p, q, r);
  const ClassicalDatum d = classical_datum(tr);
  const std::string why = hypothesis_failure(tr);
  if (s.cfg.json) {
    print_json(Json{{"triple", json::triple(tr)},
                    {"datum", json::datum(d)},
                    {"hypotheses", why.empty() ? "satisfied" : why}});
  } else {
    std::cout << "D" << tr.to_string() << " = " << d.to_string() << '\n';
    if (!why.empty()) std::cout << "hypotheses fail: " << why << '\n';
  }
  return kOk;
}

int cmd_pell(Session& s, const std::string& d_text) {
  const Integer d(d_text);
  const QuadUnit u = pell_unit(d, s.cache ? &*s.cache : nullptr);
  if (s.cfg.json) {
    Json out = json::unit(u);
    out["convention"] = kEpsilonConvention;
    print_json(out);
  } else {
    std::cout << "eps_" << d << " = " << u.x << " + " << u.y << "*sqrt(" << d << "), norm "
              << (u.norm > 0 ? "+1" : "-1") << '\n';
  }
  return kOk;
}

// "biquad:D" or "octic:P,Q,S".
template <typename Fn>
int with_field(const std::string& spec, Fn&& fn) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "biquad" && !rest.empty()) return fn(biquad_tower(Integer(rest)));
  if (kind == "octic") {
    std::array<long, 3> v{};
    std::istringstream in(rest);
    char comma = 0;
    if (in >> v[0] >> comma >> v[1] >> comma >> v[2] && in.peek() == EOF) {
      Triple t{v[0], v[1], v[2]};
      return fn(octic_tower(t));
    }
  }
  throw unitcert::invalid_argument("field spec must be biquad:D or octic:P,Q,S, got '" + spec + "'");
}

int cmd_sqrt(Session& s, const std::string& spec, const std::string& text) {
  const SqrtOptions opts = s.options().sqrt;
  return with_field(spec, [&]<unsigned K>(TowerPtr<K> tower) {
    const auto x = RadicalElement<K>::parse(tower, text);
    const auto root = algebraic_sqrt(x, opts);
    if (s.cfg.json) {
      Json out{{"field", json::field(*tower)}, {"input", json::element(x)}, {"square", root.has_value()}};
      out["root"] = root ? json::element(*root) : Json(nullptr);
      print_json(out);
    } else if (root) {
      std::cout << root->to_string() << '\n';
    } else {
      std::cout << "not a square in this field\n";
    }
    return kOk;
  });
}

int cmd_separate(Session& s, const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw unitcert::invalid_argument("cannot read " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const nlohmann::json doc = nlohmann::json::parse(text);
  const auto f = doc.at("field").get<std::array<long, 3>>();
  const auto tower = octic_tower(Triple{f[0], f[1], f[2]});
  std::vector<OcticElement> candidates;
  for (const auto& c : doc.at("candidates")) candidates.push_back(OcticElement::parse(tower, c.get<std::string>()));
  const SeparationCertificate cert = separate_candidates(candidates, s.cfg.prime_bound, s.options().sqrt);
  if (s.cfg.json) {
    print_json(json::separation(cert));
    return kOk;
  }
  std::cout << cert.functionals.size() << " functionals separate " << candidates.size() << " candidates"
            << (cert.minimal ? " (minimal)" : "") << '\n';
  for (const auto& fn : cert.functionals) {
    std::cout << "  " << place_line(fn.place) << " against " << fn.kind_name() << " = " << fn.b << '\n';
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::string bits;
    for (auto b : cert.table[i]) bits += b ? '1' : '0';
    std::cout << "  [" << (bits.empty() ? "-" : bits) << "]  " << candidates[i].to_string() << '\n';
  }
  return kOk;
}

int cmd_verify_paper(Session& s) {
  const auto items = replay::replay_all(s.options());
  const auto report = replay::report(items);
  if (s.cfg.json) {
    print_json(report);
  } else {
    for (const auto& it : items) {
      std::cout << (it.pass ? "[PASS] " : "[FAIL] ") << it.example << "  " << it.name << ": " << it.actual;
      if (!it.pass) std::cout << "   (expected " << it.expected << ")";
      std::cout << '\n';
    }
    std::cout << report["passed"].get<std::size_t>() << "/" << items.size() << " items match\n";
  }
  return report["all_pass"].get<bool>() ? kOk : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unitcert: residual unit bit delta(p,q,s) for Q(sqrt2, sqrt pq, sqrt ps)"};
  app.require_subcommand(1);
  Session session;
  RunConfig& cfg = session.cfg;
  std::string cache;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--prime-bound", cfg.prime_bound, "largest split prime searched")->check(CLI::PositiveNumber);
    sub->add_option("--precision-bits", cfg.precision_bits, "starting precision of the square-root search")
        ->check(CLI::Range(64u, 1u << 20));
    sub->add_option("--places", cfg.place_mode, "first valid place only, or every valid place")
        ->check(CLI::IsMember({"first", "all"}));
    sub->add_flag("--json", cfg.json, "machine-readable output");
    sub->add_flag("--force", cfg.force, "run outside the hypotheses (enables the exact cross-check)");
    sub->add_flag("--oracle", cfg.oracle, "cross-check delta with exact square roots");
    sub->add_option("--cache", cache, "Pell unit cache file (UNITCERT_CACHE takes precedence)");
  };

  long p = 0, q = 0, r = 0;
  auto add_triple = [&](CLI::App* sub) {
    sub->add_option("p", p)->required();
    sub->add_option("q", q)->required();
    sub->add_option("s", r)->required();
  };

  auto* delta_cmd = app.add_subcommand("delta", "decide delta(p,q,s) and print the certificate");
  auto* fsu_cmd = app.add_subcommand("fsu", "fundamental system of units");
  auto* datum_cmd = app.add_subcommand("datum", "classical datum D(p,q,s)");
  for (auto* sub : {delta_cmd, fsu_cmd, datum_cmd}) {
    add_triple(sub);
    add_common(sub);
  }

  std::string d_text;
  auto* pell_cmd = app.add_subcommand("pell", "fundamental Pell unit of Z[sqrt d]");
  pell_cmd->add_option("d", d_text)->required();
  add_common(pell_cmd);

  std::string spec, element;
  auto* sqrt_cmd = app.add_subcommand("sqrt", "exact square root in biquad:D or octic:P,Q,S");
  sqrt_cmd->add_option("field", spec)->required();
  sqrt_cmd->add_option("element", element)->required();
  add_common(sqrt_cmd);

  std::string input;
  auto* sep_cmd = app.add_subcommand("separate", "separate squareclass candidates by local tests");
  sep_cmd->add_option("input", input, "JSON file {\"field\": [p,q,s], \"candidates\": [...]} or -")->required();
  add_common(sep_cmd);

  auto* verify_cmd = app.add_subcommand("verify-paper", "replay the worked examples item by item");
  add_common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }
  if (!cache.empty()) cfg.cache_path = cache;

  try {
    session.open_cache();
    int code = kOk;
    if (*delta_cmd) code = cmd_delta(session, p, q, r);
    else if (*fsu_cmd) code = cmd_fsu(session, p, q, r);
    else if (*datum_cmd) code = cmd_datum(session, p, q, r);
    else if (*pell_cmd) code = cmd_pell(session, d_text);
    else if (*sqrt_cmd) code = cmd_sqrt(session, spec, element);
    else if (*sep_cmd) code = cmd_separate(session, input);
    else if (*verify_cmd) code = cmd_verify_paper(session);
    session.close();
    return code;
  } catch (const hypothesis_violation& e) {
    std::cerr << "hypothesis violation: " << e.what() << '\n';
    return kHypothesis;
  } catch (const search_exhausted& e) {
    std::cerr << "search exhausted: " << e.what() << '\n';
    return kSearch;
  } catch (const verification_failure& e) {
    std::cerr << "internal verification failure: " << e.what() << '\n';
    return kVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}

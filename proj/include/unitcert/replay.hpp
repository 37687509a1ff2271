#pragma once

// Replays the published worked examples for (7,19,3), (7,11,43), (7,3,59)
// item by item: units, root expansions, roots and residues modulo the split
// prime, Legendre symbols, delta and mu, and the non-collapse pair.

#include <functional>
#include <string>
#include <vector>

#include "unitcert/serialize.hpp"

namespace unitcert::replay {

struct Item {
  std::string example;
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct ExampleData {
  std::string label;
  Triple triple;
  std::array<long, 6> datum;
  /// (d, x, y) for eps_pq, eps_2pq, eps_ps, eps_2ps.
  std::array<std::array<std::string, 3>, 4> units;
  std::array<std::string, 4> root_pq;
  std::array<std::string, 4> root_ps;
  unsigned long t;
  std::array<long, 3> roots;
  long residue_pq, residue_ps, theta_residue, eps_residue;
  int legendre_theta;
  int delta;
  long eps_theta_residue;  ///< residue of eps_pq * Theta, 0 if not printed
  long eps_theta_root;     ///< printed square root of that residue
};

inline std::vector<ExampleData> worked_examples() {
  return {
      {"Ex 7.1",
       {7, 19, 3},
       {7, 3, 3, -1, -1, 1},
       {{{"133", "2588599", "224460"}, {"266", "685", "42"}, {"21", "55", "12"}, {"42", "13", "2"}}},
       {"21070", "14877", "1827", "1290"},
       {"14", "9", "3", "2"},
       41,
       {17, 16, 12},
       18, 37, 10, 29, 1, 0, 0, 0},
      {"Ex 7.2",
       {7, 11, 43},
       {7, 3, 3, 1, 1, 1},
       {{{"77", "351", "40"},
         {"154", "21295", "1716"},
         {"301", "5883392537695", "339113108232"},
         {"602", "687", "28"}}},
       {"1365", "968", "156", "110"},
       {"31764789", "22493816", "1830892", "1296522"},
       23,
       {5, 10, 5},
       17, 19, 1, 15, 1, 0, 0, 0},
      {"Ex 7.3",
       {7, 3, 59},
       {7, 3, 3, -1, -1, 1},
       {{{"21", "55", "12"},
         {"42", "13", "2"},
         {"413", "113399", "5580"},
         {"826", "222239304685", "7732694382"}}},
       {"14", "9", "3", "2"},
       {"79375590", "56126523", "3905783", "2761830"},
       79,
       {9, 10, 27},
       68, 20, 17, 17, -1, 1, 52, 17},
  };
}

namespace detail {

inline std::string join(const auto& xs) {
  std::string out = "(";
  bool first = true;
  for (const auto& x : xs) {
    out += (first ? "" : ",");
    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::string>) out += x;
    else if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Integer> ||
                       std::is_same_v<std::decay_t<decltype(x)>, Rational>) out += x.get_str();
    else out += std::to_string(x);
    first = false;
  }
  return out + ")";
}

class Recorder {
 public:
  explicit Recorder(std::string example) : example_(std::move(example)) {}
  void check(std::string name, std::string expected, std::string actual) {
    const bool pass = expected == actual;
    items_.push_back({example_, std::move(name), std::move(expected), std::move(actual), pass});
  }
  /// Runs body; an exception becomes a failing item.
  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      items_.push_back({example_, name, "no error", std::string("error: ") + e.what(), false});
    }
  }
  std::vector<Item> take() { return std::move(items_); }

 private:
  std::string example_;
  std::vector<Item> items_;
};

}  // namespace detail

inline std::vector<Item> replay_example(const ExampleData& ex, const DeltaOptions& opts) {
  detail::Recorder rec(ex.label);
  rec.guarded("example", [&] {
    const Triple& tr = ex.triple;
    rec.check("datum", detail::join(ex.datum), detail::join(classical_datum(tr).tuple()));

    for (const auto& [d, x, y] : ex.units) {
      const QuadUnit u = pell_unit(Integer(d), opts.cache);
      rec.check("eps_" + d, x + "+" + y + "*sqrt" + d, u.x.get_str() + "+" + u.y.get_str() + "*sqrt" + d);
    }

    const ResidualContext ctx = ResidualContext::build(tr, opts);
    auto coords4 = [](const BiquadElement& e) {
      std::array<std::string, 4> out;
      for (std::size_t i = 0; i < 4; ++i) out[i] = e[i].get_str();
      return out;
    };
    rec.check("sqrt(eps_" + ex.units[0][0] + "*eps_" + ex.units[1][0] + ")", detail::join(ex.root_pq),
              detail::join(coords4(ctx.theta.root_pq)));
    rec.check("sqrt(eps_" + ex.units[2][0] + "*eps_" + ex.units[3][0] + ")", detail::join(ex.root_ps),
              detail::join(coords4(ctx.theta.root_ps)));

    const arith::OddPrime t(ex.t);
    const Integer pq = tr.p * tr.q, ps = tr.p * tr.s;
    const std::array<int, 3> ones{1, 1, 1};
    const std::array<int, 3> symbols{arith::jacobi(2, t.value()), arith::jacobi(pq, t.value()),
                                     arith::jacobi(ps, t.value())};
    rec.check("split symbols (2,pq,ps)/" + std::to_string(ex.t), detail::join(ones), detail::join(symbols));

    const SplitPlace place = enumerate_places(*ctx.octic, t).front();
    rec.check("canonical roots mod " + std::to_string(ex.t), detail::join(ex.roots),
              detail::join(std::array<Integer, 3>{place.r2(), place.rpq(), place.rps()}));

    rec.check("residue sqrt(eps_" + ex.units[0][0] + "*eps_" + ex.units[1][0] + ")", std::to_string(ex.residue_pq),
              residue_at(ctx.theta.root_pq, place, ctx.octic).get_str());
    rec.check("residue sqrt(eps_" + ex.units[2][0] + "*eps_" + ex.units[3][0] + ")", std::to_string(ex.residue_ps),
              residue_at(ctx.theta.root_ps, place, ctx.octic).get_str());
    const Integer theta_res = residue_at(ctx.theta.theta, place);
    rec.check("Theta residue", std::to_string(ex.theta_residue), theta_res.get_str());
    rec.check("(Theta/t)", std::to_string(ex.legendre_theta), std::to_string(arith::jacobi(theta_res, t.value())));
    const Integer eps_res = residue_at(ctx.eps_pq, place, ctx.octic);
    rec.check("eps_" + pq.get_str() + " residue", std::to_string(ex.eps_residue), eps_res.get_str());
    rec.check("(eps_" + pq.get_str() + "/t)", "-1", std::to_string(arith::jacobi(eps_res, t.value())));
    if (ex.eps_theta_residue) {
      const Integer eps_theta_product = eps_res * theta_res;
      rec.check("eps_pq*Theta residue (unreduced)", std::to_string(ex.eps_residue * ex.theta_residue),
                eps_theta_product.get_str());
      const Integer r = residue_at(ctx.eps_pq_element * ctx.theta.theta, place);
      rec.check("eps_pq*Theta residue", std::to_string(ex.eps_theta_residue), r.get_str());
      rec.check("(eps_pq*Theta/t)", "1", std::to_string(arith::jacobi(r, t.value())));
      rec.check(std::to_string(ex.eps_theta_root) + "^2 mod t", std::to_string(ex.eps_theta_residue),
                arith::mod(Integer(ex.eps_theta_root) * ex.eps_theta_root, t.value()).get_str());
    }

    DeltaOptions o = opts;
    o.compute_fsu = false;
    const Certificate cert = delta(tr, o);
    rec.check("delta", std::to_string(ex.delta), std::to_string(cert.delta));
    rec.check("mu", ex.delta ? "eps_" + pq.get_str() : "1", cert.delta ? "eps_" + pq.get_str() : "1");
    rec.check("certificate split prime", std::to_string(ex.t), cert.place->t().get_str());
  });
  return rec.take();
}

inline std::vector<Item> replay_noncollapse(const DeltaOptions& opts) {
  detail::Recorder rec("Prop 6.3");
  rec.guarded("noncollapse", [&] {
    const auto report = noncollapse_check({7, 19, 3}, {7, 3, 59}, opts);
    rec.check("D(7,19,3)", "(7,3,3,-1,-1,1)", report.first.datum.to_string());
    rec.check("D(7,3,59)", "(7,3,3,-1,-1,1)", report.second.datum.to_string());
    rec.check("delta(7,19,3), delta(7,3,59)", "(0,1)",
              detail::join(std::array<int, 2>{report.first.delta, report.second.delta}));
    rec.check("noncollapse", "true", report.noncollapse ? "true" : "false");
  });
  return rec.take();
}

inline std::vector<Item> replay_all(const DeltaOptions& opts) {
  std::vector<Item> items;
  for (const auto& ex : worked_examples()) {
    auto part = replay_example(ex, opts);
    items.insert(items.end(), part.begin(), part.end());
  }
  auto part = replay_noncollapse(opts);
  items.insert(items.end(), part.begin(), part.end());
  return items;
}

inline json::Json report(const std::vector<Item>& items) {
  json::Json list = json::Json::array();
  std::size_t passed = 0;
  for (const auto& it : items) {
    list.push_back({{"example", it.example},
                    {"item", it.name},
                    {"expected", it.expected},
                    {"actual", it.actual},
                    {"pass", it.pass}});
    passed += it.pass;
  }
  return json::Json{{"items", list},
                    {"passed", passed},
                    {"failed", items.size() - passed},
                    {"all_pass", passed == items.size()}};
}

}  // namespace unitcert::replay

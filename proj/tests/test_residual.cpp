#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "unitcert/residual.hpp"

using namespace unitcert;

namespace {

const Triple kEx1{7, 19, 3}, kEx2{7, 11, 43}, kEx3{7, 3, 59};

DeltaOptions quick() {
  DeltaOptions o;
  o.compute_fsu = false;
  return o;
}

}  // namespace

TEST(Datum, WorkedExamples) {
  EXPECT_EQ(classical_datum(kEx1).tuple(), (std::array<long, 6>{7, 3, 3, -1, -1, 1}));
  EXPECT_EQ(classical_datum(kEx2).tuple(), (std::array<long, 6>{7, 3, 3, 1, 1, 1}));
  EXPECT_EQ(classical_datum(kEx3).tuple(), (std::array<long, 6>{7, 3, 3, -1, -1, 1}));
  EXPECT_THROW(classical_datum(Triple{7, 9, 3}), unitcert::invalid_argument);
  EXPECT_THROW(classical_datum(Triple{7, 3, 3}), unitcert::invalid_argument);
}

TEST(Datum, LegendreEntriesMatchEnumeration) {
  for (const Triple& t : {kEx1, kEx2, kEx3, Triple{23, 11, 19}}) {
    const auto d = classical_datum(t);
    const long p = t.p.get_si(), q = t.q.get_si(), s = t.s.get_si();
    EXPECT_EQ(d.q_over_p, oracle::legendre_enum(q, p));
    EXPECT_EQ(d.s_over_p, oracle::legendre_enum(s, p));
    EXPECT_EQ(d.q_over_s, oracle::legendre_enum(q, s));
  }
}

TEST(Hypothesis, Validation) {
  for (const Triple& t : {kEx1, kEx2, kEx3}) EXPECT_NO_THROW(validate_hypothesis(t));
  EXPECT_THROW(validate_hypothesis(Triple{5, 7, 11}), hypothesis_violation);
  EXPECT_THROW(delta(Triple{5, 7, 11}, quick()), hypothesis_violation);
  // right residues mod 8 but Legendre pattern outside both branches
  const Triple off{7, 3, 11};
  const auto d = classical_datum(off);
  EXPECT_EQ(d.p_mod8, 7U);
  EXPECT_FALSE(hypothesis_failure(off).empty());
}

TEST(SplitPrimes, ContainWorkedPrimes) {
  auto contains = [](const std::vector<arith::OddPrime>& v, long t) {
    return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.value() == t; });
  };
  EXPECT_TRUE(contains(find_split_primes(kEx1, 10, 100000), 41));
  EXPECT_TRUE(contains(find_split_primes(kEx2, 10, 100000), 23));
  EXPECT_TRUE(contains(find_split_primes(kEx3, 10, 100000), 79));
}

TEST(SplitPrimes, AscendingAndSplitting) {
  for (const Triple& tr : {kEx1, kEx2, kEx3}) {
    const auto primes = find_split_primes(tr, 20, 100000);
    ASSERT_EQ(primes.size(), 20U);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const long t = primes[i].value().get_si();
      if (i) {
        EXPECT_LT(primes[i - 1].value(), primes[i].value());
      }
      EXPECT_TRUE(oracle::is_prime_trial(t));
      for (const Integer& g : {Integer(2), Integer(tr.p * tr.q), Integer(tr.p * tr.s)}) {
        EXPECT_EQ(oracle::legendre_enum(g.get_si(), t), 1);
      }
    }
    // and nothing below the largest was skipped
    for (long t = 3; t < primes.back().value().get_si(); t += 2) {
      if (!oracle::is_prime_trial(t)) continue;
      const long pq = Integer(tr.p * tr.q).get_si(), ps = Integer(tr.p * tr.s).get_si();
      const bool split = oracle::legendre_enum(2, t) == 1 && oracle::legendre_enum(pq, t) == 1 &&
                         oracle::legendre_enum(ps, t) == 1;
      const bool listed = std::any_of(primes.begin(), primes.end(), [&](const auto& x) { return x.value() == t; });
      EXPECT_EQ(split, listed) << t;
    }
  }
}

TEST(SplitPrimes, SearchExhausted) {
  EXPECT_THROW(find_split_primes(kEx1, 5, 50), search_exhausted);
  DeltaOptions o = quick();
  o.prime_bound = 40;
  EXPECT_THROW(delta(kEx1, o), search_exhausted);
}

TEST(Places, CanonicalFirstAndClosedUnderSignFlips) {
  auto tw = octic_tower(kEx1);
  const auto places = enumerate_places(*tw, arith::OddPrime(41UL));
  ASSERT_EQ(places.size(), 8U);
  EXPECT_EQ(places[0].r2(), 17);
  EXPECT_EQ(places[0].rpq(), 16);
  EXPECT_EQ(places[0].rps(), 12);
  EXPECT_EQ(places[0].signs, (std::array<int, 3>{1, 1, 1}));
  const auto p3 = enumerate_places(arith::OddPrime(79UL), kEx3);
  EXPECT_EQ(p3[0].map.generator_roots(), (std::array<Integer, 3>{9, 10, 27}));
  const auto p2 = enumerate_places(arith::OddPrime(23UL), kEx2);
  EXPECT_EQ(p2[0].map.generator_roots(), (std::array<Integer, 3>{5, 10, 5}));
  for (const auto& place : places) {
    const Integer flipped = arith::mod(-place.r2(), 41);
    const bool found = std::any_of(places.begin(), places.end(), [&](const SplitPlace& o) {
      return o.r2() == flipped && o.rpq() == place.rpq() && o.rps() == place.rps();
    });
    EXPECT_TRUE(found);
  }
  std::set<std::array<Integer, 3>> distinct;
  for (const auto& place : places) distinct.insert({place.r2(), place.rpq(), place.rps()});
  EXPECT_EQ(distinct.size(), 8U);
  EXPECT_THROW(enumerate_places(*tw, arith::OddPrime(43UL)), unitcert::invalid_argument);
}

TEST(Residues, WorkedExample71) {
  auto tw = octic_tower(kEx1);
  const auto place = enumerate_places(*tw, arith::OddPrime(41UL)).front();
  const ThetaData th = theta(kEx1);
  EXPECT_EQ(residue_at(fundamental_pell(133), place, tw), 29);
  EXPECT_EQ(residue_at(th.root_pq, place, tw), 18);
  EXPECT_EQ(residue_at(th.root_ps, place, tw), 37);
  EXPECT_EQ(residue_at(th.theta, place), 10);
  // residue map is a ring homomorphism
  const OcticElement a = lift(th.root_pq, tw), b = lift(th.root_ps, tw);
  EXPECT_EQ(residue_at(a * b, place), arith::mod(residue_at(a, place) * residue_at(b, place), 41));
  EXPECT_EQ(residue_at(a + b, place), arith::mod(residue_at(a, place) + residue_at(b, place), 41));
}

TEST(Residues, WorkedExamples72And73) {
  {
    auto tw = octic_tower(kEx2);
    const auto place = enumerate_places(*tw, arith::OddPrime(23UL)).front();
    const ThetaData th = theta(kEx2);
    EXPECT_EQ(residue_at(th.root_pq, place, tw), 17);
    EXPECT_EQ(residue_at(th.root_ps, place, tw), 19);
    EXPECT_EQ(residue_at(th.theta, place), 1);
    EXPECT_EQ(residue_at(fundamental_pell(77), place, tw), 15);
  }
  {
    auto tw = octic_tower(kEx3);
    const auto place = enumerate_places(*tw, arith::OddPrime(79UL)).front();
    const ThetaData th = theta(kEx3);
    EXPECT_EQ(residue_at(th.root_pq, place, tw), 68);
    EXPECT_EQ(residue_at(th.root_ps, place, tw), 20);
    EXPECT_EQ(residue_at(th.theta, place), 17);
    EXPECT_EQ(residue_at(fundamental_pell(21), place, tw), 17);
    EXPECT_EQ(residue_at(to_element(fundamental_pell(21), tw) * th.theta, place), 52);
    EXPECT_EQ(52, 17 * 17 % 79);
  }
}

TEST(Delta, WorkedExamples) {
  const Certificate a = delta(kEx1, quick());
  EXPECT_EQ(a.delta, 0);
  EXPECT_EQ(a.mu, "1");
  EXPECT_EQ(a.place->t(), 41);
  EXPECT_EQ(a.theta_residue, 10);
  EXPECT_EQ(a.eps_pq_residue, 29);
  EXPECT_EQ(a.legendre_eps, -1);

  const Certificate b = delta(kEx2, quick());
  EXPECT_EQ(b.delta, 0);
  EXPECT_EQ(b.place->t(), 23);
  EXPECT_EQ(b.theta_residue, 1);
  EXPECT_EQ(b.eps_pq_residue, 15);

  const Certificate c = delta(kEx3, quick());
  EXPECT_EQ(c.delta, 1);
  EXPECT_EQ(c.mu, "eps_pq");
  EXPECT_EQ(c.place->t(), 79);
  EXPECT_EQ(c.theta_residue, 17);
  EXPECT_EQ(c.legendre_theta, -1);
  EXPECT_EQ(c.epsilon_convention, kEpsilonConvention);
  EXPECT_TRUE(c.hypotheses_verified);
}

TEST(Delta, FirstValidPlaceSkipsInvalidSplitPrime) {
  // t = 47 splits in L+(7,3,59) but eps_21 is a local square at every place above it
  auto tw = octic_tower(kEx3);
  ASSERT_TRUE(splits_completely(*tw, 47));
  const auto ctx = ResidualContext::build(kEx3, quick());
  for (const auto& place : enumerate_places(*tw, arith::OddPrime(47UL))) {
    const auto ev = evaluate_place(ctx, place);
    ASSERT_TRUE(ev.has_value());
    EXPECT_FALSE(ev->valid());
    EXPECT_THROW(decide_mu_hilbert(ctx, place), invalid_place);
  }
}

TEST(Delta, OracleCrossCheck) {
  DeltaOptions o = quick();
  o.oracle_check = true;
  for (const Triple& t : {kEx1, kEx2, kEx3}) EXPECT_TRUE(delta(t, o).oracle_checked);
}

TEST(Delta, ForcedRunIsMarkedAndCrossChecked) {
  DeltaOptions o = quick();
  o.force = true;
  // s = 31 is 7 mod 8, yet exactly one of Theta, eps_pq*Theta is a square
  const Triple off{7, 3, 31};
  ASSERT_FALSE(hypothesis_failure(off).empty());
  EXPECT_THROW(delta(off, quick()), hypothesis_violation);
  const Certificate c = delta(off, o);
  EXPECT_FALSE(c.hypotheses_verified);
  EXPECT_TRUE(c.oracle_checked);
  EXPECT_FALSE(c.warnings.empty());
  EXPECT_EQ(c.delta, 1);

  // neither candidate is a square here, so the split-prime answer is refused
  const Triple broken{7, 3, 11};
  EXPECT_FALSE(sqrt_octic(theta(broken).theta).has_value());
  EXPECT_THROW(delta(broken, o), verification_failure);
}

TEST(Invariance, DeltaAgreesAcrossValidPlaces) {
  for (const Triple& t : {kEx1, kEx2, kEx3}) {
    const auto ctx = ResidualContext::build(t, quick());
    const auto places = valid_places(ctx, quick(), 40);
    ASSERT_GE(places.size(), 3U);
    std::set<Integer> primes;
    for (const auto& ev : places) {
      primes.insert(ev.place.t());
      EXPECT_EQ(ev.delta(), places.front().delta()) << t.to_string() << " " << ev.place.label();
    }
    EXPECT_GE(primes.size(), 2U);
    DeltaOptions all = quick();
    all.all_places = true;
    EXPECT_NO_THROW(delta(t, all));
  }
}

TEST(Invariance, LocalDichotomyAtEveryValidPlace) {
  for (const Triple& t : {kEx1, kEx2, kEx3}) {
    const auto ctx = ResidualContext::build(t, quick());
    for (const auto& ev : valid_places(ctx, quick(), 60)) {
      const Integer& m = ev.place.t();
      const Integer prod = arith::mod(ev.theta_residue * ev.eps_pq_residue, m);
      const int a = oracle::legendre_enum(ev.theta_residue.get_si(), m.get_si());
      const int b = oracle::legendre_enum(prod.get_si(), m.get_si());
      EXPECT_EQ(a * b, -1);
    }
  }
}

TEST(Hilbert, DecisionMatchesLegendreRoute) {
  for (const Triple& t : {kEx1, kEx2, kEx3}) {
    const auto ctx = ResidualContext::build(t, quick());
    for (const auto& ev : valid_places(ctx, quick(), 40)) {
      const HilbertDecision h = decide_mu_hilbert(ctx, ev.place);
      EXPECT_EQ(h.delta, ev.delta());
      EXPECT_EQ(arith::hilbert_symbol(Rational(ev.eps_pq_residue), Rational(h.functional), ev.place.t()), -1);
      // a unit pairs with t through its Legendre symbol and trivially with u
      EXPECT_EQ(h.theta_symbols[0], ev.legendre_theta);
      EXPECT_EQ(h.theta_symbols[1], 1);
    }
  }
  const auto ctx1 = ResidualContext::build(kEx1, quick());
  EXPECT_EQ(decide_mu_hilbert(ctx1, enumerate_places(*ctx1.octic, arith::OddPrime(41UL)).front()).delta, 0);
  const auto place79 = enumerate_places(arith::OddPrime(79UL), kEx3).front();
  const HilbertDecision h3 = decide_mu_hilbert(kEx3, place79);
  EXPECT_EQ(h3.delta, 1);
  EXPECT_EQ(h3.basis.nonresidue, 3);
}

TEST(Hilbert, SquareUnitHasTrivialSymbols) {
  for (long t : {41L, 23L, 79L}) {
    for (long r = 1; r < t; ++r) {
      if (oracle::legendre_enum(r, t) != 1) continue;
      const auto basis = arith::local_basis(arith::OddPrime(static_cast<unsigned long>(t)));
      EXPECT_EQ(arith::hilbert_symbol(r, Rational(basis.uniformizer), Integer(t)), 1);
      EXPECT_EQ(arith::hilbert_symbol(r, Rational(basis.nonresidue), Integer(t)), 1);
    }
  }
}

TEST(Fsu, GeneratorsSquareToTheirUnitProducts) {
  for (const Triple& t : {kEx1, kEx2, kEx3}) {
    const Certificate c = delta(t);
    ASSERT_EQ(c.fsu.size(), 7U);
    EXPECT_TRUE(c.warnings.empty()) << t.to_string();
    auto tw = octic_tower(t);
    const Integer pq = t.p * t.q, ps = t.p * t.s, qs = t.q * t.s;
    auto e = [&](const Integer& d) { return to_element(fundamental_pell(d), tw); };
    const ThetaData th = theta(t);
    const std::array<OcticElement, 7> expected_square{
        e(2).squared(),       e(pq).squared(),        e(pq) * e(ps), e(pq) * e(qs),
        e(Integer(2 * qs)),   e(pq) * e(Integer(2 * pq)),
        c.delta ? e(pq) * th.theta : th.theta};
    for (std::size_t i = 0; i < 7; ++i) {
      const auto& g = c.fsu[i];
      ASSERT_EQ(g.status, FsuGenerator::Status::exact) << g.name;
      ASSERT_TRUE(g.value.has_value());
      EXPECT_EQ(g.value->squared(), expected_square[i]) << t.to_string() << " " << g.name;
      EXPECT_GT(embed_real(*g.value, kIota0<3>, 128).sign(), 0);
    }
    EXPECT_EQ(*c.fsu[5].value, lift(th.root_pq, tw));
    EXPECT_EQ(c.fsu[6].symbol, c.delta ? "sqrt(eps_" + pq.get_str() + "*Theta)" : "sqrt(Theta)");
  }
}

TEST(Fsu, InvalidTripleRejected) { EXPECT_THROW(fsu(Triple{5, 7, 11}), hypothesis_violation); }

TEST(Noncollapse, WorkedPair) {
  const auto r = noncollapse_check(kEx1, kEx3);
  EXPECT_TRUE(r.noncollapse);
  EXPECT_EQ(r.first.datum, r.second.datum);
  EXPECT_EQ(r.first.delta, 0);
  EXPECT_EQ(r.second.delta, 1);
  EXPECT_FALSE(noncollapse_check(kEx1, kEx1).noncollapse);
  EXPECT_FALSE(noncollapse_check(kEx1, kEx2).noncollapse);
}

#include <doctest.h>

#include <numeric>
#include <random>

#include "specbundle/io.hpp"
#include "specbundle/spectrum.hpp"

using namespace specbundle;

namespace {

const FinSystem kTwoCycles{5, {1, 2, 0, 4, 3}};  // (012)(34)

FinSystem random_permutation(std::mt19937& rng, int n) {
  std::vector<int> map(n);
  std::iota(map.begin(), map.end(), 0);
  std::shuffle(map.begin(), map.end(), rng);
  return FinSystem(n, std::move(map));
}

std::vector<long> orders_of(const PointSpectrumBundle& p) {
  std::vector<long> out;
  for (const auto& f : p.fibers) out.push_back(f.order);
  return out;
}

// Invariant measure from random positive per-cycle weights.
RationalMeasure random_invariant_measure(std::mt19937& rng, const FinSystem& s,
                                         long max_den = 12) {
  auto factor = maximal_trivial_factor(s);
  std::uniform_int_distribution<long> pick(1, 3);
  std::vector<long> parts(factor.n_base);
  long total = 0;
  for (auto& p : parts) {
    p = pick(rng);
    total += p;
  }
  while (total > max_den) {
    total = 0;
    for (auto& p : parts) {
      p = 1;
      total += p;
    }
  }
  std::vector<long> fiber_size(factor.n_base, 0);
  for (int l : factor.proj) ++fiber_size[l];
  std::vector<Rat> w(s.n_states);
  for (int i = 0; i < s.n_states; ++i)
    w[i] = make_rat(parts[factor.proj[i]], total) / fiber_size[factor.proj[i]];
  return RationalMeasure(std::move(w));
}

}  // namespace

TEST_CASE("spectrum bundle") {
  CHECK(orders_of(spectrum_bundle(kTwoCycles)) == std::vector<long>{3, 2});
  CHECK(orders_of(spectrum_bundle(FinSystem(3, {0, 1, 2}))) ==
        std::vector<long>{1, 1, 1});
  CHECK(orders_of(spectrum_bundle(FinSystem(6, {1, 2, 3, 4, 5, 0}))) ==
        std::vector<long>{6});
  CHECK_THROWS_AS(spectrum_bundle(FinSystem(2, {0, 0})), DiscreteSpectrumRequired);
}

TEST_CASE("measured spectrum bundle") {
  RationalMeasure mu({Rat(1, 6), Rat(1, 6), Rat(1, 6), Rat(1, 4), Rat(1, 4)});
  auto m = measured_spectrum_bundle(kTwoCycles, mu);
  REQUIRE(m.fibers.size() == 2);
  CHECK(m.fibers[0].spectrum.order == 3);
  CHECK(m.fibers[0].weight == Rat(1, 2));
  CHECK(m.fibers[1].spectrum.order == 2);
  CHECK(m.fibers[1].weight == Rat(1, 2));

  auto id = measured_spectrum_bundle(FinSystem(2, {0, 1}),
                                     RationalMeasure({Rat(1, 3), Rat(2, 3)}));
  CHECK(id.fibers[0].weight == Rat(1, 3));
  CHECK(id.fibers[1].weight == Rat(2, 3));

  auto cycle = measured_spectrum_bundle(
      FinSystem(3, {1, 2, 0}),
      RationalMeasure({Rat(1, 3), Rat(1, 3), Rat(1, 3)}));
  CHECK(cycle.fibers.size() == 1);
  CHECK(cycle.fibers[0].weight == Rat(1));

  CHECK_THROWS_AS(measured_spectrum_bundle(
                      FinSystem(2, {0, 1}), RationalMeasure({Rat(1), Rat(0)})),
                  FullSupportRequired);
  CHECK_THROWS_AS(measured_spectrum_bundle(
                      kTwoCycles, RationalMeasure({Rat(1, 2), Rat(1, 8), Rat(1, 8),
                                                   Rat(1, 8), Rat(1, 8)})),
                  InvarianceRequired);
}

TEST_CASE("spectrum bundle isomorphism") {
  PointSpectrumBundle a{{CyclicSpectrum(3), CyclicSpectrum(2)}};
  PointSpectrumBundle b{{CyclicSpectrum(2), CyclicSpectrum(3)}};
  auto eta = iso_spectrum(a, b);
  REQUIRE(eta);
  CHECK(*eta == std::vector<int>{1, 0});

  CHECK_FALSE(iso_spectrum(a, PointSpectrumBundle{{CyclicSpectrum(5)}}));
  CHECK_FALSE(iso_spectrum(PointSpectrumBundle{{CyclicSpectrum(2), CyclicSpectrum(2)}},
                           PointSpectrumBundle{{CyclicSpectrum(2), CyclicSpectrum(4)}}));
}

TEST_CASE("system isomorphism through the spectrum invariant") {
  FinSystem relabeled(5, {3, 4, 1, 0, 2});  // (034)(12)-shaped: cycles 3 + 2
  auto witness = iso_systems(kTwoCycles, relabeled);
  REQUIRE(witness);
  CHECK(verify_witness(kTwoCycles, relabeled, *witness));

  CHECK_FALSE(iso_systems(kTwoCycles, FinSystem(5, {1, 2, 3, 4, 0})));

  auto self = iso_systems(kTwoCycles, kTwoCycles);
  REQUIRE(self);
  std::vector<int> identity(5);
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(self->state_bijection == identity);

  CHECK_THROWS_AS(iso_systems(FinSystem(2, {0, 0}), FinSystem(2, {0, 1})),
                  DiscreteSpectrumRequired);
}

TEST_CASE("brute force oracle") {
  CHECK(iso_brute_force(FinSystem(2, {1, 0}), FinSystem(2, {1, 0})));
  CHECK_FALSE(iso_brute_force(FinSystem(2, {1, 0}), FinSystem(2, {0, 1})));
  CHECK_THROWS_AS(iso_brute_force(FinSystem(9, {0, 1, 2, 3, 4, 5, 6, 7, 8}),
                                  FinSystem(9, {0, 1, 2, 3, 4, 5, 6, 7, 8})),
                  InvalidInput);

  SUBCASE("agrees with iso_systems on random permutation pairs") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
      int n = 2 + trial % 6;
      auto s1 = random_permutation(rng, n);
      auto s2 = trial % 2 ? random_permutation(rng, n)
                          : FinSystem(n, [&] {
                              // conjugate of s1 by a random relabeling
                              auto relabel = random_permutation(rng, n).transition;
                              std::vector<int> map(n);
                              for (int i = 0; i < n; ++i)
                                map[relabel[i]] = relabel[s1.transition[i]];
                              return map;
                            }());
      auto fast = iso_systems(s1, s2);
      auto slow = iso_brute_force(s1, s2);
      CHECK(fast.has_value() == slow.has_value());
      if (fast) CHECK(verify_witness(s1, s2, *fast));
      if (slow) CHECK(verify_witness(s1, s2, *slow));
    }
  }
}

TEST_CASE("markov isomorphism") {
  RationalMeasure mu({Rat(1, 6), Rat(1, 6), Rat(1, 6), Rat(1, 4), Rat(1, 4)});
  FinSystem relabeled(5, {3, 4, 1, 0, 2});
  // Cycles of `relabeled`: {0,3} (2-cycle) and {1,4,2} (3-cycle).
  RationalMeasure mu2({Rat(1, 4), Rat(1, 6), Rat(1, 6), Rat(1, 4), Rat(1, 6)});
  auto witness = markov_iso(kTwoCycles, mu, relabeled, mu2);
  REQUIRE(witness);
  CHECK(verify_witness_measured(kTwoCycles, mu, relabeled, mu2, *witness));

  // Same system and measure: identity works.
  auto self = markov_iso(kTwoCycles, mu, kTwoCycles, mu);
  REQUIRE(self);

  // Two 2-cycles vs a 2-cycle and two fixed points: spectra differ.
  FinSystem pairs(4, {1, 0, 3, 2});
  FinSystem mixed(4, {1, 0, 2, 3});
  RationalMeasure quarter({Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
  CHECK_FALSE(markov_iso(pairs, quarter, mixed, quarter));

  // Equal cycle types but different weights: not Markov isomorphic.
  RationalMeasure skew({Rat(1, 8), Rat(1, 8), Rat(3, 8), Rat(3, 8)});
  CHECK_FALSE(markov_iso(pairs, quarter, pairs, skew));
  CHECK_FALSE(markov_iso_brute_force(pairs, quarter, pairs, skew));

  SUBCASE("agrees with the weight-preserving brute force") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 60; ++trial) {
      int n = 2 + trial % 5;
      auto s1 = random_permutation(rng, n);
      auto s2 = random_permutation(rng, n);
      auto mu1 = random_invariant_measure(rng, s1);
      auto mu2v = random_invariant_measure(rng, s2);
      auto fast = markov_iso(s1, mu1, s2, mu2v);
      auto slow = markov_iso_brute_force(s1, mu1, s2, mu2v);
      CHECK(fast.has_value() == slow.has_value());
      if (fast) CHECK(verify_witness_measured(s1, mu1, s2, mu2v, *fast));
    }
  }
}

TEST_CASE("canonical form") {
  auto result = canonical_form(kTwoCycles);
  REQUIRE(result.bundle.fibers.size() == 2);
  CHECK(result.bundle.fibers[0] == GroupRotationBundle::Fiber{2, 1});
  CHECK(result.bundle.fibers[1] == GroupRotationBundle::Fiber{3, 1});

  auto four = canonical_form(FinSystem(4, {1, 2, 3, 0}));
  CHECK(four.bundle.fibers == std::vector<GroupRotationBundle::Fiber>{{4, 1}});

  auto id3 = canonical_form(FinSystem(3, {0, 1, 2}));
  CHECK(id3.bundle.fibers.size() == 3);
  for (const auto& f : id3.bundle.fibers)
    CHECK(f == GroupRotationBundle::Fiber{1, 1});

  CHECK_THROWS_AS(canonical_form(FinSystem(2, {0, 0})), DiscreteSpectrumRequired);

  SUBCASE("idempotent and witness-verified on random permutations") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 50; ++trial) {
      auto s = random_permutation(rng, 1 + trial % 12);
      CHECK(canonical_form_idempotent(s));
      auto c = canonical_form(s);
      CHECK(verify_witness(s, rotation_bundle_as_system(c.bundle).system,
                           c.witness));
    }
  }
}

TEST_CASE("realization") {
  PointSpectrumBundle sigma{{CyclicSpectrum(3), CyclicSpectrum(2)}};
  auto r = realize(sigma);
  CHECK(r.bundle.fibers ==
        std::vector<GroupRotationBundle::Fiber>{{2, 1}, {3, 1}});
  auto round = spectrum_bundle(rotation_bundle_as_system(r.bundle).system);
  CHECK(serialize(round) == serialize(sigma));

  MeasuredSpectrumBundle msigma{
      {{CyclicSpectrum(2), Rat(1, 2)}, {CyclicSpectrum(3), Rat(1, 2)}}};
  auto mr = realize(msigma);
  REQUIRE(mr.measure);
  CHECK(mr.measure->weights == std::vector<Rat>{Rat(1, 4), Rat(1, 4), Rat(1, 6),
                                                Rat(1, 6), Rat(1, 6)});

  auto fixed = realize(PointSpectrumBundle{{CyclicSpectrum(1)}});
  CHECK(rotation_bundle_as_system(fixed.bundle).system == FinSystem(1, {0}));

  CHECK_THROWS_AS(
      realize(MeasuredSpectrumBundle{{{CyclicSpectrum(2), Rat(0)},
                                      {CyclicSpectrum(3), Rat(1)}}}),
      FullSupportRequired);

  SUBCASE("round trip on random spectrum bundles") {
    std::mt19937 rng(59);
    std::uniform_int_distribution<long> order(1, 20);
    std::uniform_int_distribution<int> count(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
      PointSpectrumBundle sigma2;
      int fibers = count(rng);
      for (int i = 0; i < fibers; ++i)
        sigma2.fibers.push_back(CyclicSpectrum(order(rng)));
      auto realized = realize(sigma2);
      auto back = spectrum_bundle(rotation_bundle_as_system(realized.bundle).system);
      CHECK(serialize(back) == serialize(sigma2));
    }
  }
}

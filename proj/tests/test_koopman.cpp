#include <doctest.h>

#include <numeric>
#include <random>

#include "specbundle/koopman.hpp"

using namespace specbundle;

namespace {

const FinSystem kTwoCycles{5, {1, 2, 0, 4, 3}};  // (012)(34)
const FinSystem kSwap{2, {1, 0}};

QFunction real_function(std::initializer_list<long> values) {
  QFunction f;
  for (long v : values) f.emplace_back(v);
  return f;
}

QFunction random_function(std::mt19937& rng, int n) {
  std::uniform_int_distribution<long> num(-5, 5);
  std::uniform_int_distribution<long> den(1, 7);
  QFunction f(n);
  for (auto& v : f)
    v = QComplex(make_rat(num(rng), den(rng)), make_rat(num(rng), den(rng)));
  return f;
}

FinSystem random_permutation(std::mt19937& rng, int n) {
  std::vector<int> map(n);
  std::iota(map.begin(), map.end(), 0);
  std::shuffle(map.begin(), map.end(), rng);
  return FinSystem(n, std::move(map));
}

}  // namespace

TEST_CASE("koopman operator is composition") {
  CHECK(koopman_apply(kSwap, real_function({1, 0})) == real_function({0, 1}));
  auto f = real_function({3, 1, 4});
  CHECK(koopman_apply(FinSystem(3, {0, 1, 2}), f) == f);
  CHECK(koopman_apply(FinSystem(2, {0, 0}), real_function({1, 5})) ==
        real_function({1, 1}));
  CHECK_THROWS_AS(koopman_apply(kSwap, real_function({1})), InvalidInput);
}

TEST_CASE("cesaro means") {
  auto f = real_function({1, 0});
  auto half = cesaro_mean(kSwap, f, 2);
  CHECK(half[0] == QComplex(Rat(1, 2), Rat(0)));
  CHECK(half[1] == QComplex(Rat(1, 2), Rat(0)));

  auto thirds = cesaro_mean(kSwap, f, 3);
  CHECK(thirds[0] == QComplex(Rat(2, 3), Rat(0)));
  CHECK(thirds[1] == QComplex(Rat(1, 3), Rat(0)));

  CHECK(cesaro_mean(kTwoCycles, real_function({2, 7, 1, 8, 2}), 1) ==
        real_function({2, 7, 1, 8, 2}));
  CHECK_THROWS_AS(cesaro_mean(kSwap, f, 0), InvalidInput);
}

TEST_CASE("n * A_n f = sum of iterates, exactly") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_permutation(rng, 2 + trial % 6);
    auto f = random_function(rng, s.n_states);
    long n = 1 + trial % 50;
    auto mean = cesaro_mean(s, f, n);
    QFunction sum(s.n_states, QComplex(0));
    auto iterate = f;
    for (long k = 0; k < n; ++k) {
      for (int i = 0; i < s.n_states; ++i) sum[i] = sum[i] + iterate[i];
      iterate = koopman_apply(s, iterate);
    }
    for (int i = 0; i < s.n_states; ++i)
      CHECK(mean[i] * Rat(n) == sum[i]);
  }
}

TEST_CASE("mean ergodic projection") {
  CHECK(mean_ergodic_projection(kSwap, real_function({1, 0})) ==
        cesaro_mean(kSwap, real_function({1, 0}), 2));

  auto p = mean_ergodic_projection(kTwoCycles, real_function({1, 0, 0, 0, 2}));
  QFunction expected{QComplex(Rat(1, 3), Rat(0)), QComplex(Rat(1, 3), Rat(0)),
                     QComplex(Rat(1, 3), Rat(0)), QComplex(Rat(1), Rat(0)),
                     QComplex(Rat(1), Rat(0))};
  CHECK(p == expected);

  auto f = real_function({2, 5, 9});
  CHECK(mean_ergodic_projection(FinSystem(3, {0, 1, 2}), f) == f);
  CHECK_THROWS_AS(mean_ergodic_projection(FinSystem(2, {0, 0}), real_function({1, 0})),
                  DiscreteSpectrumRequired);

  SUBCASE("P = A_N at N = lcm, and A_jN = P") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      auto s = random_permutation(rng, 2 + trial % 8);
      auto f = random_function(rng, s.n_states);
      long n = cycle_lcm(s);
      auto p = mean_ergodic_projection(s, f);
      CHECK(p == cesaro_mean(s, f, n));
      CHECK(p == cesaro_mean(s, f, 3 * n));
      // P^2 = P and T P = P.
      CHECK(mean_ergodic_projection(s, p) == p);
      CHECK(koopman_apply(s, p) == p);
    }
  }
}

TEST_CASE("point spectrum of a fiber") {
  auto two = point_spectrum_fiber(kSwap);
  CHECK(two.spectrum.order == 2);
  REQUIRE(two.eigenvalues.size() == 2);
  CHECK(two.eigenvalues[1] == RationalAngle(1, 2));
  CHECK(two.eigenfunctions[1] ==
        CyclotomicFunction{RationalAngle(0, 1), RationalAngle(1, 2)});

  auto one = point_spectrum_fiber(FinSystem(1, {0}));
  CHECK(one.spectrum.order == 1);

  auto three = point_spectrum_fiber(FinSystem(3, {1, 2, 0}));
  CHECK(three.spectrum.order == 3);
  CHECK(three.eigenvalues ==
        std::vector<RationalAngle>{RationalAngle(0, 1), RationalAngle(1, 3),
                                   RationalAngle(2, 3)});

  CHECK_THROWS_AS(point_spectrum_fiber(kTwoCycles), InvalidInput);
}

TEST_CASE("eigen equation checks") {
  CyclotomicFunction sign{RationalAngle(0, 1), RationalAngle(1, 2)};
  CHECK(check_eigen(kSwap, RationalAngle(1, 2), sign));

  CyclotomicFunction constant{RationalAngle(0, 1), RationalAngle(0, 1)};
  CHECK_FALSE(check_eigen(kSwap, RationalAngle(1, 2), constant));
  CHECK(check_eigen(kSwap, RationalAngle(0, 1), constant));

  SUBCASE("all outputs of point_spectrum_fiber pass, eigenvalues distinct") {
    std::mt19937 rng(31);
    for (int m = 1; m <= 12; ++m) {
      std::vector<int> map(m);
      for (int i = 0; i < m; ++i) map[i] = (i + 1) % m;
      auto spec = point_spectrum_fiber(FinSystem(m, std::move(map)));
      for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
        CHECK(check_eigen(FinSystem(m, [&] {
                std::vector<int> mm(m);
                for (int i = 0; i < m; ++i) mm[i] = (i + 1) % m;
                return mm;
              }()),
                          spec.eigenvalues[k], spec.eigenfunctions[k]));
        for (std::size_t j = k + 1; j < spec.eigenvalues.size(); ++j)
          CHECK(spec.eigenvalues[k] != spec.eigenvalues[j]);
      }
    }
  }
}

TEST_CASE("eigenfunctions for distinct eigenvalues are independent") {
  // Orders whose roots of unity lie in Q(i): exact rank over QComplex.
  for (int m : {1, 2, 4}) {
    std::vector<int> map(m);
    for (int i = 0; i < m; ++i) map[i] = (i + 1) % m;
    auto spec = point_spectrum_fiber(FinSystem(m, std::move(map)));
    auto to_qcomplex = [](const CyclotomicValue& v) {
      if (!v) return QComplex(Rat(0), Rat(0));
      if (v->num == 0) return QComplex(Rat(1), Rat(0));
      if (*v == RationalAngle(1, 4)) return QComplex(Rat(0), Rat(1));
      if (*v == RationalAngle(1, 2)) return QComplex(Rat(-1), Rat(0));
      if (*v == RationalAngle(3, 4)) return QComplex(Rat(0), Rat(-1));
      throw Error("root of unity outside Q(i)");
    };
    // Gaussian elimination over exact Gaussian rationals.
    std::vector<std::vector<QComplex>> rows;
    for (const auto& f : spec.eigenfunctions) {
      std::vector<QComplex> row;
      for (const auto& v : f) row.push_back(to_qcomplex(v));
      rows.push_back(std::move(row));
    }
    int rank = 0;
    for (int col = 0; col < m; ++col) {
      int pivot = -1;
      for (std::size_t r = rank; r < rows.size(); ++r)
        if (!(rows[r][col] == QComplex(Rat(0), Rat(0)))) {
          pivot = static_cast<int>(r);
          break;
        }
      if (pivot < 0) continue;
      std::swap(rows[rank], rows[pivot]);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(r) == rank) continue;
        const auto& p = rows[rank][col];
        Rat norm = p.re * p.re + p.im * p.im;
        QComplex factor = QComplex(rows[r][col].re * p.re + rows[r][col].im * p.im,
                                   rows[r][col].im * p.re - rows[r][col].re * p.im) /
                          norm;
        for (int c = 0; c < m; ++c)
          rows[r][c] = rows[r][c] - factor * rows[rank][c];
      }
      ++rank;
    }
    CHECK(rank == m);
  }
}

TEST_CASE("kronecker dimension") {
  CHECK(kronecker_dimension(kTwoCycles) == 5);
  CHECK(kronecker_dimension(FinSystem(2, {0, 0})) == 1);
  CHECK(kronecker_dimension(FinSystem(4, {0, 1, 2, 3})) == 4);

  SUBCASE("= n_states iff discrete spectrum, exhaustively on 4 states") {
    for (int code = 0; code < 256; ++code) {
      std::vector<int> map{code & 3, (code >> 2) & 3, (code >> 4) & 3,
                           (code >> 6) & 3};
      FinSystem s(4, std::move(map));
      CHECK((kronecker_dimension(s) == 4) == has_discrete_spectrum(s));
    }
  }
}

TEST_CASE("invariant measure basis") {
  auto b = maximal_trivial_factor(kTwoCycles);
  auto basis = invariant_measure_basis(b);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].weights ==
        std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3), Rat(0), Rat(0)});
  CHECK(basis[1].weights ==
        std::vector<Rat>{Rat(0), Rat(0), Rat(0), Rat(1, 2), Rat(1, 2)});

  auto id2 = invariant_measure_basis(maximal_trivial_factor(FinSystem(2, {0, 1})));
  CHECK(id2[0] == RationalMeasure::dirac(2, 0));
  CHECK(id2[1] == RationalMeasure::dirac(2, 1));

  auto cycle = invariant_measure_basis(maximal_trivial_factor(FinSystem(3, {1, 2, 0})));
  REQUIRE(cycle.size() == 1);
  CHECK(cycle[0].weights == std::vector<Rat>{Rat(1, 3), Rat(1, 3), Rat(1, 3)});
}

TEST_CASE("pushforward") {
  RationalMeasure m1({Rat(0), Rat(0), Rat(0), Rat(1, 2), Rat(1, 2)});
  auto nu = pushforward(m1, {0, 0, 0, 1, 1}, 2);
  CHECK(nu.weights == std::vector<Rat>{Rat(0), Rat(1)});

  RationalMeasure uniform({Rat(1, 4), Rat(1, 4), Rat(1, 4), Rat(1, 4)});
  CHECK(pushforward(uniform, {0, 0, 1, 1}, 2).weights ==
        std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

  CHECK(pushforward(RationalMeasure::dirac(3, 0), {2, 1, 0}, 3) ==
        RationalMeasure::dirac(3, 2));
}

TEST_CASE("support lemma") {
  auto b = maximal_trivial_factor(kTwoCycles);
  RationalMeasure m1({Rat(0), Rat(0), Rat(0), Rat(1, 2), Rat(1, 2)});
  CHECK(support_in_fiber_iff_dirac(b, m1, 1) == std::pair{true, true});
  CHECK(support_in_fiber_iff_dirac(b, m1, 0) == std::pair{false, false});
  RationalMeasure split({Rat(1, 2), Rat(0), Rat(0), Rat(1, 2), Rat(0)});
  CHECK(support_in_fiber_iff_dirac(b, split, 0) == std::pair{false, false});

  SUBCASE("the biconditional holds for random measures") {
    std::mt19937 rng(37);
    std::uniform_int_distribution<long> num(0, 6);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<Rat> w(5);
      Rat total = 0;
      for (auto& x : w) {
        x = make_rat(num(rng), 7);
        total += x;
      }
      if (total == 0) continue;
      for (auto& x : w) x /= total;
      RationalMeasure mu(std::move(w));
      for (int l = 0; l < 2; ++l) {
        auto [supported, dirac] = support_in_fiber_iff_dirac(b, mu, l);
        CHECK(supported == dirac);
      }
    }
  }
}

TEST_CASE("disintegration") {
  auto b = maximal_trivial_factor(kTwoCycles);
  RationalMeasure mu({Rat(1, 6), Rat(1, 6), Rat(1, 6), Rat(1, 4), Rat(1, 4)});
  auto nu = disintegrate(b, mu);
  CHECK(nu.weights == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});

  RationalMeasure m0({Rat(1, 3), Rat(1, 3), Rat(1, 3), Rat(0), Rat(0)});
  CHECK(disintegrate(b, m0) == RationalMeasure::dirac(2, 0));

  RationalMeasure bad({Rat(1, 2), Rat(1, 4), Rat(1, 4), Rat(0), Rat(0)});
  CHECK_THROWS_AS(disintegrate(b, bad), InvarianceRequired);

  SUBCASE("round trip: recombination and pushforward are inverse") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<long> num(1, 6);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<int> base_map(2 + trial % 6);
      std::iota(base_map.begin(), base_map.end(), 0);
      std::shuffle(base_map.begin(), base_map.end(), rng);
      auto factor = maximal_trivial_factor(
          FinSystem(static_cast<int>(base_map.size()), base_map));
      auto basis = invariant_measure_basis(factor);
      std::vector<Rat> nu_w(factor.n_base);
      Rat total = 0;
      for (auto& x : nu_w) {
        x = make_rat(num(rng), 6);
        total += x;
      }
      for (auto& x : nu_w) x /= total;
      RationalMeasure nu(nu_w);
      std::vector<Rat> combined(factor.system.n_states, Rat(0));
      for (int l = 0; l < factor.n_base; ++l)
        for (int i = 0; i < factor.system.n_states; ++i)
          combined[i] += nu.weights[l] * basis[l].weights[i];
      RationalMeasure mu(std::move(combined));
      CHECK(disintegrate(factor, mu) == nu);
    }
  }
}

TEST_CASE("mergchar finite equivalences") {
  auto b = maximal_trivial_factor(kTwoCycles);
  auto report = mergchar_finite_check(
      b, {real_function({1, 0, 0, 0, 2})},
      {RationalMeasure({Rat(1, 2), Rat(1, 2)}), RationalMeasure::dirac(2, 0)});
  CHECK(report.all());
  CHECK(report.lcm_period == 6);
  CHECK(cesaro_mean(kTwoCycles, real_function({1, 0, 0, 0, 2}), 6) ==
        mean_ergodic_projection(kTwoCycles, real_function({1, 0, 0, 0, 2})));

  auto identity = maximal_trivial_factor(FinSystem(2, {0, 1}));
  auto id_report = mergchar_finite_check(identity, {real_function({1, 2})},
                                         {RationalMeasure({Rat(1, 3), Rat(2, 3)})});
  CHECK(id_report.all());
  CHECK(id_report.lcm_period == 1);

  // Full character sum vanishes: eigenfunction for 1/4 averages to zero.
  FinSystem four(4, {1, 2, 3, 0});
  QFunction eigen{QComplex(Rat(1), Rat(0)), QComplex(Rat(0), Rat(1)),
                  QComplex(Rat(-1), Rat(0)), QComplex(Rat(0), Rat(-1))};
  auto averaged = cesaro_mean(four, eigen, 4);
  for (const auto& v : averaged) CHECK(v == QComplex(Rat(0), Rat(0)));
}

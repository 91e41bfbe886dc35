#include "specbundle/koopman.hpp"

#include <numeric>
#include <string>

namespace specbundle {

QFunction koopman_apply(const FinSystem& s, const QFunction& f) {
  if (f.size() != static_cast<std::size_t>(s.n_states))
    throw InvalidInput("function length != n_states");
  QFunction out(f.size());
  for (int i = 0; i < s.n_states; ++i) out[i] = f[s.transition[i]];
  return out;
}

QFunction cesaro_mean(const FinSystem& s, const QFunction& f, long n) {
  if (n < 1) throw InvalidInput("Cesaro mean needs n >= 1");
  if (f.size() != static_cast<std::size_t>(s.n_states))
    throw InvalidInput("function length != n_states");
  QFunction sum = f;
  QFunction iterate = f;
  for (long k = 1; k < n; ++k) {
    iterate = koopman_apply(s, iterate);
    for (int i = 0; i < s.n_states; ++i) sum[i] = sum[i] + iterate[i];
  }
  const Rat scale(1, n);
  for (auto& v : sum) v = v * scale;
  return sum;
}

QFunction mean_ergodic_projection(const FinSystem& s, const QFunction& f) {
  if (!has_discrete_spectrum(s)) throw DiscreteSpectrumRequired();
  if (f.size() != static_cast<std::size_t>(s.n_states))
    throw InvalidInput("function length != n_states");
  const auto factor = maximal_trivial_factor(s);
  std::vector<QComplex> total(factor.n_base, QComplex(0));
  std::vector<long> count(factor.n_base, 0);
  for (int i = 0; i < s.n_states; ++i) {
    total[factor.proj[i]] = total[factor.proj[i]] + f[i];
    ++count[factor.proj[i]];
  }
  QFunction out(f.size());
  for (int i = 0; i < s.n_states; ++i)
    out[i] = total[factor.proj[i]] / Rat(count[factor.proj[i]]);
  return out;
}

FiberSpectrum point_spectrum_fiber(const FinSystem& s) {
  if (!is_minimal(s)) throw InvalidInput("point spectrum fiber needs a minimal system");
  const long m = s.n_states;
  // Orbit position of each state relative to the anchor x0 = 0.
  std::vector<long> pos(m);
  int x = 0;
  for (long j = 0; j < m; ++j) {
    pos[x] = j;
    x = s.transition[x];
  }

  FiberSpectrum out;
  out.spectrum = CyclicSpectrum(m);
  for (long k = 0; k < m; ++k) {
    RationalAngle lambda(k, m);
    CyclotomicFunction f(m);
    for (int i = 0; i < m; ++i) f[i] = RationalAngle(k * pos[i], m);
    if (!check_eigen(s, lambda, f))
      throw Error("point_spectrum_fiber: eigenfunction check failed (internal bug)");
    out.eigenvalues.push_back(lambda);
    out.eigenfunctions.push_back(std::move(f));
  }
  return out;
}

bool check_eigen(const FinSystem& s, const RationalAngle& lambda,
                 const CyclotomicFunction& f) {
  if (f.size() != static_cast<std::size_t>(s.n_states))
    throw InvalidInput("function length != n_states");
  for (int i = 0; i < s.n_states; ++i) {
    const auto& at_image = f[s.transition[i]];
    if (!f[i].has_value()) {
      if (at_image.has_value()) return false;
    } else {
      if (!at_image.has_value() || *at_image != lambda + *f[i]) return false;
    }
  }
  return true;
}

int kronecker_dimension(const FinSystem& s) {
  int dim = 0;
  for (int i = 0; i < s.n_states; ++i) {
    int x = i;
    for (int step = 0; step < s.n_states; ++step) {
      x = s.transition[x];
      if (x == i) {
        ++dim;
        break;
      }
    }
  }
  return dim;
}

std::vector<RationalMeasure> invariant_measure_basis(const FinBundle& b) {
  if (!has_discrete_spectrum(b.system)) throw DiscreteSpectrumRequired();
  std::vector<long> fiber_size(b.n_base, 0);
  for (int i = 0; i < b.system.n_states; ++i) ++fiber_size[b.proj[i]];

  std::vector<RationalMeasure> out;
  for (int l = 0; l < b.n_base; ++l) {
    std::vector<Rat> w(b.system.n_states, Rat(0));
    for (int i = 0; i < b.system.n_states; ++i)
      if (b.proj[i] == l) w[i] = Rat(1, fiber_size[l]);
    RationalMeasure m(std::move(w));
    if (invariance_witness(b.system, m) != -1)
      throw Error("invariant_measure_basis: measure not invariant (internal bug)");
    out.push_back(std::move(m));
  }
  return out;
}

RationalMeasure pushforward(const RationalMeasure& mu,
                            const std::vector<int>& proj, int n_base) {
  if (mu.weights.size() != proj.size())
    throw InvalidInput("measure length != projection length");
  std::vector<Rat> w(n_base, Rat(0));
  for (std::size_t i = 0; i < proj.size(); ++i) w[proj[i]] += mu.weights[i];
  return RationalMeasure(std::move(w));
}

std::pair<bool, bool> support_in_fiber_iff_dirac(const FinBundle& b,
                                                 const RationalMeasure& mu,
                                                 int l) {
  if (l < 0 || l >= b.n_base) throw InvalidInput("base index out of range");
  bool supported = true;
  for (int i = 0; i < b.system.n_states; ++i)
    if (mu.weights[i] > 0 && b.proj[i] != l) supported = false;
  const auto nu = pushforward(mu, b.proj, b.n_base);
  const bool dirac = nu == RationalMeasure::dirac(b.n_base, l);
  return {supported, dirac};
}

int invariance_witness(const FinSystem& s, const RationalMeasure& mu) {
  if (mu.weights.size() != static_cast<std::size_t>(s.n_states))
    throw InvalidInput("measure length != n_states");
  std::vector<Rat> pushed(s.n_states, Rat(0));
  for (int j = 0; j < s.n_states; ++j) pushed[s.transition[j]] += mu.weights[j];
  for (int i = 0; i < s.n_states; ++i)
    if (pushed[i] != mu.weights[i]) return i;
  return -1;
}

RationalMeasure disintegrate(const FinBundle& b, const RationalMeasure& mu) {
  if (!has_discrete_spectrum(b.system)) throw DiscreteSpectrumRequired();
  if (int witness = invariance_witness(b.system, mu); witness != -1)
    throw InvarianceRequired(witness);
  auto nu = pushforward(mu, b.proj, b.n_base);

  const auto basis = invariant_measure_basis(b);
  std::vector<Rat> recombined(b.system.n_states, Rat(0));
  for (int l = 0; l < b.n_base; ++l)
    for (int i = 0; i < b.system.n_states; ++i)
      recombined[i] += nu.weights[l] * basis[l].weights[i];
  if (recombined != mu.weights)
    throw Error("disintegrate: recombination identity failed (internal bug)");
  return nu;
}

long cycle_lcm(const FinSystem& s) {
  if (!has_discrete_spectrum(s)) throw DiscreteSpectrumRequired();
  long result = 1;
  std::vector<bool> done(s.n_states, false);
  for (int i = 0; i < s.n_states; ++i) {
    if (done[i]) continue;
    long len = 0;
    int x = i;
    do {
      done[x] = true;
      x = s.transition[x];
      ++len;
    } while (x != i);
    result = std::lcm(result, len);
  }
  return result;
}

MergcharReport mergchar_finite_check(
    const FinBundle& b, const std::vector<QFunction>& test_functions,
    const std::vector<RationalMeasure>& base_measures) {
  if (!has_discrete_spectrum(b.system)) throw DiscreteSpectrumRequired();
  const auto factor = maximal_trivial_factor(b.system);
  if (factor.proj != b.proj || factor.n_base != b.n_base)
    throw InvalidInput("mergchar check requires the maximal-trivial-factor bundle");

  MergcharReport report;
  report.lcm_period = cycle_lcm(b.system);

  // (a) + (c): A_N f equals the projection and is fiberwise constant.
  for (const auto& f : test_functions) {
    const auto averaged = cesaro_mean(b.system, f, report.lcm_period);
    const auto projected = mean_ergodic_projection(b.system, f);
    if (averaged != projected) report.mean_ergodic_at_lcm = false;
    for (int i = 0; i < b.system.n_states; ++i)
      for (int j = 0; j < b.system.n_states; ++j)
        if (b.proj[i] == b.proj[j] && averaged[i] != averaged[j])
          report.averages_fiberwise_constant = false;
  }

  // (b): each fiber is a single cycle, whose unique invariant measure is
  // the uniform one; any fiber-supported invariant measure must equal it.
  const auto basis = invariant_measure_basis(b);
  for (int l = 0; l < b.n_base; ++l) {
    const auto fiber = fiber_subsystem(b, l);
    if (!is_minimal(fiber.system)) report.fibers_uniquely_ergodic = false;
    if (invariance_witness(b.system, basis[l]) != -1)
      report.fibers_uniquely_ergodic = false;
  }

  // (d): nu -> sum nu[l] m_l and pushforward are mutually inverse.
  for (const auto& nu : base_measures) {
    if (nu.weights.size() != static_cast<std::size_t>(b.n_base))
      throw InvalidInput("base measure length != n_base");
    std::vector<Rat> combined(b.system.n_states, Rat(0));
    for (int l = 0; l < b.n_base; ++l)
      for (int i = 0; i < b.system.n_states; ++i)
        combined[i] += nu.weights[l] * basis[l].weights[i];
    RationalMeasure mu(std::move(combined));
    if (invariance_witness(b.system, mu) != -1) report.measure_bijection = false;
    if (pushforward(mu, b.proj, b.n_base) != nu) report.measure_bijection = false;
    if (disintegrate(b, mu) != nu) report.measure_bijection = false;
  }
  return report;
}

}  // namespace specbundle

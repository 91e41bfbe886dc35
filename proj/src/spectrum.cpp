#include "specbundle/spectrum.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

namespace specbundle {

void GroupRotationBundle::validate() const {
  if (fibers.empty()) throw InvalidInput("rotation bundle needs at least one fiber");
  for (std::size_t l = 0; l < fibers.size(); ++l) {
    const auto& f = fibers[l];
    if (f.order < 1) throw InvalidInput("fiber order must be >= 1");
    long step = ((f.step % f.order) + f.order) % f.order;
    if (std::gcd(step == 0 ? f.order : step, f.order) != 1)
      throw InvalidInput("fiber " + std::to_string(l) +
                         " is not minimal: gcd(step, order) != 1");
  }
}

FinBundle rotation_bundle_as_system(const GroupRotationBundle& g) {
  g.validate();
  std::vector<int> map;
  std::vector<int> proj;
  for (std::size_t l = 0; l < g.fibers.size(); ++l) {
    const long m = g.fibers[l].order;
    const long step = ((g.fibers[l].step % m) + m) % m;
    const int offset = static_cast<int>(map.size());
    for (long x = 0; x < m; ++x) {
      map.push_back(offset + static_cast<int>((x + step) % m));
      proj.push_back(static_cast<int>(l));
    }
  }
  const int n_total = static_cast<int>(map.size());
  return FinBundle(FinSystem(n_total, std::move(map)),
                   static_cast<int>(g.fibers.size()), std::move(proj));
}

PointSpectrumBundle spectrum_bundle(const FinSystem& s) {
  if (!has_discrete_spectrum(s)) throw DiscreteSpectrumRequired();
  const auto factor = maximal_trivial_factor(s);
  PointSpectrumBundle out;
  for (int l = 0; l < factor.n_base; ++l) {
    const auto fiber = fiber_subsystem(factor, l);
    const auto spec = point_spectrum_fiber(fiber.system);
    out.fibers.push_back(spec.spectrum);
  }
  return out;
}

MeasuredSpectrumBundle measured_spectrum_bundle(const FinSystem& s,
                                                const RationalMeasure& mu) {
  if (mu.weights.size() != static_cast<std::size_t>(s.n_states))
    throw InvalidInput("measure length != n_states");
  for (std::size_t i = 0; i < mu.weights.size(); ++i)
    if (mu.weights[i] == 0) throw FullSupportRequired(static_cast<int>(i));
  if (int witness = invariance_witness(s, mu); witness != -1)
    throw InvarianceRequired(witness);
  // A fully supported invariant measure forces invertibility.
  if (!has_discrete_spectrum(s)) throw DiscreteSpectrumRequired();

  const auto factor = maximal_trivial_factor(s);
  const auto nu = pushforward(mu, factor.proj, factor.n_base);
  const auto plain = spectrum_bundle(s);
  MeasuredSpectrumBundle out;
  for (int l = 0; l < factor.n_base; ++l)
    out.fibers.push_back({plain.fibers[l], nu.weights[l]});
  return out;
}

namespace {

std::vector<std::size_t> sorted_indices_by_order(
    const std::vector<CyclicSpectrum>& fibers) {
  std::vector<std::size_t> idx(fibers.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return fibers[a].order < fibers[b].order;
  });
  return idx;
}

// Orbit of the fiber minimum, in dynamical order.
std::vector<int> fiber_orbit(const FinSystem& s, int start) {
  std::vector<int> orbit{start};
  for (int x = s.transition[start]; x != start; x = s.transition[x])
    orbit.push_back(x);
  return orbit;
}

}  // namespace

std::optional<std::vector<int>> iso_spectrum(const PointSpectrumBundle& a,
                                             const PointSpectrumBundle& b) {
  if (a.fibers.size() != b.fibers.size()) return std::nullopt;
  const auto ia = sorted_indices_by_order(a.fibers);
  const auto ib = sorted_indices_by_order(b.fibers);
  std::vector<int> eta(a.fibers.size());
  for (std::size_t j = 0; j < ia.size(); ++j) {
    if (a.fibers[ia[j]].order != b.fibers[ib[j]].order) return std::nullopt;
    eta[ia[j]] = static_cast<int>(ib[j]);
  }
  return eta;
}

bool verify_witness(const FinSystem& s1, const FinSystem& s2, const IsoWitness& w) {
  if (s1.n_states != s2.n_states ||
      w.state_bijection.size() != static_cast<std::size_t>(s1.n_states))
    return false;
  std::vector<bool> hit(s2.n_states, false);
  for (int image : w.state_bijection) {
    if (image < 0 || image >= s2.n_states || hit[image]) return false;
    hit[image] = true;
  }
  for (int i = 0; i < s1.n_states; ++i)
    if (w.state_bijection[s1.transition[i]] !=
        s2.transition[w.state_bijection[i]])
      return false;
  if (!w.base_bijection.empty()) {
    const auto f1 = maximal_trivial_factor(s1);
    const auto f2 = maximal_trivial_factor(s2);
    if (w.base_bijection.size() != static_cast<std::size_t>(f1.n_base) ||
        f1.n_base != f2.n_base)
      return false;
    std::vector<bool> bhit(f2.n_base, false);
    for (int image : w.base_bijection) {
      if (image < 0 || image >= f2.n_base || bhit[image]) return false;
      bhit[image] = true;
    }
    for (int i = 0; i < s1.n_states; ++i)
      if (w.base_bijection[f1.proj[i]] != f2.proj[w.state_bijection[i]])
        return false;
  }
  return true;
}

bool verify_witness_measured(const FinSystem& s1, const RationalMeasure& mu1,
                             const FinSystem& s2, const RationalMeasure& mu2,
                             const IsoWitness& w) {
  if (!verify_witness(s1, s2, w)) return false;
  for (int i = 0; i < s1.n_states; ++i)
    if (mu1.weights[i] != mu2.weights[w.state_bijection[i]]) return false;
  return true;
}

namespace {

// Conjugacy aligning matched cycles at their canonical-section states.
IsoWitness witness_from_base_matching(const FinSystem& s1, const FinSystem& s2,
                                      const std::vector<int>& eta) {
  const auto f1 = maximal_trivial_factor(s1);
  const auto f2 = maximal_trivial_factor(s2);
  const auto sec1 = canonical_section(f1);
  const auto sec2 = canonical_section(f2);
  IsoWitness w;
  w.state_bijection.assign(s1.n_states, -1);
  w.base_bijection = eta;
  for (int l = 0; l < f1.n_base; ++l) {
    const auto orbit1 = fiber_orbit(s1, sec1.choice[l]);
    const auto orbit2 = fiber_orbit(s2, sec2.choice[eta[l]]);
    for (std::size_t j = 0; j < orbit1.size(); ++j)
      w.state_bijection[orbit1[j]] = orbit2[j];
  }
  return w;
}

}  // namespace

std::optional<IsoWitness> iso_systems(const FinSystem& s1, const FinSystem& s2) {
  if (!has_discrete_spectrum(s1) || !has_discrete_spectrum(s2))
    throw DiscreteSpectrumRequired();
  const auto eta = iso_spectrum(spectrum_bundle(s1), spectrum_bundle(s2));
  if (!eta) return std::nullopt;
  auto w = witness_from_base_matching(s1, s2, *eta);
  if (!verify_witness(s1, s2, w))
    throw Error("iso_systems: constructed witness failed verification (internal bug)");
  return w;
}

namespace {

std::vector<int> base_bijection_from_states(const FinSystem& s1,
                                            const FinSystem& s2,
                                            const std::vector<int>& theta) {
  const auto f1 = maximal_trivial_factor(s1);
  const auto f2 = maximal_trivial_factor(s2);
  if (f1.n_base != f2.n_base) return {};
  std::vector<int> eta(f1.n_base, -1);
  for (int i = 0; i < s1.n_states; ++i) eta[f1.proj[i]] = f2.proj[theta[i]];
  return eta;
}

}  // namespace

std::optional<IsoWitness> iso_brute_force(const FinSystem& s1, const FinSystem& s2,
                                          int max_states) {
  if (s1.n_states > max_states || s2.n_states > max_states)
    throw InvalidInput("brute-force size bound exceeded");
  if (s1.n_states != s2.n_states) return std::nullopt;
  std::vector<int> perm(s1.n_states);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < s1.n_states && ok; ++i)
      ok = perm[s1.transition[i]] == s2.transition[perm[i]];
    if (ok) {
      IsoWitness w;
      w.state_bijection = perm;
      w.base_bijection = base_bijection_from_states(s1, s2, perm);
      return w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

std::optional<IsoWitness> markov_iso(const FinSystem& s1, const RationalMeasure& mu1,
                                     const FinSystem& s2, const RationalMeasure& mu2) {
  const auto m1 = measured_spectrum_bundle(s1, mu1);
  const auto m2 = measured_spectrum_bundle(s2, mu2);
  if (m1.fibers.size() != m2.fibers.size()) return std::nullopt;

  auto sorted = [](const MeasuredSpectrumBundle& m) {
    std::vector<std::size_t> idx(m.fibers.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(m.fibers[a].spectrum.order, m.fibers[a].weight) <
             std::tie(m.fibers[b].spectrum.order, m.fibers[b].weight);
    });
    return idx;
  };
  const auto i1 = sorted(m1);
  const auto i2 = sorted(m2);
  std::vector<int> eta(m1.fibers.size());
  for (std::size_t j = 0; j < i1.size(); ++j) {
    if (m1.fibers[i1[j]] != m2.fibers[i2[j]]) return std::nullopt;
    eta[i1[j]] = static_cast<int>(i2[j]);
  }
  auto w = witness_from_base_matching(s1, s2, eta);
  if (!verify_witness_measured(s1, mu1, s2, mu2, w))
    throw Error("markov_iso: constructed witness failed verification (internal bug)");
  return w;
}

std::optional<IsoWitness> markov_iso_brute_force(
    const FinSystem& s1, const RationalMeasure& mu1, const FinSystem& s2,
    const RationalMeasure& mu2, int max_states) {
  if (s1.n_states > max_states || s2.n_states > max_states)
    throw InvalidInput("brute-force size bound exceeded");
  if (s1.n_states != s2.n_states) return std::nullopt;
  std::vector<int> perm(s1.n_states);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < s1.n_states && ok; ++i)
      ok = perm[s1.transition[i]] == s2.transition[perm[i]] &&
           mu1.weights[i] == mu2.weights[perm[i]];
    if (ok) {
      IsoWitness w;
      w.state_bijection = perm;
      w.base_bijection = base_bijection_from_states(s1, s2, perm);
      return w;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

CanonicalFormResult canonical_form(const FinSystem& s) {
  if (!has_discrete_spectrum(s)) throw DiscreteSpectrumRequired();
  const auto factor = maximal_trivial_factor(s);
  const auto section = canonical_section(factor);

  struct Cycle {
    long length;
    int min_state;
    std::vector<int> orbit;
  };
  std::vector<Cycle> cycles;
  for (int l = 0; l < factor.n_base; ++l) {
    auto orbit = fiber_orbit(s, section.choice[l]);
    cycles.push_back({static_cast<long>(orbit.size()), section.choice[l],
                      std::move(orbit)});
  }
  std::stable_sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
    return std::tie(a.length, a.min_state) < std::tie(b.length, b.min_state);
  });

  CanonicalFormResult out;
  out.witness.state_bijection.assign(s.n_states, -1);
  out.witness.base_bijection.assign(factor.n_base, -1);
  int offset = 0;
  for (std::size_t f = 0; f < cycles.size(); ++f) {
    out.bundle.fibers.push_back({cycles[f].length, 1});
    out.witness.base_bijection[factor.proj[cycles[f].min_state]] =
        static_cast<int>(f);
    for (std::size_t j = 0; j < cycles[f].orbit.size(); ++j)
      out.witness.state_bijection[cycles[f].orbit[j]] =
          offset + static_cast<int>(j);
    offset += static_cast<int>(cycles[f].length);
  }

  if (!verify_witness(s, rotation_bundle_as_system(out.bundle).system, out.witness))
    throw Error("canonical_form: witness failed verification (internal bug)");
  return out;
}

bool canonical_form_idempotent(const FinSystem& s) {
  const auto once = canonical_form(s);
  const auto again =
      canonical_form(rotation_bundle_as_system(once.bundle).system);
  return once.bundle == again.bundle;
}

namespace {

GroupRotationBundle realize_orders(std::vector<long> orders) {
  std::sort(orders.begin(), orders.end());
  GroupRotationBundle g;
  for (long m : orders) g.fibers.push_back({m, 1});
  g.validate();
  return g;
}

}  // namespace

RealizeResult realize(const PointSpectrumBundle& sigma) {
  if (sigma.fibers.empty()) throw InvalidInput("spectrum bundle needs a fiber");
  std::vector<long> orders;
  for (const auto& f : sigma.fibers) orders.push_back(f.order);
  return {realize_orders(std::move(orders)), std::nullopt};
}

RealizeResult realize(const MeasuredSpectrumBundle& sigma) {
  if (sigma.fibers.empty()) throw InvalidInput("spectrum bundle needs a fiber");
  std::vector<std::pair<long, Rat>> fibers;
  for (std::size_t l = 0; l < sigma.fibers.size(); ++l) {
    if (sigma.fibers[l].weight == 0) throw FullSupportRequired(static_cast<int>(l));
    fibers.emplace_back(sigma.fibers[l].spectrum.order, sigma.fibers[l].weight);
  }
  std::sort(fibers.begin(), fibers.end());

  RealizeResult out;
  std::vector<Rat> weights;
  for (const auto& [m, nu] : fibers) {
    out.bundle.fibers.push_back({m, 1});
    for (long x = 0; x < m; ++x) weights.push_back(nu / m);
  }
  out.bundle.validate();
  out.measure = RationalMeasure(std::move(weights));
  return out;
}

}  // namespace specbundle

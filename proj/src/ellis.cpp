#include "specbundle/ellis.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace specbundle {

FinMapElement compose(const FinMapElement& f, const FinMapElement& g) {
  FinMapElement out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f[g[i]];
  return out;
}

bool EllisSemigroup::contains(const FinMapElement& e) const {
  return std::binary_search(elements.begin(), elements.end(), e);
}

namespace {

bool is_bijection_table(const FinMapElement& t) {
  std::vector<bool> seen(t.size(), false);
  for (int image : t) {
    if (seen[image]) return false;
    seen[image] = true;
  }
  return true;
}

FinMapElement identity_table(std::size_t n) {
  FinMapElement id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
  return id;
}

}  // namespace

EllisSemigroup ellis_semigroup(const FinSystem& s) {
  s.validate();
  std::set<FinMapElement> seen;
  FinMapElement power = s.transition;  // phi^1
  while (seen.insert(power).second) power = compose(s.transition, power);

  EllisSemigroup out;
  out.elements.assign(seen.begin(), seen.end());

  bool group = true;
  for (const auto& e : out.elements)
    if (!is_bijection_table(e)) {
      group = false;
      break;
    }
  if (group) {
    const auto id = identity_table(s.transition.size());
    group = seen.count(id) > 0;
    for (const auto& e : out.elements) {
      if (!group) break;
      bool has_inverse = false;
      for (const auto& f : out.elements)
        if (compose(e, f) == id && compose(f, e) == id) {
          has_inverse = true;
          break;
        }
      group = group && has_inverse;
    }
  }
  out.is_group = group;
  return out;
}

EllisStateBijection hvn_iso(const FinSystem& s, int x0) {
  if (x0 < 0 || x0 >= s.n_states) throw InvalidInput("x0 out of range");
  if (!has_discrete_spectrum(s)) throw DiscreteSpectrumRequired();
  if (!is_minimal(s)) throw InvalidInput("hvn_iso requires a minimal system");

  EllisStateBijection out;
  out.semigroup = ellis_semigroup(s);
  out.state_of_element.reserve(out.semigroup.order());
  for (const auto& psi : out.semigroup.elements)
    out.state_of_element.push_back(psi[x0]);

  std::vector<bool> hit(s.n_states, false);
  for (int x : out.state_of_element) hit[x] = true;
  if (out.state_of_element.size() != static_cast<std::size_t>(s.n_states) ||
      std::count(hit.begin(), hit.end(), false) != 0)
    throw Error("hvn_iso: evaluation map is not bijective (internal bug)");

  // Equivariance: delta(psi o phi) = phi(delta(psi)).
  for (std::size_t j = 0; j < out.semigroup.elements.size(); ++j) {
    const auto rotated = compose(out.semigroup.elements[j], s.transition);
    if (rotated[x0] != s.transition[out.state_of_element[j]])
      throw Error("hvn_iso: evaluation map is not equivariant (internal bug)");
  }
  return out;
}

EllisBundleResult ellis_bundle(const FinBundle& b) {
  if (!has_discrete_spectrum(b.system)) throw DiscreteSpectrumRequired();
  const auto factor = maximal_trivial_factor(b.system);
  if (factor.proj != b.proj || factor.n_base != b.n_base)
    throw InvalidInput("ellis_bundle requires the maximal-trivial-factor bundle");

  const auto section = canonical_section(b);
  EllisBundleResult out;
  std::vector<int> map;
  std::vector<int> proj;

  for (int l = 0; l < b.n_base; ++l) {
    const auto fiber = fiber_subsystem(b, l);
    const auto ellis = ellis_semigroup(fiber.system);
    // Local index of the section state inside this fiber.
    int anchor = -1;
    for (std::size_t j = 0; j < fiber.original_state.size(); ++j)
      if (fiber.original_state[j] == section.choice[l])
        anchor = static_cast<int>(j);

    const int offset = static_cast<int>(map.size());
    for (const auto& psi : ellis.elements) {
      const auto rotated = compose(psi, fiber.system.transition);
      const auto it = std::lower_bound(ellis.elements.begin(),
                                       ellis.elements.end(), rotated);
      map.push_back(offset +
                    static_cast<int>(it - ellis.elements.begin()));
      proj.push_back(l);
      out.iso_to_original.push_back(fiber.original_state[psi[anchor]]);
    }
  }

  const int n_total = static_cast<int>(map.size());
  out.bundle = FinBundle(FinSystem(n_total, std::move(map)),
                         b.n_base, std::move(proj));

  // Verify the witness: bijective, equivariant, fiber-preserving.
  std::vector<bool> hit(b.system.n_states, false);
  for (int x : out.iso_to_original) hit[x] = true;
  if (out.iso_to_original.size() != static_cast<std::size_t>(b.system.n_states) ||
      std::count(hit.begin(), hit.end(), false) != 0)
    throw Error("ellis_bundle: witness not bijective (internal bug)");
  for (int i = 0; i < out.bundle.system.n_states; ++i) {
    if (out.iso_to_original[out.bundle.system.transition[i]] !=
        b.system.transition[out.iso_to_original[i]])
      throw Error("ellis_bundle: witness not equivariant (internal bug)");
    if (b.proj[out.iso_to_original[i]] != out.bundle.proj[i])
      throw Error("ellis_bundle: witness does not respect fibers (internal bug)");
  }
  return out;
}

TrivialCoverResult trivial_factor_cover(const FinSystem& s) {
  if (!has_discrete_spectrum(s)) throw DiscreteSpectrumRequired();
  const auto factor = maximal_trivial_factor(s);
  const auto section = canonical_section(factor);
  const auto ellis = ellis_semigroup(s);

  const int n_base = factor.n_base;
  const int n_elems = static_cast<int>(ellis.order());
  TrivialCoverResult out;
  std::vector<int> map(n_elems * n_base);
  out.base_proj.resize(n_elems * n_base);
  out.theta.resize(n_elems * n_base);

  for (int e = 0; e < n_elems; ++e) {
    const auto rotated = compose(ellis.elements[e], s.transition);
    const auto it = std::lower_bound(ellis.elements.begin(),
                                     ellis.elements.end(), rotated);
    const int e_next = static_cast<int>(it - ellis.elements.begin());
    for (int l = 0; l < n_base; ++l) {
      const int idx = e * n_base + l;
      map[idx] = e_next * n_base + l;
      out.base_proj[idx] = l;
      out.theta[idx] = ellis.elements[e][section.choice[l]];
    }
  }
  out.product = FinSystem(n_elems * n_base, std::move(map));

  std::vector<bool> hit(s.n_states, false);
  for (int x : out.theta) hit[x] = true;
  if (std::count(hit.begin(), hit.end(), false) != 0)
    throw Error("trivial_factor_cover: Theta not surjective (internal bug)");
  for (int i = 0; i < out.product.n_states; ++i)
    if (out.theta[out.product.transition[i]] != s.transition[out.theta[i]])
      throw Error("trivial_factor_cover: Theta not equivariant (internal bug)");
  return out;
}

}  // namespace specbundle

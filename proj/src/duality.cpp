#include "specbundle/duality.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace specbundle {

RationalAngle evaluate(const Character& chi, long g) {
  if (g < 0 || g >= chi.group_order)
    throw InvalidInput("group element out of range");
  return RationalAngle(chi.index * g, chi.group_order);
}

std::vector<Character> dual_group(long m) {
  if (m < 1) throw InvalidInput("group order must be >= 1");
  std::vector<Character> out;
  out.reserve(m);
  for (long k = 0; k < m; ++k) out.emplace_back(m, k);
  return out;
}

Character char_multiply(const Character& a, const Character& b) {
  if (a.group_order != b.group_order)
    throw InvalidInput("characters of different groups");
  return Character(a.group_order, a.index + b.index);
}

void DualBundle::validate() const {
  if (fibers.empty()) throw InvalidInput("dual bundle needs at least one fiber");
  for (std::size_t l = 0; l < fibers.size(); ++l) {
    if (fibers[l].group_order < 1) throw InvalidInput("fiber order must be >= 1");
    if (fibers[l].iota_value.subgroup_order() != fibers[l].group_order)
      throw InvalidInput("fiber " + std::to_string(l) +
                         ": iota value does not generate a subgroup of the "
                         "fiber's order (not an embedding)");
  }
}

DualBundle dual_rotation_bundle(const GroupRotationBundle& g) {
  g.validate();
  DualBundle out;
  for (const auto& fiber : g.fibers) {
    const long step = ((fiber.step % fiber.order) + fiber.order) % fiber.order;
    out.fibers.push_back(
        {fiber.order, evaluate(Character(fiber.order, 1), step)});
  }
  out.validate();
  return out;
}

GroupRotationBundle dual_of_subtrivialized(const DualBundle& d) {
  d.validate();
  GroupRotationBundle out;
  for (const auto& fiber : d.fibers) {
    // iota is reduced with denominator = group order, so the numerator is
    // the rotation element in Z_m* coordinates (and generates, since
    // gcd(num, den) = 1).
    const long m = fiber.group_order;
    long step = fiber.iota_value.num * (m / fiber.iota_value.den);
    out.fibers.push_back({m, m == 1 ? 1 : step});
  }
  out.validate();
  return out;
}

std::vector<std::vector<RationalAngle>> subtrivialization_image(
    const DualBundle& d) {
  d.validate();
  std::vector<std::vector<RationalAngle>> out;
  for (const auto& fiber : d.fibers) {
    std::vector<RationalAngle> image;
    for (long k = 0; k < fiber.group_order; ++k)
      image.push_back(fiber.iota_value.times(k));
    out.push_back(std::move(image));
  }
  return out;
}

IsoWitness bidual_check(const GroupRotationBundle& g) {
  const auto bidual = dual_of_subtrivialized(dual_rotation_bundle(g));
  if (bidual != g)
    throw Error("bidual_check: bi-dual differs from the original (internal bug)");

  // Evaluation map x -> delta_x; in canonical coordinates the identity
  // table per fiber. Verified as a rotation-bundle isomorphism.
  IsoWitness w;
  int total = 0;
  for (std::size_t l = 0; l < g.fibers.size(); ++l) {
    w.base_bijection.push_back(static_cast<int>(l));
    total += static_cast<int>(g.fibers[l].order);
  }
  w.state_bijection.resize(total);
  std::iota(w.state_bijection.begin(), w.state_bijection.end(), 0);

  const auto original = rotation_bundle_as_system(g);
  const auto doubled = rotation_bundle_as_system(bidual);
  if (!verify_witness(original.system, doubled.system, w))
    throw Error("bidual_check: evaluation witness failed verification (internal bug)");
  return w;
}

DualMorphismResult dual_morphism(const std::vector<long>& domain_orders,
                                 const std::vector<long>& codomain_orders,
                                 const BundleMorphism& theta) {
  if (theta.fiber_maps.size() != domain_orders.size() ||
      codomain_orders.size() != domain_orders.size())
    throw InvalidInput("fiber count mismatch");
  const std::size_t n_fibers = domain_orders.size();

  std::vector<bool> hit(n_fibers, false);
  if (theta.base_bijection.size() != n_fibers)
    throw InvalidInput("base map length mismatch");
  for (int image : theta.base_bijection) {
    if (image < 0 || static_cast<std::size_t>(image) >= n_fibers || hit[image])
      throw InvalidInput("base map is not a bijection");
    hit[image] = true;
  }

  DualMorphismResult out;
  out.base_bijection_inverse.resize(n_fibers);
  for (std::size_t l = 0; l < n_fibers; ++l)
    out.base_bijection_inverse[theta.base_bijection[l]] = static_cast<int>(l);

  out.injective = true;
  for (std::size_t l = 0; l < n_fibers; ++l) {
    const long n = domain_orders[l];
    const long m = codomain_orders[l];
    const auto& table = theta.fiber_maps[l];
    if (table.size() != static_cast<std::size_t>(n))
      throw InvalidInput("fiber map table length mismatch");
    for (long x = 0; x < n; ++x)
      for (long y = 0; y < n; ++y)
        if (table[(x + y) % n] != (table[x] + table[y]) % m)
          throw InvalidInput("fiber map " + std::to_string(l) +
                             " is not a homomorphism");

    // Any homomorphism Z_n -> Z_m is x -> x*t with n*t = 0 mod m, so
    // chi_k o Theta is the character of index k*t*n/m on Z_n.
    const long t = n == 1 ? 0 : table[1];
    const long carry = (static_cast<long>(t) * n) / m;  // integer by the hom law
    std::vector<long> dual(m);
    std::vector<bool> seen(n, false);
    bool fiber_injective = true;
    for (long k = 0; k < m; ++k) {
      dual[k] = (k * carry) % n;
      if (seen[dual[k]]) fiber_injective = false;
      seen[dual[k]] = true;
    }
    // Surjective Theta => injective dual (the embedding property).
    std::vector<bool> image_hit(m, false);
    for (long x = 0; x < n; ++x) image_hit[table[x]] = true;
    const bool surjective =
        std::count(image_hit.begin(), image_hit.end(), false) == 0;
    if (surjective && !fiber_injective)
      throw Error("dual_morphism: dual of a surjection not injective (internal bug)");
    out.injective = out.injective && fiber_injective;
    out.dual_index.push_back(std::move(dual));
  }
  return out;
}

bool dual_of_trivial_product_check(long m, int base_size) {
  if (m < 1 || base_size < 1) throw InvalidInput("need m >= 1 and base >= 1");
  GroupRotationBundle trivial;
  for (int l = 0; l < base_size; ++l) trivial.fibers.push_back({m, 1});
  const auto dual = dual_rotation_bundle(trivial);

  const DualBundle::Fiber expected{m, evaluate(Character(m, 1), 1 % m)};
  for (const auto& fiber : dual.fibers)
    if (fiber != expected) return false;
  return static_cast<int>(dual.fibers.size()) == base_size;
}

}  // namespace specbundle

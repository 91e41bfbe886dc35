#pragma once

#include <vector>

#include "specbundle/rational.hpp"
#include "specbundle/spectrum.hpp"

namespace specbundle {

/// The character x -> e^{2*pi*i*index*x/order} on Z_order.
struct Character {
  long group_order = 1;
  long index = 0;

  Character() = default;
  Character(long m, long k) : group_order(m), index(((k % m) + m) % m) {
    if (m < 1) throw InvalidInput("group order must be >= 1");
  }
  bool operator==(const Character&) const = default;
};

RationalAngle evaluate(const Character& chi, long g);

/// All m characters of Z_m. Multiplication is index addition mod m.
std::vector<Character> dual_group(long m);
Character char_multiply(const Character& a, const Character& b);

/// Per-fiber dual group with the subtrivialization value
/// iota_l = chi_1(step_l); the generated subgroup of Q/Z has order m_l.
struct DualBundle {
  struct Fiber {
    long group_order = 1;
    RationalAngle iota_value;
    bool operator==(const Fiber&) const = default;
  };
  std::vector<Fiber> fibers;

  void validate() const;
  bool operator==(const DualBundle&) const = default;
};

DualBundle dual_rotation_bundle(const GroupRotationBundle& g);

GroupRotationBundle dual_of_subtrivialized(const DualBundle& d);

/// The subtrivialization image of the dual bundle, per fiber: the set of
/// angles {iota_l^k}. Equals the point spectrum of the rotation bundle.
std::vector<std::vector<RationalAngle>> subtrivialization_image(const DualBundle& d);

/// Verified evaluation isomorphism g -> delta_g onto the bi-dual bundle.
IsoWitness bidual_check(const GroupRotationBundle& g);

/// A fiberwise homomorphism Z_{n_l} -> Z_{m_l} given by image tables,
/// together with a base bijection.
struct BundleMorphism {
  std::vector<std::vector<int>> fiber_maps;  // table[l][x] in Z_{m_l}
  std::vector<int> base_bijection;
};

struct DualMorphismResult {
  /// dual_index[l][k] = index of chi_k o Theta_l in the dual of the domain fiber.
  std::vector<std::vector<long>> dual_index;
  std::vector<int> base_bijection_inverse;
  bool injective = false;  // the embedding property; guaranteed when Theta is onto
};

DualMorphismResult dual_morphism(const std::vector<long>& domain_orders,
                                 const std::vector<long>& codomain_orders,
                                 const BundleMorphism& theta);

/// Dualizing a constant-fiber trivial bundle gives the constant dual bundle.
bool dual_of_trivial_product_check(long m, int base_size);

}  // namespace specbundle

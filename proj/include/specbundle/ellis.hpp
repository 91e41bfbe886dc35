#pragma once

#include <map>
#include <vector>

#include "specbundle/system.hpp"

namespace specbundle {

/// One element of the transformation monoid K^K, encoded by its table.
using FinMapElement = std::vector<int>;

/// Compose tables: (f after g)[i] = f[g[i]].
FinMapElement compose(const FinMapElement& f, const FinMapElement& g);

/// E(K, phi) = {phi^n : n >= 1}, closed under composition by construction.
struct EllisSemigroup {
  std::vector<FinMapElement> elements;  // sorted lexicographically, deduplicated
  bool is_group = false;
  std::size_t order() const { return elements.size(); }

  bool contains(const FinMapElement& e) const;
};

EllisSemigroup ellis_semigroup(const FinSystem& s);

/// The Halmos-von Neumann style evaluation bijection psi -> psi(x0) between
/// the Ellis group of a minimal discrete-spectrum system and its states.
/// Verified bijective and equivariant before returning.
struct EllisStateBijection {
  EllisSemigroup semigroup;
  std::vector<int> state_of_element;  // indexed like semigroup.elements
};

EllisStateBijection hvn_iso(const FinSystem& s, int x0);

/// The bundle whose fiber over l is E(K_l, phi_l) rotated by composition
/// with phi_l, together with the verified isomorphism onto the original
/// bundle (via evaluation at the canonical section).
struct EllisBundleResult {
  FinBundle bundle;
  std::vector<int> iso_to_original;  // Ellis-bundle state -> original state
};

EllisBundleResult ellis_bundle(const FinBundle& b);

/// The factor map Theta(psi, l) = psi(s0(l)) from E(K, phi) x L onto K,
/// verified surjective and equivariant. Product states are indexed
/// (elem_index * n_base + l).
struct TrivialCoverResult {
  FinSystem product;           // (psi, l) -> (psi o phi, l)
  std::vector<int> base_proj;  // product state -> l (a trivial bundle over L)
  std::vector<int> theta;      // product state -> state of the original system
};

TrivialCoverResult trivial_factor_cover(const FinSystem& s);

}  // namespace specbundle

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "specbundle/errors.hpp"

namespace specbundle {

/// A finite state set with a self-map. States are 0..n_states-1.
struct FinSystem {
  int n_states = 0;
  std::vector<int> transition;

  FinSystem() = default;
  FinSystem(int n, std::vector<int> map) : n_states(n), transition(std::move(map)) {
    validate();
  }

  void validate() const;
  bool operator==(const FinSystem&) const = default;
};

/// A system fibered over a finite base with phi-invariant fibers.
struct FinBundle {
  FinSystem system;
  int n_base = 0;
  std::vector<int> proj;

  FinBundle() = default;
  FinBundle(FinSystem s, int base, std::vector<int> p)
      : system(std::move(s)), n_base(base), proj(std::move(p)) {
    validate();
  }

  void validate() const;
  bool operator==(const FinBundle&) const = default;
};

/// One chosen state per fiber, choice[b] in fiber b.
struct Section {
  std::vector<int> choice;
};

struct BundleValidationReport {
  bool valid = true;
  /// States i with proj[transition[i]] != proj[i], paired with proj[i].
  std::vector<std::pair<int, int>> fiber_violations;
  /// Base points with empty preimage.
  std::vector<int> missing_bases;
};

/// Checks both bundle invariants without throwing.
BundleValidationReport validate_bundle(const FinSystem& system, int n_base,
                                       const std::vector<int>& proj);

/// True iff the transition map is a bijection. On a finite discrete space
/// this is exactly the discrete-spectrum condition.
bool has_discrete_spectrum(const FinSystem& s);

/// True iff the system is a single cycle through all states.
bool is_minimal(const FinSystem& s);

/// The bundle over the weak components of the functional graph, with
/// components labeled by minimal contained state, ascending.
FinBundle maximal_trivial_factor(const FinSystem& s);

struct FiberSubsystem {
  FinSystem system;
  std::vector<int> original_state;  // local index -> original state
};

/// Restriction of the dynamics to fiber l, states re-indexed 0..m-1 in
/// ascending original-state order.
FiberSubsystem fiber_subsystem(const FinBundle& b, int l);

/// Every fiber of the maximal-trivial-factor bundle of a discrete-spectrum
/// system is minimal with discrete spectrum. Exposed so tests can assert it.
bool fibers_minimal_check(const FinBundle& b);

/// choice[l] = minimal original state in fiber l.
Section canonical_section(const FinBundle& b);

/// Bundle over the blocks of a partition (given as a block labeling of the
/// states). The partition must not refine across a transition edge.
FinBundle factor_from_partition(const FinSystem& s,
                                const std::vector<int>& block_of_state);

struct PullbackResult {
  FinBundle bundle;        // states are pairs (m, k) with r[m] = proj[k], lex order
  std::vector<int> pi_base;   // state -> m
  std::vector<int> pi_total;  // state -> k
};

/// The pullback bundle along a surjection r: M -> B.
PullbackResult pullback(const FinBundle& b, const std::vector<int>& r);

}  // namespace specbundle

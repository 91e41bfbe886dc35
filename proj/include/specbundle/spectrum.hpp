#pragma once

#include <optional>
#include <vector>

#include "specbundle/koopman.hpp"
#include "specbundle/rational.hpp"
#include "specbundle/system.hpp"

namespace specbundle {

/// Per-base-point cyclic point spectra.
struct PointSpectrumBundle {
  std::vector<CyclicSpectrum> fibers;
  bool operator==(const PointSpectrumBundle&) const = default;
};

/// Spectra weighted by a rational base measure.
struct MeasuredSpectrumBundle {
  struct Fiber {
    CyclicSpectrum spectrum;
    Rat weight;
    bool operator==(const Fiber&) const = default;
  };
  std::vector<Fiber> fibers;
  bool operator==(const MeasuredSpectrumBundle&) const = default;
};

/// Fiber l is the rotation x -> x + step on Z_order.
struct GroupRotationBundle {
  struct Fiber {
    long order = 1;
    long step = 1;
    bool operator==(const Fiber&) const = default;
  };
  std::vector<Fiber> fibers;

  void validate() const;  // gcd(step, order) = 1 per fiber
  bool operator==(const GroupRotationBundle&) const = default;
};

/// An explicit conjugacy, always verified before being returned.
struct IsoWitness {
  std::vector<int> state_bijection;  // state of system 1 -> state of system 2
  std::vector<int> base_bijection;
};

/// Concatenated-fiber finite system of a rotation bundle, with its natural
/// bundle structure (used for canonical forms and realization).
FinBundle rotation_bundle_as_system(const GroupRotationBundle& g);

PointSpectrumBundle spectrum_bundle(const FinSystem& s);

MeasuredSpectrumBundle measured_spectrum_bundle(const FinSystem& s,
                                                const RationalMeasure& mu);

/// Base bijection matching fibers of equal order, if the order multisets
/// agree; deterministic sorted-order matching.
std::optional<std::vector<int>> iso_spectrum(const PointSpectrumBundle& a,
                                             const PointSpectrumBundle& b);

/// Conjugacy decision through the spectrum-bundle invariant.
std::optional<IsoWitness> iso_systems(const FinSystem& s1, const FinSystem& s2);

/// Exhaustive conjugacy search; the independent oracle. Returns the
/// lexicographically least witness.
std::optional<IsoWitness> iso_brute_force(const FinSystem& s1, const FinSystem& s2,
                                          int max_states = 8);

/// Measured (Markov) isomorphism decision; witness is weight-preserving.
std::optional<IsoWitness> markov_iso(const FinSystem& s1, const RationalMeasure& mu1,
                                     const FinSystem& s2, const RationalMeasure& mu2);

/// Exhaustive weight-preserving conjugacy search (oracle for markov_iso).
std::optional<IsoWitness> markov_iso_brute_force(
    const FinSystem& s1, const RationalMeasure& mu1, const FinSystem& s2,
    const RationalMeasure& mu2, int max_states = 8);

/// Verification helpers; used on every witness before it is returned.
bool verify_witness(const FinSystem& s1, const FinSystem& s2, const IsoWitness& w);
bool verify_witness_measured(const FinSystem& s1, const RationalMeasure& mu1,
                             const FinSystem& s2, const RationalMeasure& mu2,
                             const IsoWitness& w);

struct CanonicalFormResult {
  GroupRotationBundle bundle;  // fibers sorted by (order, minimal original state)
  IsoWitness witness;          // original states -> canonical states
};

CanonicalFormResult canonical_form(const FinSystem& s);

bool canonical_form_idempotent(const FinSystem& s);

struct RealizeResult {
  GroupRotationBundle bundle;
  std::optional<RationalMeasure> measure;
};

RealizeResult realize(const PointSpectrumBundle& sigma);
RealizeResult realize(const MeasuredSpectrumBundle& sigma);

}  // namespace specbundle

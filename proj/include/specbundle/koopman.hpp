#pragma once

#include <vector>

#include "specbundle/rational.hpp"
#include "specbundle/system.hpp"

namespace specbundle {

/// T_phi f = f o phi.
QFunction koopman_apply(const FinSystem& s, const QFunction& f);

/// (1/n) sum_{k=0}^{n-1} T^k f, exactly.
QFunction cesaro_mean(const FinSystem& s, const QFunction& f, long n);

/// Mean ergodic projection for a permutation system: per-cycle average.
QFunction mean_ergodic_projection(const FinSystem& s, const QFunction& f);

/// Point spectrum of a single m-cycle with eigenfunctions anchored at state 0:
/// the eigenfunction for k/m takes value e^{2*pi*i*k*j/m} at phi^j(0).
struct FiberSpectrum {
  CyclicSpectrum spectrum;
  std::vector<RationalAngle> eigenvalues;
  std::vector<CyclotomicFunction> eigenfunctions;  // one per eigenvalue
};

FiberSpectrum point_spectrum_fiber(const FinSystem& s);

/// Exact test of f o phi = lambda * f in root-of-unity arithmetic.
bool check_eigen(const FinSystem& s, const RationalAngle& lambda,
                 const CyclotomicFunction& f);

/// Dimension of the span of exact Koopman eigenfunctions: the number of
/// states lying on cycles of the functional graph.
int kronecker_dimension(const FinSystem& s);

/// The extreme invariant measures: uniform on each fiber's cycle.
std::vector<RationalMeasure> invariant_measure_basis(const FinBundle& b);

/// (q_* mu)[b] = sum over proj^{-1}(b) of mu.
RationalMeasure pushforward(const RationalMeasure& mu,
                            const std::vector<int>& proj, int n_base);

/// (supp(mu) inside fiber l, pushforward(mu) = delta_l). The lemma says the
/// two are always equal.
std::pair<bool, bool> support_in_fiber_iff_dirac(const FinBundle& b,
                                                 const RationalMeasure& mu,
                                                 int l);

/// True iff mu satisfies the exact mass-transport equation
/// mu[i] = sum over preimages of i. Returns the first violating state, or -1.
int invariance_witness(const FinSystem& s, const RationalMeasure& mu);

/// nu = pushforward(mu); verified exactly against mu = sum_l nu[l] m_l.
RationalMeasure disintegrate(const FinBundle& b, const RationalMeasure& mu);

struct MergcharReport {
  bool mean_ergodic_at_lcm = true;       // (a): A_N f = Pf at N = lcm
  bool fibers_uniquely_ergodic = true;   // (b): one invariant measure per fiber
  bool averages_fiberwise_constant = true;  // (c)
  bool measure_bijection = true;         // (d): pushforward <-> recombination
  long lcm_period = 1;
  bool all() const {
    return mean_ergodic_at_lcm && fibers_uniquely_ergodic &&
           averages_fiberwise_constant && measure_bijection;
  }
};

/// Verifies the four mean-ergodicity equivalences on the given test
/// functions and base measures (exact arithmetic throughout).
MergcharReport mergchar_finite_check(const FinBundle& b,
                                     const std::vector<QFunction>& test_functions,
                                     const std::vector<RationalMeasure>& base_measures);

/// lcm of the cycle lengths of a permutation system.
long cycle_lcm(const FinSystem& s);

}  // namespace specbundle

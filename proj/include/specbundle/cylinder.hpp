#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "specbundle/errors.hpp"

namespace specbundle {
namespace cylinder {

/// Rotation angle profile t -> a(t) on the cylinder T x [0,1], where the
/// fiber over t rotates by e^{2*pi*i*a(t)}.
struct AlphaSpec {
  enum class Kind { ConstantRational, ConstantNamed, Identity, Step };

  struct Piece {
    Kind kind = Kind::ConstantRational;
    long num = 0;
    long den = 1;          // ConstantRational: angle num/den
    std::string name;      // ConstantNamed: "golden" or "sqrt2m1"
  };

  Kind kind = Kind::ConstantRational;
  Piece constant;                  // Constant* variants
  std::vector<double> breakpoints; // Step: strictly ascending, interior to (0,1)
  std::vector<Piece> pieces;       // Step: breakpoints.size() + 1 pieces

  /// Angle a(t) in [0,1) as a double.
  double angle_at(double t) const;
  /// Exact rational angle if the active piece is rational (Identity at
  /// rational t also counts), otherwise nullopt.
  std::optional<std::pair<long, long>> rational_angle_at(double t) const;

  static AlphaSpec parse(const std::string& text);
};

double named_irrational(const std::string& name);

/// A finite Fourier polynomial f(z, t) = sum_{|k| <= d} c_k z^k with
/// constant rational coefficients (degree bound 8).
struct ObservableSpec {
  struct Term {
    int power = 0;  // z^power, may be negative
    double coeff_re = 0.0;
    double coeff_im = 0.0;
  };
  std::vector<Term> terms;

  std::complex<double> eval(double theta, double /*t*/) const;

  /// Grammar: sum of [RAT*]re(z^K) | [RAT*]im(z^K) | RAT, e.g. "re(z^2)".
  static ObservableSpec parse(const std::string& text);
};

/// (1/n) sum_{j<n} f(e^{2*pi*i(theta + j*a(t))}, t), Kahan-compensated.
std::complex<double> cesaro_cylinder(const AlphaSpec& alpha,
                                     const ObservableSpec& f, double theta,
                                     double t, long n);

struct FiberVerdict {
  bool ue_evidence = false;
  double gap = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  /// Set when the angle is exactly rational: the measure-theoretic fact
  /// that a rational rotation on the full circle is not uniquely ergodic.
  std::optional<bool> analytic_unique_ergodic;
};

/// Compares A_n f over equispaced phases on the fiber at height t.
FiberVerdict fiber_unique_ergodicity(const AlphaSpec& alpha,
                                     const ObservableSpec& f, double t, long n,
                                     int n_samples, double tol);

struct ScanReport {
  struct Row {
    double t = 0.0;
    FiberVerdict verdict;
  };
  std::vector<Row> rows;
  long n = 0;
  bool mean_ergodic_evidence = false;
  double max_gap = 0.0;
  bool illustrative = false;  // Step profiles are outside the continuous setting
};

ScanReport mean_ergodicity_scan(const AlphaSpec& alpha, const ObservableSpec& f,
                                int grid_size, long n, double tol,
                                int n_samples = 64);

/// Columns t, verdict, gap, n; 12 significant digits; LF line endings.
std::string csv_report(const ScanReport& report);

}  // namespace cylinder
}  // namespace specbundle

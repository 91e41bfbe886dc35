#include "specbundle/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace specbundle {
namespace cylinder {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double piece_angle(const AlphaSpec::Piece& piece) {
  if (piece.kind == AlphaSpec::Kind::ConstantNamed)
    return named_irrational(piece.name);
  double a = static_cast<double>(piece.num) / static_cast<double>(piece.den);
  return a - std::floor(a);
}

const AlphaSpec::Piece* active_piece(const AlphaSpec& alpha, double t) {
  if (alpha.kind == AlphaSpec::Kind::Step) {
    std::size_t i = 0;
    while (i < alpha.breakpoints.size() && t >= alpha.breakpoints[i]) ++i;
    return &alpha.pieces[i];
  }
  if (alpha.kind == AlphaSpec::Kind::Identity) return nullptr;
  return &alpha.constant;
}

// Exact rational p/q with small q, if the double is one.
std::optional<std::pair<long, long>> small_rational(double t) {
  for (long q = 1; q <= 1024; ++q) {
    double p = t * static_cast<double>(q);
    if (p == std::floor(p)) {
      long num = static_cast<long>(p);
      long g = std::gcd(std::abs(num), q);
      return std::make_pair(num / g, q / g);
    }
  }
  return std::nullopt;
}

}  // namespace

double named_irrational(const std::string& name) {
  if (name == "golden") return (std::sqrt(5.0) - 1.0) / 2.0;
  if (name == "sqrt2m1") return std::sqrt(2.0) - 1.0;
  throw InvalidInput("unknown irrational '" + name +
                     "' (catalog: golden, sqrt2m1)");
}

double AlphaSpec::angle_at(double t) const {
  if (kind == Kind::Identity) return t - std::floor(t);
  return piece_angle(*active_piece(*this, t));
}

std::optional<std::pair<long, long>> AlphaSpec::rational_angle_at(
    double t) const {
  if (kind == Kind::Identity) return small_rational(t - std::floor(t));
  const Piece* piece = active_piece(*this, t);
  if (piece->kind != Kind::ConstantRational) return std::nullopt;
  long num = ((piece->num % piece->den) + piece->den) % piece->den;
  long g = std::gcd(num == 0 ? piece->den : num, piece->den);
  return std::make_pair(num / g, piece->den / g);
}

namespace {

AlphaSpec::Piece parse_piece(const std::string& text) {
  AlphaSpec::Piece piece;
  if (text == "golden" || text == "sqrt2m1") {
    piece.kind = AlphaSpec::Kind::ConstantNamed;
    piece.name = text;
    return piece;
  }
  piece.kind = AlphaSpec::Kind::ConstantRational;
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      piece.num = std::stol(text);
      piece.den = 1;
    } else {
      piece.num = std::stol(text.substr(0, slash));
      piece.den = std::stol(text.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw InvalidInput("bad angle '" + text + "'");
  }
  if (piece.den <= 0) throw InvalidInput("angle denominator must be positive");
  return piece;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

AlphaSpec AlphaSpec::parse(const std::string& text) {
  AlphaSpec alpha;
  if (text == "identity") {
    alpha.kind = Kind::Identity;
    return alpha;
  }
  if (text.rfind("step:", 0) == 0) {
    const auto at = text.find('@');
    if (at == std::string::npos)
      throw InvalidInput("step profile needs '@breakpoints'");
    alpha.kind = Kind::Step;
    for (const auto& part : split(text.substr(5, at - 5), ','))
      alpha.pieces.push_back(parse_piece(part));
    for (const auto& part : split(text.substr(at + 1), ',')) {
      try {
        alpha.breakpoints.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw InvalidInput("bad breakpoint '" + part + "'");
      }
    }
    if (alpha.pieces.size() != alpha.breakpoints.size() + 1)
      throw InvalidInput("step profile needs one more piece than breakpoints");
    for (std::size_t i = 0; i < alpha.breakpoints.size(); ++i) {
      const double b = alpha.breakpoints[i];
      if (b <= 0.0 || b >= 1.0 || (i > 0 && b <= alpha.breakpoints[i - 1]))
        throw InvalidInput("breakpoints must be strictly ascending in (0,1)");
    }
    return alpha;
  }
  alpha.kind = Kind::ConstantRational;
  alpha.constant = parse_piece(text);
  alpha.kind = alpha.constant.kind;
  return alpha;
}

std::complex<double> ObservableSpec::eval(double theta, double /*t*/) const {
  std::complex<double> out{0.0, 0.0};
  for (const auto& term : terms) {
    const double phase = kTwoPi * term.power * theta;
    out += std::complex<double>(term.coeff_re, term.coeff_im) *
           std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return out;
}

namespace {

std::pair<long, long> parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return {std::stol(text), 1};
    return {std::stol(text.substr(0, slash)), std::stol(text.substr(slash + 1))};
  } catch (const std::exception&) {
    throw InvalidInput("bad coefficient '" + text + "'");
  }
}

void add_term(ObservableSpec& f, int power, double re, double im) {
  for (auto& term : f.terms)
    if (term.power == power) {
      term.coeff_re += re;
      term.coeff_im += im;
      return;
    }
  f.terms.push_back({power, re, im});
}

}  // namespace

ObservableSpec ObservableSpec::parse(const std::string& text) {
  ObservableSpec f;
  for (auto part : split(text, '+')) {
    part.erase(std::remove(part.begin(), part.end(), ' '), part.end());
    if (part.empty()) throw InvalidInput("empty observable term");

    double coeff = 1.0;
    auto star = part.find('*');
    if (star != std::string::npos) {
      const auto [p, q] = parse_rat(part.substr(0, star));
      if (q <= 0) throw InvalidInput("coefficient denominator must be positive");
      coeff = static_cast<double>(p) / static_cast<double>(q);
      part = part.substr(star + 1);
    }

    if (part.rfind("re(z", 0) == 0 || part.rfind("im(z", 0) == 0) {
      if (part.back() != ')') throw InvalidInput("unterminated term '" + part + "'");
      std::string inner = part.substr(4, part.size() - 5);
      int power = 1;
      if (!inner.empty()) {
        if (inner[0] != '^') throw InvalidInput("bad term '" + part + "'");
        try {
          power = std::stoi(inner.substr(1));
        } catch (const std::exception&) {
          throw InvalidInput("bad exponent in '" + part + "'");
        }
      }
      if (power < 1 || power > 8)
        throw InvalidInput("exponent must be in [1, 8]");
      if (part[0] == 'r') {  // re(z^k) = (z^k + z^-k)/2
        add_term(f, power, coeff / 2.0, 0.0);
        add_term(f, -power, coeff / 2.0, 0.0);
      } else {  // im(z^k) = (z^k - z^-k)/(2i)
        add_term(f, power, 0.0, -coeff / 2.0);
        add_term(f, -power, 0.0, coeff / 2.0);
      }
    } else {
      const auto [p, q] = parse_rat(part);
      if (q <= 0) throw InvalidInput("coefficient denominator must be positive");
      add_term(f, 0, coeff * static_cast<double>(p) / static_cast<double>(q), 0.0);
    }
  }
  if (f.terms.empty()) throw InvalidInput("observable has no terms");
  return f;
}

std::complex<double> cesaro_cylinder(const AlphaSpec& alpha,
                                     const ObservableSpec& f, double theta,
                                     double t, long n) {
  if (n < 1) throw InvalidInput("Cesaro mean needs n >= 1");
  if (theta < 0.0 || theta >= 1.0) throw InvalidInput("phase must be in [0,1)");
  if (t < 0.0 || t > 1.0) throw InvalidInput("height must be in [0,1]");
  const double a = alpha.angle_at(t);

  // Kahan-compensated accumulation; orbit phases are computed from j*a
  // directly, never by repeated addition.
  double sum_re = 0.0, c_re = 0.0, sum_im = 0.0, c_im = 0.0;
  for (long j = 0; j < n; ++j) {
    const double phase = std::fmod(theta + static_cast<double>(j) * a, 1.0);
    const auto v = f.eval(phase, t);
    double y = v.real() - c_re;
    double s = sum_re + y;
    c_re = (s - sum_re) - y;
    sum_re = s;
    y = v.imag() - c_im;
    s = sum_im + y;
    c_im = (s - sum_im) - y;
    sum_im = s;
  }
  const double inv = 1.0 / static_cast<double>(n);
  return {sum_re * inv, sum_im * inv};
}

FiberVerdict fiber_unique_ergodicity(const AlphaSpec& alpha,
                                     const ObservableSpec& f, double t, long n,
                                     int n_samples, double tol) {
  if (n_samples < 2) throw InvalidInput("need at least two phase samples");
  std::vector<double> thetas(n_samples);
  std::vector<std::complex<double>> values(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    thetas[i] = static_cast<double>(i) / static_cast<double>(n_samples);
    values[i] = cesaro_cylinder(alpha, f, thetas[i], t, n);
  }

  FiberVerdict verdict;
  for (int i = 0; i < n_samples; ++i)
    for (int j = i + 1; j < n_samples; ++j) {
      const double gap = std::abs(values[i] - values[j]);
      if (gap > verdict.gap) {
        verdict.gap = gap;
        verdict.theta1 = thetas[i];
        verdict.theta2 = thetas[j];
      }
    }
  verdict.ue_evidence = verdict.gap <= tol;

  if (const auto rat = alpha.rational_angle_at(t)) {
    // A rational rotation on the full circle fiber has many invariant
    // measures; the numeric gap merely witnesses it through f.
    verdict.analytic_unique_ergodic = false;
    (void)rat;
  } else if (alpha.kind == AlphaSpec::Kind::ConstantNamed ||
             (alpha.kind == AlphaSpec::Kind::Step &&
              active_piece(alpha, t)->kind == AlphaSpec::Kind::ConstantNamed)) {
    verdict.analytic_unique_ergodic = true;  // exactly specified irrational
  }
  return verdict;
}

ScanReport mean_ergodicity_scan(const AlphaSpec& alpha, const ObservableSpec& f,
                                int grid_size, long n, double tol,
                                int n_samples) {
  if (grid_size < 2) throw InvalidInput("grid needs at least two points");
  ScanReport report;
  report.n = n;
  report.illustrative = alpha.kind == AlphaSpec::Kind::Step;
  report.mean_ergodic_evidence = true;
  for (int i = 0; i < grid_size; ++i) {
    const double t =
        static_cast<double>(i) / static_cast<double>(grid_size - 1);
    ScanReport::Row row;
    row.t = t;
    row.verdict = fiber_unique_ergodicity(alpha, f, t, n, n_samples, tol);
    report.mean_ergodic_evidence &= row.verdict.ue_evidence;
    report.max_gap = std::max(report.max_gap, row.verdict.gap);
    report.rows.push_back(row);
  }
  return report;
}

std::string csv_report(const ScanReport& report) {
  std::string out = "t,verdict,gap,n\n";
  char buffer[128];
  for (const auto& row : report.rows) {
    std::snprintf(buffer, sizeof(buffer), "%.12g,%s,%.12g,%ld\n", row.t,
                  row.verdict.ue_evidence ? "UE-evidence" : "non-UE-witness",
                  row.verdict.gap, report.n);
    out += buffer;
  }
  return out;
}

}  // namespace cylinder
}  // namespace specbundle

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "specbundle/cylinder.hpp"
#include "specbundle/duality.hpp"
#include "specbundle/ellis.hpp"
#include "specbundle/io.hpp"
#include "specbundle/koopman.hpp"
#include "specbundle/spectrum.hpp"
#include "specbundle/system.hpp"

namespace sb = specbundle;

namespace {

// Exit codes (the machine contract): 0 success / isomorphic / evidence,
// 1 not isomorphic / witnessed failure, 2 I/O, parse, and precondition
// failures, 3 reserved for invariant-vs-oracle disagreement.
constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;
constexpr int kExitOracleDisagreement = 3;

sb::FinSystem system_of(const sb::Document& doc) {
  if (const auto* s = std::get_if<sb::FinSystem>(&doc.payload)) return *s;
  if (const auto* b = std::get_if<sb::FinBundle>(&doc.payload)) return b->system;
  if (const auto* m = std::get_if<sb::MeasuredSystem>(&doc.payload))
    return m->system;
  if (const auto* g = std::get_if<sb::GroupRotationBundle>(&doc.payload))
    return sb::rotation_bundle_as_system(*g).system;
  throw sb::ParseError("document does not describe a dynamical system");
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    sb::write_file(out_path, content);
}

int cmd_analyze(const std::string& file) {
  const auto doc = sb::read_document_file(file);
  const auto system = system_of(doc);
  const bool invertible = sb::has_discrete_spectrum(system);
  const auto ellis = sb::ellis_semigroup(system);
  const auto factor = sb::maximal_trivial_factor(system);

  std::cout << "states: " << system.n_states << "\n";
  std::cout << "invertible: " << (invertible ? "yes" : "no") << "\n";
  std::cout << "discrete spectrum: " << (invertible ? "yes" : "no") << "\n";
  std::cout << "components: " << factor.n_base << "\n";
  std::cout << "ellis order: " << ellis.order()
            << (ellis.is_group ? " (group)" : " (not a group)") << "\n";
  std::cout << "kronecker dimension: " << sb::kronecker_dimension(system)
            << "\n";
  if (invertible) {
    const auto spectrum = sb::spectrum_bundle(system);
    std::cout << "spectrum bundle orders:";
    for (const auto& fiber : spectrum.fibers) std::cout << " " << fiber.order;
    std::cout << "\n";
  }
  return kExitOk;
}

void print_witness(const sb::IsoWitness& w) {
  std::cout << "state bijection:";
  for (int x : w.state_bijection) std::cout << " " << x;
  std::cout << "\n";
}

int cmd_iso(const std::string& file1, const std::string& file2, bool measured,
            bool oracle) {
  const auto doc1 = sb::read_document_file(file1);
  const auto doc2 = sb::read_document_file(file2);

  std::optional<sb::IsoWitness> decided;
  std::optional<sb::IsoWitness> oracle_result;
  if (measured) {
    const auto* m1 = std::get_if<sb::MeasuredSystem>(&doc1.payload);
    const auto* m2 = std::get_if<sb::MeasuredSystem>(&doc2.payload);
    if (!m1 || !m2)
      throw sb::ParseError("--measured needs two measured-system documents");
    decided = sb::markov_iso(m1->system, m1->measure, m2->system, m2->measure);
    if (oracle)
      oracle_result = sb::markov_iso_brute_force(m1->system, m1->measure,
                                                 m2->system, m2->measure);
    if (decided && !sb::verify_witness_measured(m1->system, m1->measure,
                                                m2->system, m2->measure,
                                                *decided))
      throw sb::Error("witness failed re-verification");
  } else {
    const auto s1 = system_of(doc1);
    const auto s2 = system_of(doc2);
    decided = sb::iso_systems(s1, s2);
    if (oracle) oracle_result = sb::iso_brute_force(s1, s2);
    if (decided && !sb::verify_witness(s1, s2, *decided))
      throw sb::Error("witness failed re-verification");
  }

  if (oracle && decided.has_value() != oracle_result.has_value()) {
    std::cerr << "oracle disagreement: invariant says "
              << (decided ? "isomorphic" : "not isomorphic")
              << ", brute force says the opposite\n";
    return kExitOracleDisagreement;
  }
  if (!decided) {
    std::cout << "not isomorphic\n";
    return kExitNegative;
  }
  std::cout << "isomorphic\n";
  print_witness(*decided);
  return kExitOk;
}

int cmd_canon(const std::string& file, const std::string& out) {
  const auto system = system_of(sb::read_document_file(file));
  const auto result = sb::canonical_form(system);
  emit(sb::serialize(result.bundle), out);
  if (!out.empty())
    sb::write_file(out + ".witness.json", sb::serialize(result.witness));
  else
    std::cout << sb::serialize(result.witness);
  return kExitOk;
}

int cmd_spectrum(const std::string& file, const std::string& out) {
  const auto doc = sb::read_document_file(file);
  if (const auto* m = std::get_if<sb::MeasuredSystem>(&doc.payload)) {
    emit(sb::serialize(sb::measured_spectrum_bundle(m->system, m->measure)), out);
  } else {
    emit(sb::serialize(sb::spectrum_bundle(system_of(doc))), out);
  }
  return kExitOk;
}

int cmd_realize(const std::string& file, const std::string& out) {
  const auto doc = sb::read_document_file(file);
  sb::RealizeResult result;
  if (const auto* p = std::get_if<sb::PointSpectrumBundle>(&doc.payload))
    result = sb::realize(*p);
  else if (const auto* m = std::get_if<sb::MeasuredSpectrumBundle>(&doc.payload))
    result = sb::realize(*m);
  else
    throw sb::ParseError("realize needs a spectrum or measured-spectrum document");
  emit(sb::serialize(result.bundle, result.measure), out);
  return kExitOk;
}

int cmd_pullback(const std::string& bundle_file, const std::string& map_file,
                 const std::string& out) {
  const auto bundle_doc = sb::read_document_file(bundle_file);
  const auto* bundle = std::get_if<sb::FinBundle>(&bundle_doc.payload);
  if (!bundle) throw sb::ParseError("pullback needs a bundle document");
  const auto map_doc = sb::read_document_file(map_file);
  const auto* base_map = std::get_if<sb::BaseMap>(&map_doc.payload);
  if (!base_map) throw sb::ParseError("pullback needs a basemap document");
  const auto result = sb::pullback(*bundle, base_map->map);
  emit(sb::serialize(result.bundle), out);
  return kExitOk;
}

int cmd_dual(const std::string& file, const std::string& out) {
  const auto doc = sb::read_document_file(file);
  const auto* g = std::get_if<sb::GroupRotationBundle>(&doc.payload);
  if (!g) throw sb::ParseError("dual needs a rotation-bundle document");
  emit(sb::serialize(sb::dual_rotation_bundle(*g)), out);
  return kExitOk;
}

int cmd_bidual_check(const std::string& file) {
  const auto doc = sb::read_document_file(file);
  const auto* g = std::get_if<sb::GroupRotationBundle>(&doc.payload);
  if (!g) throw sb::ParseError("bidual-check needs a rotation-bundle document");
  const auto witness = sb::bidual_check(*g);
  std::cout << "bidual isomorphism verified\n";
  print_witness(witness);
  return kExitOk;
}

int cmd_cylinder(const std::string& alpha_text, const std::string& f_text,
                 long n, int grid, double tol, const std::string& csv_out) {
  const auto alpha = sb::cylinder::AlphaSpec::parse(alpha_text);
  const auto f = sb::cylinder::ObservableSpec::parse(f_text);
  const auto report = sb::cylinder::mean_ergodicity_scan(alpha, f, grid, n, tol);
  const auto csv = sb::cylinder::csv_report(report);
  if (csv_out.empty())
    std::cout << csv;
  else
    sb::write_file(csv_out, csv);
  if (report.illustrative)
    std::cerr << "note: step profiles are illustrative (discontinuous angle)\n";
  // A witnessed failure is data, not an error.
  return report.mean_ergodic_evidence ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite dynamical systems: spectra, bundles, duality"};
  app.require_subcommand(1);

  std::string file1, file2, out;
  bool measured = false, oracle = false;

  auto* analyze = app.add_subcommand("analyze", "invariants of a system");
  analyze->add_option("file", file1)->required();

  auto* iso = app.add_subcommand("iso", "decide isomorphism");
  iso->add_option("file1", file1)->required();
  iso->add_option("file2", file2)->required();
  iso->add_flag("--measured", measured, "Markov isomorphism of measured systems");
  iso->add_flag("--oracle", oracle, "also run the brute-force oracle");

  auto* canon = app.add_subcommand("canon", "canonical rotation-bundle form");
  canon->add_option("file", file1)->required();
  canon->add_option("-o,--output", out);

  auto* spectrum = app.add_subcommand("spectrum", "point spectrum bundle");
  spectrum->add_option("file", file1)->required();
  spectrum->add_option("-o,--output", out);

  auto* realize = app.add_subcommand("realize", "realize a spectrum bundle");
  realize->add_option("file", file1)->required();
  realize->add_option("-o,--output", out)->required();

  auto* pullback = app.add_subcommand("pullback", "pullback along a base map");
  pullback->add_option("bundle", file1)->required();
  pullback->add_option("mapfile", file2)->required();
  pullback->add_option("-o,--output", out)->required();

  auto* dual = app.add_subcommand("dual", "dual of a rotation bundle");
  dual->add_option("file", file1)->required();
  dual->add_option("-o,--output", out)->required();

  auto* bidual = app.add_subcommand("bidual-check", "verify the bi-dual isomorphism");
  bidual->add_option("file", file1)->required();

  std::string alpha_text, f_text, csv_out;
  long n = 1000;
  int grid = 11;
  double tol = 1e-2;
  auto* cyl = app.add_subcommand("cylinder", "mean ergodicity scan on the cylinder");
  cyl->add_option("--alpha", alpha_text)->required();
  cyl->add_option("--f", f_text)->required();
  cyl->add_option("--n", n)->required();
  cyl->add_option("--grid", grid)->required();
  cyl->add_option("--tol", tol)->required();
  cyl->add_option("--csv", csv_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(file1);
    if (iso->parsed()) return cmd_iso(file1, file2, measured, oracle);
    if (canon->parsed()) return cmd_canon(file1, out);
    if (spectrum->parsed()) return cmd_spectrum(file1, out);
    if (realize->parsed()) return cmd_realize(file1, out);
    if (pullback->parsed()) return cmd_pullback(file1, file2, out);
    if (dual->parsed()) return cmd_dual(file1, out);
    if (bidual->parsed()) return cmd_bidual_check(file1);
    if (cyl->parsed()) return cmd_cylinder(alpha_text, f_text, n, grid, tol, csv_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

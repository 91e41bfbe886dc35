#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specbundle/duality.hpp"
#include "specbundle/rational.hpp"
#include "specbundle/spectrum.hpp"
#include "specbundle/system.hpp"

namespace specbundle {

/// Parse or schema failure; message names the offending field or witness.
struct ParseError : Error {
  using Error::Error;
};

struct MeasuredSystem {
  FinSystem system;
  RationalMeasure measure;
};

struct BaseMap {
  std::vector<int> map;
};

struct WitnessDocument {
  IsoWitness witness;
};

struct Document {
  std::variant<FinSystem, FinBundle, MeasuredSystem, PointSpectrumBundle,
               MeasuredSpectrumBundle, GroupRotationBundle, DualBundle,
               BaseMap, WitnessDocument>
      payload;
  /// Rotation bundles may carry a measure (one weight per fiber state).
  std::optional<RationalMeasure> rotation_measure;
};

/// Strict parse: rejects unknown fields, requires format_version "1",
/// validates every structural invariant.
Document parse_document(const std::string& text);

/// Deterministic canonical serialization: sorted keys, reduced rationals,
/// two-space indent, trailing newline. parse o serialize is the identity.
std::string serialize_document(const Document& doc);

std::string serialize(const FinSystem& s);
std::string serialize(const FinBundle& b);
std::string serialize(const MeasuredSystem& m);
std::string serialize(const PointSpectrumBundle& p);
std::string serialize(const MeasuredSpectrumBundle& m);
std::string serialize(const GroupRotationBundle& g,
                      const std::optional<RationalMeasure>& measure = {});
std::string serialize(const DualBundle& d);
std::string serialize(const IsoWitness& w);

Document read_document_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace specbundle

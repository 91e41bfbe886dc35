#include "specbundle/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace specbundle {

using nlohmann::json;

namespace {

void require_fields(const json& j, const std::set<std::string>& required,
                    const std::set<std::string>& optional = {}) {
  for (const auto& [key, value] : j.items())
    if (!required.count(key) && !optional.count(key))
      throw ParseError("unknown field '" + key + "'");
  for (const auto& key : required)
    if (!j.contains(key)) throw ParseError("missing field '" + key + "'");
}

void require_version(const json& j) {
  if (!j.at("format_version").is_string() ||
      j.at("format_version").get<std::string>() != "1")
    throw ParseError("format_version must be the string \"1\"");
}

std::vector<int> int_array(const json& j, const std::string& field) {
  if (!j.at(field).is_array())
    throw ParseError("field '" + field + "' must be an array");
  std::vector<int> out;
  for (const auto& entry : j.at(field)) {
    if (!entry.is_number_integer())
      throw ParseError("field '" + field + "' must contain integers");
    out.push_back(entry.get<int>());
  }
  return out;
}

Rat rational_value(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) {
    try {
      return rat_from_string(j.get<std::string>());
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + " must be an integer or a string \"p/q\"");
}

int positive_int(const json& j, const std::string& field) {
  if (!j.at(field).is_number_integer() || j.at(field).get<long>() < 1)
    throw ParseError("field '" + field + "' must be a positive integer");
  return j.at(field).get<int>();
}

FinSystem parse_system(const json& j) {
  try {
    return FinSystem(positive_int(j, "states"), int_array(j, "map"));
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
}

RationalMeasure parse_weights(const json& j, std::size_t expected) {
  if (!j.at("weights").is_array() || j.at("weights").size() != expected)
    throw ParseError("field 'weights' must be an array of length " +
                     std::to_string(expected));
  std::vector<Rat> w;
  for (std::size_t i = 0; i < expected; ++i)
    w.push_back(rational_value(j.at("weights")[i],
                               "weights[" + std::to_string(i) + "]"));
  try {
    return RationalMeasure(std::move(w));
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
}

json rational_json(const Rat& r) { return json(rat_to_string(r)); }

}  // namespace

Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON syntax error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ParseError("document must be an object with a string 'type'");
  const auto type = j.at("type").get<std::string>();

  Document doc;
  try {
    if (type == "system") {
      require_fields(j, {"type", "format_version", "states", "map"});
      require_version(j);
      doc.payload = parse_system(j);
    } else if (type == "bundle") {
      require_fields(j, {"type", "format_version", "states", "map", "base", "proj"});
      require_version(j);
      doc.payload = FinBundle(parse_system(j), positive_int(j, "base"),
                              int_array(j, "proj"));
    } else if (type == "measured-system") {
      require_fields(j, {"type", "format_version", "states", "map", "weights"});
      require_version(j);
      auto system = parse_system(j);
      auto weights = parse_weights(j, system.n_states);
      doc.payload = MeasuredSystem{std::move(system), std::move(weights)};
    } else if (type == "spectrum") {
      require_fields(j, {"type", "format_version", "fibers"});
      require_version(j);
      PointSpectrumBundle p;
      for (const auto& fiber : j.at("fibers")) {
        require_fields(fiber, {"order"});
        p.fibers.push_back(CyclicSpectrum(positive_int(fiber, "order")));
      }
      if (p.fibers.empty()) throw ParseError("spectrum needs at least one fiber");
      doc.payload = std::move(p);
    } else if (type == "measured-spectrum") {
      require_fields(j, {"type", "format_version", "fibers"});
      require_version(j);
      MeasuredSpectrumBundle m;
      Rat total = 0;
      for (const auto& fiber : j.at("fibers")) {
        require_fields(fiber, {"order", "weight"});
        Rat w = rational_value(fiber.at("weight"), "weight");
        if (w < 0) throw ParseError("negative fiber weight");
        total += w;
        m.fibers.push_back({CyclicSpectrum(positive_int(fiber, "order")), w});
      }
      if (m.fibers.empty()) throw ParseError("spectrum needs at least one fiber");
      if (total != 1) throw ParseError("fiber weights must sum to exactly 1");
      doc.payload = std::move(m);
    } else if (type == "rotation-bundle") {
      require_fields(j, {"type", "format_version", "fibers"}, {"weights"});
      require_version(j);
      GroupRotationBundle g;
      for (const auto& fiber : j.at("fibers")) {
        require_fields(fiber, {"order", "step"});
        if (!fiber.at("step").is_number_integer())
          throw ParseError("fiber step must be an integer");
        g.fibers.push_back(
            {positive_int(fiber, "order"), fiber.at("step").get<long>()});
      }
      g.validate();
      if (j.contains("weights")) {
        std::size_t total_states = 0;
        for (const auto& fiber : g.fibers) total_states += fiber.order;
        doc.rotation_measure = parse_weights(j, total_states);
      }
      doc.payload = std::move(g);
    } else if (type == "dual-bundle") {
      require_fields(j, {"type", "format_version", "fibers"});
      require_version(j);
      DualBundle d;
      for (const auto& fiber : j.at("fibers")) {
        require_fields(fiber, {"order", "iota"});
        const Rat iota = rational_value(fiber.at("iota"), "iota");
        if (iota < 0 || iota >= 1)
          throw ParseError("iota must lie in [0, 1)");
        d.fibers.push_back({positive_int(fiber, "order"),
                            RationalAngle(iota.get_num().get_si(),
                                          iota.get_den().get_si())});
      }
      d.validate();
      doc.payload = std::move(d);
    } else if (type == "basemap") {
      require_fields(j, {"type", "map"}, {"format_version"});
      doc.payload = BaseMap{int_array(j, "map")};
    } else if (type == "witness") {
      require_fields(j, {"type", "format_version", "state_bijection",
                         "base_bijection"});
      require_version(j);
      doc.payload = WitnessDocument{IsoWitness{
          int_array(j, "state_bijection"), int_array(j, "base_bijection")}};
    } else {
      throw ParseError("unknown document type '" + type + "'");
    }
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  return doc;
}

namespace {

json system_json(const FinSystem& s) {
  return json{{"type", "system"},
              {"format_version", "1"},
              {"states", s.n_states},
              {"map", s.transition}};
}

json sorted_spectrum_json(const PointSpectrumBundle& p) {
  std::vector<long> orders;
  for (const auto& f : p.fibers) orders.push_back(f.order);
  std::sort(orders.begin(), orders.end());
  json fibers = json::array();
  for (long m : orders) fibers.push_back(json{{"order", m}});
  return json{{"type", "spectrum"}, {"format_version", "1"}, {"fibers", fibers}};
}

json sorted_measured_spectrum_json(const MeasuredSpectrumBundle& m) {
  auto sorted = m.fibers;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) {
                     if (a.spectrum.order != b.spectrum.order)
                       return a.spectrum.order < b.spectrum.order;
                     return a.weight < b.weight;
                   });
  json fibers = json::array();
  for (const auto& f : sorted)
    fibers.push_back(
        json{{"order", f.spectrum.order}, {"weight", rational_json(f.weight)}});
  return json{{"type", "measured-spectrum"},
              {"format_version", "1"},
              {"fibers", fibers}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string serialize(const FinSystem& s) { return dump(system_json(s)); }

std::string serialize(const FinBundle& b) {
  json j = system_json(b.system);
  j["type"] = "bundle";
  j["base"] = b.n_base;
  j["proj"] = b.proj;
  return dump(j);
}

std::string serialize(const MeasuredSystem& m) {
  json j = system_json(m.system);
  j["type"] = "measured-system";
  json weights = json::array();
  for (const auto& w : m.measure.weights) weights.push_back(rational_json(w));
  j["weights"] = weights;
  return dump(j);
}

std::string serialize(const PointSpectrumBundle& p) {
  return dump(sorted_spectrum_json(p));
}

std::string serialize(const MeasuredSpectrumBundle& m) {
  return dump(sorted_measured_spectrum_json(m));
}

std::string serialize(const GroupRotationBundle& g,
                      const std::optional<RationalMeasure>& measure) {
  json fibers = json::array();
  for (const auto& f : g.fibers)
    fibers.push_back(json{{"order", f.order}, {"step", f.step}});
  json j{{"type", "rotation-bundle"}, {"format_version", "1"}, {"fibers", fibers}};
  if (measure) {
    json weights = json::array();
    for (const auto& w : measure->weights) weights.push_back(rational_json(w));
    j["weights"] = weights;
  }
  return dump(j);
}

std::string serialize(const DualBundle& d) {
  json fibers = json::array();
  for (const auto& f : d.fibers)
    fibers.push_back(json{
        {"order", f.group_order},
        {"iota", rat_to_string(Rat(f.iota_value.num, f.iota_value.den))}});
  return dump(
      json{{"type", "dual-bundle"}, {"format_version", "1"}, {"fibers", fibers}});
}

std::string serialize(const IsoWitness& w) {
  return dump(json{{"type", "witness"},
                   {"format_version", "1"},
                   {"state_bijection", w.state_bijection},
                   {"base_bijection", w.base_bijection}});
}

std::string serialize_document(const Document& doc) {
  return std::visit(
      [&](const auto& payload) -> std::string {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, GroupRotationBundle>)
          return serialize(payload, doc.rotation_measure);
        else if constexpr (std::is_same_v<T, BaseMap>)
          return dump(json{{"type", "basemap"}, {"map", payload.map}});
        else if constexpr (std::is_same_v<T, WitnessDocument>)
          return serialize(payload.witness);
        else
          return serialize(payload);
      },
      doc.payload);
}

Document read_document_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

}  // namespace specbundle

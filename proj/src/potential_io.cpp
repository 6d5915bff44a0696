#include "steptunnel/potential_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "steptunnel/error.hpp"

namespace steptunnel {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ParseError, message); }

const json& require(const json& doc, const char* field) {
  auto it = doc.find(field);
  if (it == doc.end()) fail(std::string("missing field '") + field + "'");
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where + " must be a number");
  return value.get<double>();
}

std::vector<double> number_array(const json& doc, const char* field) {
  const json& arr = require(doc, field);
  if (!arr.is_array()) fail(std::string("field '") + field + "' must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(number(arr[i], std::string("field '") + field + "' index " + std::to_string(i)));
  return out;
}

}  // namespace

PotentialSource parse_potential(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("potential document must be a JSON object");
  const json& kind = require(doc, "kind");
  if (!kind.is_string()) fail("field 'kind' must be a string");

  if (kind == "explicit") {
    auto xs = number_array(doc, "x");
    auto vs = number_array(doc, "v");
    if (vs.size() != xs.size() + 1)
      throw Error(ErrorCode::LengthMismatch, "field 'v' has " + std::to_string(vs.size()) +
                                                 " entries, expected " + std::to_string(xs.size() + 1));
    for (std::size_t i = 1; i < xs.size(); ++i)
      if (!(xs[i] > xs[i - 1]))
        throw Error(ErrorCode::NonIncreasingBreakpoints,
                    "field 'x' index " + std::to_string(i) + " does not exceed index " + std::to_string(i - 1));
    return PiecewiseConstantPotential(std::move(xs), std::move(vs));
  }
  if (kind == "mbp") {
    MbpSpec spec;
    spec.barrier_height = number(require(doc, "v0"), "field 'v0'");
    spec.barrier_width = number(require(doc, "delta"), "field 'delta'");
    spec.well_widths = doc.contains("wells") ? number_array(doc, "wells") : std::vector<double>{};
    spec.origin = doc.contains("theta") ? number(doc["theta"], "field 'theta'") : 0.0;
    for (std::size_t i = 0; i < spec.well_widths.size(); ++i)
      if (!(spec.well_widths[i] > 0))
        throw Error(ErrorCode::InvalidSpec, "field 'wells' index " + std::to_string(i) + " must be positive");
    validate(spec);
    return spec;
  }
  fail("unknown kind '" + kind.get<std::string>() + "'");
}

PotentialSource load_potential(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_potential(buffer.str());
}

PiecewiseConstantPotential resolve(const PotentialSource& source) {
  if (const auto* spec = std::get_if<MbpSpec>(&source)) return build_mbp(*spec);
  return std::get<PiecewiseConstantPotential>(source);
}

std::string to_json(const PiecewiseConstantPotential& potential) {
  json doc;
  doc["kind"] = "explicit";
  doc["x"] = std::vector<double>(potential.breakpoints().begin(), potential.breakpoints().end());
  doc["v"] = std::vector<double>(potential.levels().begin(), potential.levels().end());
  return doc.dump();
}

std::string to_json(const MbpSpec& spec) {
  json doc;
  doc["kind"] = "mbp";
  doc["v0"] = spec.barrier_height;
  doc["delta"] = spec.barrier_width;
  doc["wells"] = spec.well_widths;
  doc["theta"] = spec.origin;
  return doc.dump();
}

}  // namespace steptunnel

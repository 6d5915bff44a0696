#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "steptunnel/potential.hpp"

namespace steptunnel {

/// A potential definition document: either explicit breakpoints/levels or
/// an MBP description. The MBP form is kept as a spec so callers can reuse
/// its well widths.
using PotentialSource = std::variant<PiecewiseConstantPotential, MbpSpec>;

/// Parse {"kind":"explicit","x":[...],"v":[...]} or
/// {"kind":"mbp","v0":..,"delta":..,"wells":[...],"theta":..}.
/// Errors name the offending field and index.
PotentialSource parse_potential(const std::string& text);
PotentialSource load_potential(const std::filesystem::path& path);

PiecewiseConstantPotential resolve(const PotentialSource& source);

std::string to_json(const PiecewiseConstantPotential& potential);
std::string to_json(const MbpSpec& spec);

}  // namespace steptunnel

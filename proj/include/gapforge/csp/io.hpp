#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gapforge/csp/instance.hpp"

namespace gapforge::csp {

CspInstance parse_dimacs(std::string_view text);
CspInstance parse_native(std::string_view text);
// Dispatches on the header: "p cnf" for DIMACS, "gcsp" for the native format.
CspInstance parse_instance(std::string_view text);

// DIMACS for 3SAT instances, the native format otherwise.
std::string serialize(const CspInstance& inst);
std::string serialize_dimacs(const CspInstance& inst);
std::string serialize_native(const CspInstance& inst);

// Entry i of the table is bit i of the hex number; most significant digit first.
std::string table_to_hex(std::span<const std::uint8_t> table);
std::vector<std::uint8_t> table_from_hex(std::string_view hex, std::size_t arity);

}  // namespace gapforge::csp

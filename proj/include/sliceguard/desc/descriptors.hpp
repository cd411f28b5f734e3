#pragma once

#include <filesystem>

#include "sliceguard/desc/schema.hpp"

namespace sliceguard::desc {

// Parsers reject unknown keys at every level and throw SyntaxError /
// SchemaError with the offending position or path.
Vnfd parse_vnfd(const std::string& document);
Nsd parse_nsd(const std::string& document);
Nst parse_nst(const std::string& document);

// Deterministic emitters; parse(serialize(x)) is structural identity and
// decimals carry exactly three fractional digits.
std::string serialize(const Vnfd& v);
std::string serialize(const Nsd& n);
std::string serialize(const Nst& n);

// Cross-reference checks over a whole package; empty result means valid.
std::vector<ValidationFinding> validate_package(const DescriptorPackage& pkg);

// Package directory layout: vnfd/*.yaml, nsd.yaml, nst/*.yaml.
DescriptorPackage load_package_dir(const std::filesystem::path& dir);
void write_package_dir(const DescriptorPackage& pkg,
                       const std::filesystem::path& dir);

bool structurally_equal(const Vnfd& a, const Vnfd& b);
bool structurally_equal(const Nsd& a, const Nsd& b);
bool structurally_equal(const Nst& a, const Nst& b);

}  // namespace sliceguard::desc

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sinebeta/pointproc.hpp"

namespace sinebeta::io {

// Hexadecimal float literal (printf %a); parses back bit-exactly with std::strtod.
std::string hex(double v);
double parse_double(const std::string& s);

// Text format: a "# window <lo> <hi>" header followed by one point per line, all as hex floats.
void write_text(std::ostream& out, const PointConfiguration& c);
PointConfiguration read_text(std::istream& in);
void save_text(const std::string& path, const PointConfiguration& c);
PointConfiguration load_text(const std::string& path);

// JSON: {"window": [lo, hi], "points": [...]} with hex-float strings.
nlohmann::json to_json(const PointConfiguration& c);
PointConfiguration from_json(const nlohmann::json& j);

}  // namespace sinebeta::io

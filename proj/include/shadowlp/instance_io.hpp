#pragma once

#include "shadowlp/interpolate.hpp"

#include <filesystem>
#include <string_view>

namespace shadowlp {

/// Malformed instance or config input. The message names the line/column or the field at fault.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses {"d": int, "n": int, "A": [[...] x n], "b": [...], "z": [...]} (A row-major).
LP parse_instance(std::string_view text);

LP load_instance(const std::filesystem::path& path);

std::string instance_to_json(const LP& lp);

/// Human-readable solve report: status, basis, x_opt, objective, pivots per phase, iterations.
std::string format_report(const LP& lp, const LPResult& result);

std::string read_file(const std::filesystem::path& path);

}  // namespace shadowlp

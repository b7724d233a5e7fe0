#pragma once

#include <stdexcept>
#include <string>

namespace gpe {

// Error taxonomy, mirrored by the CLI exit codes: config 2, parse 3, domain 4.

// Invalid parameters or inconsistent options (bad m/L, unknown mode,
// mismatched sizes chosen by the caller, unsupported combinations).
struct config_error : std::invalid_argument {
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input files. Includes a 1-based line number when one applies.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
  parse_error(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what) {}
};

// Input that is well-formed but outside the mathematical domain of an
// operation (isolated vertices, no reachable window, numeric underflow).
struct domain_error : std::domain_error {
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

}

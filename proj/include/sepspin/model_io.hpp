#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sepspin/lattice_model.hpp"

namespace sepspin {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the flat model format, one record per line:
///
///   spin i 2s
///   field i value
///   vx i j value      (likewise vy, vz)
///
/// Blank lines and '#' comments are ignored. Unspecified entries are zero.
/// A coupling given only as (i,j) is mirrored to (j,i); if both orders are
/// given they are kept as written so validate() can flag an asymmetry.
/// Every site 0..n-1 must carry a spin record.
ModelSpec read_model(std::istream& in);
ModelSpec read_model_file(const std::string& path);

/// Writes the same format with shortest round-trip number formatting.
/// Couplings are emitted for i <= j only (plus (j,i) where asymmetric).
void write_model(std::ostream& out, const ModelSpec& spec);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace sepspin

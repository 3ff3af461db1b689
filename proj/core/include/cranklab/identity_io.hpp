#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cranklab/verifier.hpp"

namespace cranklab {

// Malformed input.  what() carries source, line and column when known.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& msg, std::string path, long line, long column);
  const std::string& path() const { return path_; }
  long line() const { return line_; }
  long column() const { return column_; }

 private:
  std::string path_;
  long line_, column_;
};

// A file holds one identity, one series identity, or {"identities": [...]}
// mixing both kinds.
struct IdentityFile {
  std::vector<IdentitySpec> identities;
  std::vector<SeriesIdentity> series;
};

IdentityFile parse_identity_file(const std::string& text, const std::string& source = "<input>");
IdentityFile load_identity_file(const std::string& path);

CycNum parse_cycnum(const std::string& json_text);
std::string cycnum_json(const CycNum& c);
std::string phase_json(const Phase& t);
std::string spec_json(const IdentitySpec& s, int indent = 2);
std::string certificate_json(const ValenceCertificate& c, int indent = 2);
std::string ord_table_json(const OrdTable& t, int indent = 2);
// aligned text, one row per term
std::string ord_table_text(const OrdTable& t);

// line and column (1-based) of the value at a JSON pointer such as
// "/terms/3/nvec", or {0, 0} if it cannot be found
std::pair<long, long> locate_json_pointer(const std::string& text, const std::string& pointer);

}  // namespace cranklab

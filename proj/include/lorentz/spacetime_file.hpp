#pragma once

#include <map>
#include <string>

#include "lorentz/catalog.hpp"

namespace lorentz {

/// Parse a spacetime definition document. `origin` names the source in messages.
/// Throws FormatError (with line numbers) for malformed documents and
/// UnknownSpacetime / ParamError for bad `builtin:` stanzas.
Spacetime parse_spacetime(const std::string& text, const std::map<std::string, double>& overrides = {},
                          const std::string& origin = "<input>");

/// "builtin:<name>" or a path to a definition file. The second member is the canonical
/// text used for the input digest.
struct LoadedSpacetime {
  Spacetime spacetime;
  std::string canonical_input;
};
LoadedSpacetime load_spacetime(const std::string& spec, const std::map<std::string, double>& overrides = {});

/// Comma-separated reals, no spaces. Throws FormatError.
Vec parse_vector(const std::string& text, int expected_dim = -1);

}  // namespace lorentz

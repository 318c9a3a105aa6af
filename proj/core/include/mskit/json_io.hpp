#pragma once

#include <string>

#include "mskit/blaschke.hpp"
#include "mskit/dualspace.hpp"

namespace mskit {

/// {"constant": [re, im], "zeros": [{"point": [re, im], "mult": k}, ...]}
std::string to_json(const BlaschkeProduct& b, int indent = -1);
BlaschkeProduct blaschke_from_json(const std::string& text);

/// {"lo": .., "hi": .., "guard": .., "grid": ..}
std::string to_json(const LaurentWindow& w, int indent = -1);
LaurentWindow window_from_json(const std::string& text);

}  // namespace mskit

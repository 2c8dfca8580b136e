#ifndef COLLAGE_CLG_FORMAT_HPP
#define COLLAGE_CLG_FORMAT_HPP

#include <string>

#include "collage/system.hpp"

namespace collage {

/// Parses the .clg text format. Throws ParseError with line/col on bad input.
CollageSystem parse_system(const std::string& text);

/// Inverse of parse_system: parse_system(serialize_system(g)) == g.
std::string serialize_system(const CollageSystem& g);

}  // namespace collage

#endif

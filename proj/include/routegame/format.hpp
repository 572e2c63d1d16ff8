#pragma once

#include <string>

namespace routegame {

// A double at 17 significant digits (enough to round-trip), with "nan" and
// "inf" spelled out.
std::string format_double(double x);

}  // namespace routegame

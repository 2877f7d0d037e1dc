#pragma once

#include <string>

#include "pcf/berkovich.hpp"

namespace pcf::svg {

/// Fixed-size SVG rendering of a promenade: the polyline, axis ticks at
/// the zeros T_n, and value labels at the maxima.
std::string promenade_svg(const Promenade& p);

}  // namespace pcf::svg

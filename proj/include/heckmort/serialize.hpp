#pragma once

#include <string>

#include "heckmort/qseries.hpp"

namespace heckmort {

/// JSON form of a series: {"precision":[num,den],"terms":[[e_num,e_den,"c_num","c_den"],...]}
/// with terms ascending by exponent and coefficients as decimal strings so
/// the round trip is bit-exact at any size.
std::string series_to_json(const QSeries& s);

QSeries series_from_json(const std::string& text);

}  // namespace heckmort

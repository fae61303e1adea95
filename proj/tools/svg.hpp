#pragma once

#include <ostream>
#include <string>

#include "ddd/histogram.hpp"

namespace ddd::tools {

/// Static bar chart of a pmf in a fixed 400x300 viewBox.
void write_histogram_svg(std::ostream& out, const ScoreHistogram& h, const std::string& title);

}  // namespace ddd::tools

#include "svg.hpp"

#include <fmt/format.h>

namespace ddd::tools {

void write_histogram_svg(std::ostream& out, const ScoreHistogram& h, const std::string& title) {
  constexpr double kWidth = 400, kHeight = 300, kMargin = 30;
  const double peak = h.pmf().maxCoeff();
  const double slot = (kWidth - 2 * kMargin) / static_cast<double>(h.size());
  const double plot_h = kHeight - 2 * kMargin;

  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}">)", kWidth, kHeight) << '\n';
  out << fmt::format(R"(<text x="{}" y="18" font-size="12" text-anchor="middle">{}</text>)", kWidth / 2, title)
      << '\n';
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    const double bar_h = peak > 0 ? plot_h * h.pmf()(k) / peak : 0.0;
    const double x = kMargin + slot * static_cast<double>(k);
    out << fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="#4a7ab0"/>)",
                       x + 0.1 * slot, kHeight - kMargin - bar_h, 0.8 * slot, bar_h)
        << '\n';
    out << fmt::format(R"(<text x="{:.2f}" y="{}" font-size="10" text-anchor="middle">{}</text>)", x + 0.5 * slot,
                       kHeight - kMargin + 14, h.bins().first + k)
        << '\n';
  }
  out << "</svg>\n";
}

}  // namespace ddd::tools

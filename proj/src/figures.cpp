#include <cstdio>
#include <fstream>
#include <sstream>

#include "sbstlab/harness.hpp"

namespace sbstlab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 56.0;
constexpr double kRight = 16.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 52.0;
constexpr const char* kGaColor = "#3b6ea5";
constexpr const char* kRndColor = "#d1495b";

std::string cell_chart(const CellSummary& cell) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto n = static_cast<double>(cell.per_program.size());
  const double group_w = plot_w / n;
  const double bar_w = group_w * 0.38;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">GA vs random, "
      << to_string(cell.criterion) << " coverage, " << to_string(cell.level)
      << " complexity (target " << cell.target << ")</text>\n";

  // y grid and labels, 0..100 in steps of 20
  for (int tick = 0; tick <= 100; tick += 20) {
    const double y = kTop + plot_h * (1.0 - tick / 100.0);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << tick << "</text>\n";
  }

  for (std::size_t i = 0; i < cell.per_program.size(); ++i) {
    const ProgramResult& r = cell.per_program[i];
    const double x0 = kLeft + group_w * static_cast<double>(i);
    const double ga_h = plot_h * r.ga_coverage / 100.0;
    const double rnd_h = plot_h * r.rnd_coverage / 100.0;
    svg << "<rect class=\"ga\" x=\"" << num(x0 + group_w * 0.08) << "\" y=\""
        << num(kTop + plot_h - ga_h) << "\" width=\"" << num(bar_w)
        << "\" height=\"" << num(ga_h) << "\" fill=\"" << kGaColor << "\"/>\n";
    svg << "<rect class=\"rnd\" x=\"" << num(x0 + group_w * 0.54) << "\" y=\""
        << num(kTop + plot_h - rnd_h) << "\" width=\"" << num(bar_w)
        << "\" height=\"" << num(rnd_h) << "\" fill=\"" << kRndColor
        << "\"/>\n";
    svg << "<text x=\"" << num(x0 + group_w / 2) << "\" y=\""
        << num(kHeight - kBottom + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << i + 1 << "</text>\n";
  }

  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kWidth - kRight << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">program</text>\n";
  svg << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">coverage %</text>\n";

  // legend
  const double lx = kWidth - kRight - 150;
  svg << "<rect x=\"" << lx << "\" y=\"" << kTop - 14
      << "\" width=\"12\" height=\"12\" fill=\"" << kGaColor << "\"/>\n";
  svg << "<text x=\"" << lx + 17 << "\" y=\"" << kTop - 4
      << "\" font-family=\"sans-serif\" font-size=\"12\">GA</text>\n";
  svg << "<rect x=\"" << lx + 60 << "\" y=\"" << kTop - 14
      << "\" width=\"12\" height=\"12\" fill=\"" << kRndColor << "\"/>\n";
  svg << "<text x=\"" << lx + 77 << "\" y=\"" << kTop - 4
      << "\" font-family=\"sans-serif\" font-size=\"12\">random</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

void emit_figures(const ExperimentResult& result,
                  const std::filesystem::path& run_dir) {
  if (result.cells.empty()) throw std::invalid_argument("no results to plot");
  const auto dir = run_dir / "figures";
  std::filesystem::create_directories(dir);
  for (const CellSummary& cell : result.cells) {
    const auto path = dir / (std::string(to_string(cell.criterion)) + "-" +
                             to_string(cell.level) + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << cell_chart(cell);
  }
}

}  // namespace sbstlab

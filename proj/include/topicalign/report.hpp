#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topicalign/align.hpp"
#include "topicalign/geometry.hpp"

namespace topicalign {

struct MapStyle {
  double width = 640;
  double height = 640;
  double margin = 60;
  double max_radius = 48;
};

/// Static topic map: one circle per topic with area proportional to its
/// size, the label beside it, and unlabeled axes through the origin.
/// `colors`, when given, holds one CSS color per topic.
std::string render_map_svg(const Layout& layout, const std::vector<std::string>& labels,
                           const std::optional<std::vector<std::string>>& colors = std::nullopt,
                           const MapStyle& style = {});

/// Circle radius for each topic, as drawn by render_map_svg.
std::vector<double> bubble_radii(const Layout& layout, const MapStyle& style = {});

/// Writes `<stem>.svg` and `<stem>.html`; the HTML embeds the SVG and one
/// table of relevance-ranked terms per topic.
void emit_map(const Layout& layout, const std::vector<std::string>& labels,
              const std::vector<std::vector<RankedTerm>>& terms, const std::filesystem::path& stem,
              const std::string& title, const std::optional<std::vector<std::string>>& colors = std::nullopt);

/// Side-by-side maps of the two corpora with a line per selected pair and a
/// thick border on echo-flagged topics.
std::string render_alignment_svg(const AlignmentResult& result, const Layout& layout_a, const Layout& layout_b,
                                 const std::vector<std::string>& labels_a,
                                 const std::vector<std::string>& labels_b);

/// Writes `alignment.svg`, `alignment.html` and `alignment_matrix.tsv` into `dir`.
void emit_alignment_report(const AlignmentResult& result, const Layout& layout_a, const Layout& layout_b,
                           const std::vector<std::string>& labels_a, const std::vector<std::string>& labels_b,
                           const std::filesystem::path& dir);

std::string xml_escape(const std::string& text);

}  // namespace topicalign

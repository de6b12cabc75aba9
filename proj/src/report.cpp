#include "topicalign/report.hpp"

#include <cmath>
#include <cstdio>

#include "text_io.hpp"

namespace topicalign {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                          "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

struct Canvas {
  double cx, cy, scale;
};

Canvas fit_canvas(const Layout& layout, const MapStyle& style) {
  double extent = 0.0;
  if (layout.points() > 0) extent = layout.coords.cwiseAbs().maxCoeff();
  const double half = std::min(style.width, style.height) / 2.0 - style.margin;
  return {style.width / 2.0, style.height / 2.0, extent > 0.0 ? half / extent : 0.0};
}

// Circles, labels and axes for one map, positioned at (offset_x, 0).
std::string map_body(const Layout& layout, const std::vector<std::string>& labels,
                     const std::optional<std::vector<std::string>>& colors, const MapStyle& style, double offset_x,
                     const std::vector<bool>* echo) {
  const auto canvas = fit_canvas(layout, style);
  const auto radii = bubble_radii(layout, style);
  std::string out;
  out += "<path class=\"axis\" d=\"M " + num(offset_x + style.margin / 2) + " " + num(canvas.cy) + " H " +
         num(offset_x + style.width - style.margin / 2) + " M " + num(offset_x + canvas.cx) + " " +
         num(style.margin / 2) + " V " + num(style.height - style.margin / 2) +
         "\" stroke=\"#cccccc\" stroke-width=\"1\" fill=\"none\"/>\n";
  for (Eigen::Index i = 0; i < layout.points(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double x = offset_x + canvas.cx + canvas.scale * layout.coords(i, 0);
    const double y = canvas.cy - canvas.scale * layout.coords(i, 1);
    const std::string fill = colors ? colors->at(idx) : kPalette[idx % std::size(kPalette)];
    const bool thick = echo && (*echo)[idx];
    out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(radii[idx]) + "\" fill=\"" +
           xml_escape(fill) + "\" fill-opacity=\"0.55\" stroke=\"#222222\" stroke-width=\"" + (thick ? "4" : "1") +
           "\"/>\n";
    out += "<text x=\"" + num(x + radii[idx] + 3) + "\" y=\"" + num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(labels.at(idx)) + "</text>\n";
  }
  return out;
}

std::string svg_open(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n" +
         "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
}

// The SVG without its XML declaration, for inlining into HTML.
std::string inline_svg(const std::string& svg) {
  const auto pos = svg.find("<svg");
  return pos == std::string::npos ? svg : svg.substr(pos);
}

std::string html_page(const std::string& title, const std::string& body) {
  return "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n<title>" + xml_escape(title) +
         "</title>\n<style>\nbody{font-family:sans-serif;margin:2em;color:#222}\n"
         "table{border-collapse:collapse;margin:0.5em 1em 1em 0;display:inline-table;vertical-align:top}\n"
         "td,th{border:1px solid #bbb;padding:2px 6px;font-size:12px;text-align:left}\n"
         "th{background:#eee}\n.note{color:#555;font-size:13px;max-width:60em}\n</style>\n</head>\n<body>\n<h1>" +
         xml_escape(title) + "</h1>\n" + body + "</body>\n</html>\n";
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> bubble_radii(const Layout& layout, const MapStyle& style) {
  std::vector<double> out(static_cast<std::size_t>(layout.points()), style.max_radius);
  if (layout.points() == 0) return out;
  const double largest = layout.sizes.maxCoeff();
  for (Eigen::Index i = 0; i < layout.points(); ++i)
    out[static_cast<std::size_t>(i)] = style.max_radius * std::sqrt(layout.sizes(i) / largest);
  return out;
}

std::string render_map_svg(const Layout& layout, const std::vector<std::string>& labels,
                           const std::optional<std::vector<std::string>>& colors, const MapStyle& style) {
  return svg_open(style.width, style.height) + map_body(layout, labels, colors, style, 0.0, nullptr) + "</svg>\n";
}

void emit_map(const Layout& layout, const std::vector<std::string>& labels,
              const std::vector<std::vector<RankedTerm>>& terms, const std::filesystem::path& stem,
              const std::string& title, const std::optional<std::vector<std::string>>& colors) {
  const auto svg = render_map_svg(layout, labels, colors);
  io::write_file(std::filesystem::path(stem.string() + ".svg"), svg);

  std::string body = inline_svg(svg);
  body += "<h2>Relevant terms</h2>\n";
  for (std::size_t k = 0; k < terms.size(); ++k) {
    body += "<table><tr><th colspan=\"2\">" + xml_escape(labels.at(k)) + " (" +
            num(100.0 * layout.sizes(static_cast<Eigen::Index>(k))) + "%)</th></tr>\n";
    for (const auto& t : terms[k])
      body += "<tr><td>" + xml_escape(t.term) + "</td><td>" + num(t.score) + "</td></tr>\n";
    body += "</table>\n";
  }
  io::write_file(std::filesystem::path(stem.string() + ".html"), html_page(title, body));
}

std::string render_alignment_svg(const AlignmentResult& result, const Layout& layout_a, const Layout& layout_b,
                                 const std::vector<std::string>& labels_a, const std::vector<std::string>& labels_b) {
  const MapStyle style;
  std::string out = svg_open(2 * style.width, style.height);
  const auto ca = fit_canvas(layout_a, style);
  const auto cb = fit_canvas(layout_b, style);
  for (const auto& p : result.pairs) {
    const double x1 = ca.cx + ca.scale * layout_a.coords(p.topic_a, 0);
    const double y1 = ca.cy - ca.scale * layout_a.coords(p.topic_a, 1);
    const double x2 = style.width + cb.cx + cb.scale * layout_b.coords(p.topic_b, 0);
    const double y2 = cb.cy - cb.scale * layout_b.coords(p.topic_b, 1);
    out += "<line class=\"pair\" x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"#888888\" stroke-width=\"1.5\" stroke-opacity=\"0.7\"/>\n";
  }
  out += map_body(layout_a, labels_a, std::nullopt, style, 0.0, &result.echo_a);
  out += map_body(layout_b, labels_b, std::nullopt, style, style.width, &result.echo_b);
  out += "</svg>\n";
  return out;
}

void emit_alignment_report(const AlignmentResult& result, const Layout& layout_a, const Layout& layout_b,
                           const std::vector<std::string>& labels_a, const std::vector<std::string>& labels_b,
                           const std::filesystem::path& dir) {
  const auto svg = render_alignment_svg(result, layout_a, layout_b, labels_a, labels_b);
  io::write_file(dir / "alignment.svg", svg);
  write_alignment_tsv(result, dir / "alignment_matrix.tsv");

  std::string body =
      "<p class=\"note\">Distances compare raw topic:term distributions over the concatenated vocabulary. Corpus "
      "sizes are not reweighted, and closeness between topics does not establish influence in either direction. "
      "Thick borders mark topics whose mean distance to the other side is below the grand mean.</p>\n";
  body += inline_svg(svg);

  body += "<h2>Distance matrix</h2>\n<table><tr><th></th>";
  for (const auto& l : result.cross.col_labels) body += "<th>" + xml_escape(l) + "</th>";
  body += "<th>mean</th></tr>\n";
  for (Eigen::Index i = 0; i < result.cross.rows(); ++i) {
    body += "<tr><th>" + xml_escape(result.cross.row_labels.at(static_cast<std::size_t>(i))) + "</th>";
    for (Eigen::Index j = 0; j < result.cross.cols(); ++j) body += "<td>" + num(result.cross.values(i, j)) + "</td>";
    body += "<td>" + num(result.row_means(i)) + "</td></tr>\n";
  }
  body += "<tr><th>mean</th>";
  for (Eigen::Index j = 0; j < result.col_means.size(); ++j) body += "<td>" + num(result.col_means(j)) + "</td>";
  body += "<td>" + num(result.grand_mean) + "</td></tr>\n</table>\n";

  body += "<h2>Selected pairs</h2>\n<table><tr><th>topic</th><th>topic</th><th>distance</th></tr>\n";
  for (const auto& p : result.pairs)
    body += "<tr><td>" + xml_escape(result.cross.row_labels.at(static_cast<std::size_t>(p.topic_a))) + "</td><td>" +
            xml_escape(result.cross.col_labels.at(static_cast<std::size_t>(p.topic_b))) + "</td><td>" +
            num(p.distance) + "</td></tr>\n";
  body += "</table>\n";
  io::write_file(dir / "alignment.html", html_page("Topic alignment", body));
}

}  // namespace topicalign

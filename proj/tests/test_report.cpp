#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "topicalign/report.hpp"
#include "xml_check.hpp"

using namespace topicalign;

namespace {

Layout random_layout(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Layout l;
  l.coords.resize(n, 2);
  for (int i = 0; i < n; ++i) l.coords.row(i) << u(rng), u(rng);
  l.sizes = testing::random_distribution(n, rng);
  return l;
}

AlignmentResult result_with(int ka, int kb, const std::vector<TopicPair>& pairs) {
  AlignmentResult r;
  r.cross.kind = DistanceKind::rect_cross;
  r.cross.values = RowMatrixXd::Constant(ka, kb, 0.8);
  for (const auto& p : pairs) r.cross.values(p.topic_a, p.topic_b) = p.distance;
  r.cross.row_labels = topic_labels("S", ka);
  r.cross.col_labels = topic_labels("Q", kb);
  r = alignment_summary(r.cross, {0.5, std::nullopt});
  return r;
}

}  // namespace

TEST_CASE("two-topic map has two circles") {
  Layout l;
  l.coords.resize(2, 2);
  l.coords << -0.2, 0, 0.2, 0;
  l.sizes.resize(2);
  l.sizes << 0.8, 0.2;
  const auto svg = render_map_svg(l, {"S1", "S2"});
  const auto circles = testing::elements(svg, "circle");
  REQUIRE(circles.size() == 2);
  const double r1 = std::stod(testing::attr(circles[0], "r")), r2 = std::stod(testing::attr(circles[1], "r"));
  CHECK((r1 * r1) / (r2 * r2) == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(testing::elements(svg, "text").size() == 2);
  CHECK(testing::elements(svg, "line").empty());
}

TEST_CASE("bubble areas are proportional to sizes") {
  std::mt19937_64 rng(1);
  const auto l = random_layout(12, rng);
  const auto radii = bubble_radii(l);
  for (int i = 0; i < 12; ++i)
    CHECK(radii[static_cast<std::size_t>(i)] * radii[static_cast<std::size_t>(i)] / (radii[0] * radii[0]) ==
          doctest::Approx(l.sizes(i) / l.sizes(0)).epsilon(1e-12));
}

TEST_CASE("twenty-topic map is strict XML and labels are escaped") {
  std::mt19937_64 rng(2);
  const auto l = random_layout(20, rng);
  auto labels = topic_labels("S", 20);
  labels[3] = "a<b & \"c\"";
  const auto svg = render_map_svg(l, labels);
  REQUIRE(testing::is_well_formed(svg));
  CHECK(testing::elements(svg, "circle").size() == 20);
  const auto texts = testing::elements(svg, "text");
  REQUIRE(texts.size() == 20);
  CHECK(texts[3]->data() == "a<b & \"c\"");
  CHECK_FALSE(testing::is_well_formed("<svg><circle></svg>"));
}

TEST_CASE("custom colors are used") {
  std::mt19937_64 rng(3);
  const auto l = random_layout(2, rng);
  const auto svg = render_map_svg(l, {"A", "B"}, std::vector<std::string>{"#010203", "#040506"});
  const auto circles = testing::elements(svg, "circle");
  CHECK(testing::attr(circles[0], "fill") == "#010203");
  CHECK(testing::attr(circles[1], "fill") == "#040506");
}

TEST_CASE("emit_map writes SVG and a self-contained HTML page") {
  std::mt19937_64 rng(4);
  const auto l = random_layout(3, rng);
  std::vector<std::vector<RankedTerm>> terms{{{0, "obesity", -1.0}, {1, "diet", -2.0}}, {{2, "tax", -0.5}}, {}};
  const auto dir = testing::temp_dir("emit_map");
  emit_map(l, {"S1", "S2", "S3"}, terms, dir / "supply_map", "Supply <map>");
  const auto svg = testing::slurp(dir / "supply_map.svg");
  const auto html = testing::slurp(dir / "supply_map.html");
  CHECK(testing::is_well_formed(svg));
  REQUIRE(testing::is_well_formed(html));
  CHECK(testing::elements(html, "circle").size() == 3);
  CHECK(testing::elements(html, "table").size() == 3);
  CHECK(html.find("obesity") != std::string::npos);
  CHECK(html.find("Supply &lt;map&gt;") != std::string::npos);
  CHECK(html.find("http://") == html.find("http://www.w3.org/2000/svg"));
  CHECK(html.find("https://") == std::string::npos);
  CHECK(html.find("<script") == std::string::npos);
}

TEST_CASE("alignment report draws one line per pair") {
  std::mt19937_64 rng(5);
  const auto la = random_layout(4, rng), lb = random_layout(5, rng);
  const auto three = result_with(4, 5, {{0, 1, 0.2}, {2, 2, 0.3}, {3, 0, 0.45}});
  REQUIRE(three.pairs.size() == 3);
  const auto svg = render_alignment_svg(three, la, lb, topic_labels("S", 4), topic_labels("Q", 5));
  REQUIRE(testing::is_well_formed(svg));
  CHECK(testing::elements(svg, "line").size() == 3);
  CHECK(testing::elements(svg, "circle").size() == 9);

  int thick = 0;
  for (const auto* c : testing::elements(svg, "circle")) thick += testing::attr(c, "stroke-width") == "4";
  int flagged = 0;
  for (bool e : three.echo_a) flagged += e;
  for (bool e : three.echo_b) flagged += e;
  CHECK(thick == flagged);

  const auto none = result_with(4, 5, {});
  CHECK(none.pairs.empty());
  CHECK(testing::elements(render_alignment_svg(none, la, lb, topic_labels("S", 4), topic_labels("Q", 5)), "line").empty());
}

TEST_CASE("alignment matrix TSV marginals recompute from the file") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  RowMatrixXd m(4, 6);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  DistanceMatrix cross;
  cross.kind = DistanceKind::rect_cross;
  cross.values = m;
  cross.row_labels = topic_labels("S", 4);
  cross.col_labels = topic_labels("Q", 6);
  const auto r = alignment_summary(cross, {0.5, 5});
  const auto dir = testing::temp_dir("align_report");
  emit_alignment_report(r, random_layout(4, rng), random_layout(6, rng), cross.row_labels, cross.col_labels, dir);
  CHECK(testing::is_well_formed(testing::slurp(dir / "alignment.svg")));
  const auto html = testing::slurp(dir / "alignment.html");
  REQUIRE(testing::is_well_formed(html));
  CHECK(testing::elements(html, "line").size() == 5);

  std::istringstream in(testing::slurp(dir / "alignment_matrix.tsv"));
  std::vector<std::vector<std::string>> cells;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, '\t');) row.push_back(c);
    cells.push_back(row);
  }
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].back() == "mean");
  CHECK(cells[5][0] == "mean");
  double grand = 0;
  for (int i = 0; i < 4; ++i) {
    double row = 0;
    for (int j = 0; j < 6; ++j) row += std::stod(cells[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j + 1)]);
    CHECK(std::stod(cells[static_cast<std::size_t>(i + 1)][7]) == doctest::Approx(row / 6).epsilon(1e-8));
    grand += row;
  }
  for (int j = 0; j < 6; ++j) {
    double col = 0;
    for (int i = 0; i < 4; ++i) col += std::stod(cells[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j + 1)]);
    CHECK(std::stod(cells[5][static_cast<std::size_t>(j + 1)]) == doctest::Approx(col / 4).epsilon(1e-8));
  }
  CHECK(std::stod(cells[5][7]) == doctest::Approx(grand / 24).epsilon(1e-8));
}

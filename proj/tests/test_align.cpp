#include <doctest.h>

#include <random>

#include "pair_oracle.hpp"
#include "test_support.hpp"
#include "topicalign/align.hpp"

using namespace topicalign;

namespace {

Vocabulary vocab_of(std::vector<std::string> terms) {
  std::sort(terms.begin(), terms.end());
  return Vocabulary(terms, std::vector<std::size_t>(terms.size(), 1), 1, "");
}

TopicModel model_of(const RowMatrixXd& phi, const Vocabulary& v) {
  TopicModel m;
  m.topics = static_cast<int>(phi.rows());
  m.phi = phi;
  m.vocab_checksum = v.checksum();
  return m;
}

DistanceMatrix cross_of(const RowMatrixXd& values) {
  DistanceMatrix d;
  d.kind = DistanceKind::rect_cross;
  d.values = values;
  d.row_labels = topic_labels("S", values.rows());
  d.col_labels = topic_labels("Q", values.cols());
  return d;
}

}  // namespace

TEST_CASE("union vocabulary") {
  const auto uv = union_vocabulary(vocab_of({"a", "b"}), vocab_of({"b", "c"}));
  CHECK(uv.terms == std::vector<std::string>{"a", "b", "c"});
  CHECK(uv.shared_count == 1);
  CHECK(uv.map_a == std::vector<std::size_t>{0, 1});
  CHECK(uv.map_b == std::vector<std::size_t>{1, 2});

  const auto disjoint = union_vocabulary(vocab_of({"x", "y", "z"}), vocab_of({"a", "m"}));
  CHECK(disjoint.shared_count == 0);
  CHECK(disjoint.size() == 5);
}

TEST_CASE("union vocabulary on random term sets") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> coin(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> a, b;
    for (int w = 0; w < 60; ++w) {
      const std::string t = "w" + std::to_string(w);
      const int c = coin(rng);
      if (c != 1) a.push_back(t);
      if (c != 0) b.push_back(t);
    }
    if (a.empty() || b.empty()) continue;
    const auto va = vocab_of(a), vb = vocab_of(b);
    const auto uv = union_vocabulary(va, vb);
    CHECK(uv.size() == va.size() + vb.size() - uv.shared_count);
    CHECK(std::is_sorted(uv.terms.begin(), uv.terms.end()));
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(uv.terms[uv.map_a[i]] == va.term(i));
    for (std::size_t i = 0; i < vb.size(); ++i) CHECK(uv.terms[uv.map_b[i]] == vb.term(i));
    CHECK(std::set<std::size_t>(uv.map_a.begin(), uv.map_a.end()).size() == va.size());
  }
}

TEST_CASE("embed topic") {
  VectorXd row(3);
  row << 0.2, 0.5, 0.3;
  VectorXd expected(5);
  expected << 0, 0.2, 0, 0.5, 0.3;
  CHECK(embed_topic(row, {1, 3, 4}, 5) == expected);

  VectorXd padded = VectorXd::Zero(5);
  padded.head(3) = row;
  CHECK(embed_topic(row, {0, 1, 2}, 5) == padded);
  CHECK_THROWS_AS(embed_topic(row, {0, 1, 5}, 5), DataError);
  CHECK_THROWS_AS(embed_topic(row, {0, 1}, 5), DataError);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd p = testing::random_distribution(20, rng, 0.2);
    std::vector<std::size_t> map(20);
    std::iota(map.begin(), map.end(), 0);
    std::shuffle(map.begin(), map.end(), rng);
    for (auto& m : map) m += 7;
    CHECK(std::abs(embed_topic(p, map, 30).sum() - p.sum()) <= 1e-12);
  }
}

TEST_CASE("cross distances against itself equal the intra matrix") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> terms;
    for (int w = 0; w < 25; ++w) terms.push_back("t" + std::to_string(w));
    const auto v = vocab_of(terms);
    const auto m = model_of(testing::random_theta(6, 25, rng, 0.2), v);
    const auto cross = cross_distances(m, m, union_vocabulary(v, v));
    const auto intra = topic_distance_matrix(m);
    CHECK(cross.kind == DistanceKind::rect_cross);
    CHECK(cross.values.diagonal().cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((cross.values - intra.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("cross distances across disjoint vocabularies are one") {
  std::mt19937_64 rng(13);
  const auto va = vocab_of({"a1", "a2", "a3"}), vb = vocab_of({"b1", "b2"});
  const auto cross = cross_distances(model_of(testing::random_theta(2, 3, rng), va),
                                     model_of(testing::random_theta(4, 2, rng), vb), union_vocabulary(va, vb));
  CHECK(cross.rows() == 2);
  CHECK(cross.cols() == 4);
  CHECK((cross.values.array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("cross distances match an embed and JSD oracle") {
  std::mt19937_64 rng(14);
  const auto va = vocab_of({"b", "d", "e", "g"}), vb = vocab_of({"a", "b", "c", "e", "f"});
  const auto a = model_of(testing::random_theta(3, 4, rng), va), b = model_of(testing::random_theta(2, 5, rng), vb);
  const auto uv = union_vocabulary(va, vb);
  REQUIRE(uv.terms == std::vector<std::string>{"a", "b", "c", "d", "e", "f", "g"});
  const std::vector<std::size_t> place_a{1, 3, 4, 6}, place_b{0, 1, 2, 4, 5};
  const auto cross = cross_distances(a, b, uv, "S", "Q");
  CHECK(cross.row_labels == std::vector<std::string>{"S1", "S2", "S3"});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<double> p(7, 0.0), q(7, 0.0);
      for (int w = 0; w < 4; ++w) p[place_a[static_cast<std::size_t>(w)]] = a.phi(i, w);
      for (int w = 0; w < 5; ++w) q[place_b[static_cast<std::size_t>(w)]] = b.phi(j, w);
      CHECK(std::abs(cross.values(i, j) - testing::jsd_definition(p, q)) <= 1e-12);
    }

  auto stale = b;
  stale.vocab_checksum = "0000";
  CHECK_THROWS_AS(cross_distances(a, stale, uv), DataError);
}

TEST_CASE("alignment summary hand example") {
  RowMatrixXd m(2, 2);
  m << 0.1, 0.9, 0.8, 0.9;
  const auto r = alignment_summary(cross_of(m), {0.5, std::nullopt});
  CHECK(r.row_means(0) == doctest::Approx(0.5));
  CHECK(r.row_means(1) == doctest::Approx(0.85));
  CHECK(r.col_means(0) == doctest::Approx(0.45));
  CHECK(r.col_means(1) == doctest::Approx(0.9));
  CHECK(r.grand_mean == doctest::Approx(0.675));
  CHECK(r.echo_a == std::vector<bool>{true, false});
  CHECK(r.echo_b == std::vector<bool>{true, false});
  CHECK(r.pairs == std::vector<TopicPair>{{0, 0, 0.1}});
}

TEST_CASE("threshold and top-n selection") {
  RowMatrixXd m(3, 3);
  m << 0.7, 0.2, 0.9, 0.45, 0.6, 0.5, 0.8, 0.3, 0.95;
  const auto thr = alignment_summary(cross_of(m), {0.5, std::nullopt});
  CHECK(thr.pairs == std::vector<TopicPair>{{0, 1, 0.2}, {2, 1, 0.3}, {1, 0, 0.45}});

  const auto top = alignment_summary(cross_of(m), {0.5, 5});
  CHECK(top.pairs.size() == 5);
  CHECK(top.pairs[3] == TopicPair{1, 2, 0.5});
  CHECK(top.pairs[4] == TopicPair{1, 1, 0.6});

  RowMatrixXd ties = RowMatrixXd::Constant(2, 2, 0.3);
  const auto t = alignment_summary(cross_of(ties), {0.5, 3});
  CHECK(t.pairs == std::vector<TopicPair>{{0, 0, 0.3}, {0, 1, 0.3}, {1, 0, 0.3}});
  CHECK(alignment_summary(cross_of(ties), {0.5, 10}).pairs.size() == 4);
  CHECK_THROWS_AS(alignment_summary(cross_of(ties), {1.5, std::nullopt}), ConfigError);
}

TEST_CASE("selection matches a sort-based oracle on random matrices") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    RowMatrixXd m(20, 30);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::round(u(rng) * 200) / 200;  // forces ties
    const auto all = testing::sorted_pairs(m);

    const auto top = alignment_summary(cross_of(m), {0.5, 23});
    CHECK(top.pairs == std::vector<TopicPair>(all.begin(), all.begin() + 23));

    std::vector<TopicPair> below;
    for (const auto& p : all)
      if (p.distance < 0.5) below.push_back(p);
    const auto thr = alignment_summary(cross_of(m), {0.5, std::nullopt});
    CHECK(thr.pairs == below);

    const auto wider = alignment_summary(cross_of(m), {0.6, std::nullopt});
    for (const auto& p : thr.pairs) CHECK(std::find(wider.pairs.begin(), wider.pairs.end(), p) != wider.pairs.end());

    std::vector<int> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RowMatrixXd permuted(20, 30);
    for (int j = 0; j < 30; ++j) permuted.col(j) = m.col(perm[static_cast<std::size_t>(j)]);
    const auto pr = alignment_summary(cross_of(permuted), {0.5, std::nullopt});
    CHECK(pr.echo_a == thr.echo_a);
    for (int j = 0; j < 30; ++j) CHECK(pr.echo_b[static_cast<std::size_t>(j)] == thr.echo_b[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
  }
}

TEST_CASE("alignment files") {
  RowMatrixXd m(2, 3);
  m << 0.1, 0.5, 0.9, 0.3, 0.7, 0.2;
  const auto r = alignment_summary(cross_of(m), {0.5, 2});
  const auto dir = testing::temp_dir("align_io");
  write_alignment_json(r, dir / "a.json");
  const auto back = read_alignment_json(dir / "a.json");
  CHECK(back.pairs == r.pairs);
  CHECK(back.echo_a == r.echo_a);
  CHECK(back.echo_b == r.echo_b);
  CHECK(back.grand_mean == doctest::Approx(r.grand_mean));
  CHECK((back.cross.values - m).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(back.selection.top_n == 2);

  write_alignment_tsv(r, dir / "a.tsv");
  const auto text = testing::slurp(dir / "a.tsv");
  CHECK(text.find("mean") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "topicalign/error.hpp"
#include "topicalign/synthetic.hpp"
#include "topicalign/topicmodel.hpp"
#include "topicalign/vocab.hpp"

using namespace topicalign;

namespace {

DocTermMatrix make_matrix(const std::vector<std::vector<DocTermMatrix::Entry>>& rows, std::size_t vocab) {
  DocTermMatrix m;
  m.vocab_size = vocab;
  for (std::size_t d = 0; d < rows.size(); ++d) {
    m.doc_ids.push_back("d" + std::to_string(d));
    m.rows.push_back(rows[d]);
    int n = 0;
    for (const auto& e : rows[d]) n += e.second;
    m.doc_lengths.push_back(n);
  }
  return m;
}

FitOptions options(int k, double alpha, double beta, int iterations, std::uint64_t seed) {
  FitOptions o;
  o.topics = k;
  o.priors = {alpha, beta};
  o.iterations = iterations;
  o.seed = seed;
  return o;
}

// Estimated phi re-indexed into the planted word order (absent words get 0).
RowMatrixXd to_planted_order(const TopicModel& model, const Vocabulary& vocab, const std::vector<std::string>& words) {
  RowMatrixXd out = RowMatrixXd::Zero(model.phi.rows(), static_cast<Eigen::Index>(words.size()));
  for (std::size_t w = 0; w < words.size(); ++w)
    if (const auto idx = vocab.find(words[w]); idx >= 0) out.col(static_cast<Eigen::Index>(w)) = model.phi.col(idx);
  return out;
}

void check_trend(const TopicModel& model) {
  const auto& t = model.loglik_trace;
  REQUIRE(t.size() >= 4);
  const std::size_t q = t.size() / 4;
  double first = 0, last = 0;
  for (std::size_t i = 0; i < q; ++i) {
    first += t[i].value;
    last += t[t.size() - 1 - i].value;
  }
  CHECK(last / q >= first / q);
}

}  // namespace

TEST_CASE("fit rejects invalid arguments") {
  const auto m = make_matrix({{{0, 2}, {1, 1}}}, 2);
  CHECK_THROWS_AS(fit(m, options(0, 0.1, 0.01, 10, 1)), ConfigError);
  CHECK_THROWS_AS(fit(m, options(2, 0.0, 0.01, 10, 1)), ConfigError);
  CHECK_THROWS_AS(fit(m, options(2, 0.1, -1.0, 10, 1)), ConfigError);
  CHECK_THROWS_AS(fit(m, options(2, 0.1, 0.01, 0, 1)), ConfigError);
  CHECK_THROWS_AS(fit(make_matrix({{}, {}}, 2), options(2, 0.1, 0.01, 10, 1)), DataError);
}

TEST_CASE("single topic degenerates to smoothed corpus frequencies") {
  const auto m = make_matrix({{{0, 3}, {2, 1}}, {{1, 2}, {2, 2}}, {}}, 4);
  const double beta = 0.01;
  const auto model = fit(m, options(1, 0.5, beta, 20, 3));
  for (Eigen::Index d = 0; d < model.theta.rows(); ++d) CHECK(model.theta(d, 0) == doctest::Approx(1.0).epsilon(1e-15));
  const double counts[] = {3, 2, 3, 0};
  for (int w = 0; w < 4; ++w) CHECK(model.phi(0, w) == doctest::Approx((counts[w] + beta) / (8 + 4 * beta)));
}

TEST_CASE("empty documents get a uniform theta row") {
  const auto m = make_matrix({{{0, 3}}, {}, {{1, 4}}}, 2);
  const auto model = fit(m, options(3, 0.2, 0.01, 30, 5));
  for (int k = 0; k < 3; ++k) CHECK(model.theta(1, k) == doctest::Approx(1.0 / 3));
}

TEST_CASE("disjoint sub-corpora separate into their own topics") {
  // 40 documents over terms 0-9, 40 over terms 10-19, 50 tokens each.
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> term(0, 9);
  std::vector<std::vector<DocTermMatrix::Entry>> rows;
  for (int d = 0; d < 80; ++d) {
    std::map<std::size_t, int> counts;
    for (int n = 0; n < 50; ++n) ++counts[static_cast<std::size_t>(term(rng) + (d < 40 ? 0 : 10))];
    rows.emplace_back(counts.begin(), counts.end());
  }
  const auto m = make_matrix(rows, 20);
  const auto model = fit(m, options(2, 0.1, 0.01, 500, 9));

  Eigen::Index topic_a = 0, topic_b = 0;
  model.theta.row(0).maxCoeff(&topic_a);
  model.theta.row(40).maxCoeff(&topic_b);
  CHECK(topic_a != topic_b);
  for (int d = 0; d < 80; ++d) CHECK(model.theta(d, d < 40 ? topic_a : topic_b) >= 0.9);
  CHECK(max_row_sum_error(model.phi) <= 1e-9);
  CHECK(max_row_sum_error(model.theta) <= 1e-9);
}

TEST_CASE("planted topics are recovered up to permutation") {
  const auto planted = synthetic::planted_lda(3, 30, 200, 50, 0.5, 0.01, 77);
  const auto vocab = build_vocabulary(planted.corpus, {}, 1);
  const auto m = count_matrix(planted.corpus, vocab);
  auto o = options(3, 0.5, 0.01, 1000, 1234);
  o.vocab_checksum = vocab.checksum();
  const auto model = fit(m, o);

  const double tv = testing::matched_mean_tv(planted.phi, to_planted_order(model, vocab, planted.words));
  MESSAGE("mean matched TV = " << tv);
  CHECK(tv <= 0.15);
  CHECK(max_row_sum_error(model.phi) <= 1e-9);
  CHECK(max_row_sum_error(model.theta) <= 1e-9);
  check_trend(model);
}

TEST_CASE("identical inputs give a bit-identical model") {
  const auto planted = synthetic::planted_lda(4, 40, 60, 30, 0.3, 0.05, 5);
  const auto vocab = build_vocabulary(planted.corpus, {}, 1);
  const auto m = count_matrix(planted.corpus, vocab);
  auto o = options(4, 0.3, 0.05, 60, 99);
  o.keep_assignments = true;
  const auto a = fit(m, o);
  const auto b = fit(m, o);
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
  CHECK(a.loglik_trace == b.loglik_trace);
  CHECK(*a.assignments == *b.assignments);

  o.seed = 100;
  const auto c = fit(m, o);
  CHECK(c.phi != a.phi);
}

TEST_CASE("likelihood is recorded every ten sweeps plus the start") {
  const auto m = make_matrix({{{0, 3}, {1, 1}}, {{1, 2}}}, 2);
  const auto model = fit(m, options(2, 0.5, 0.01, 35, 1));
  std::vector<int> sweeps;
  for (const auto& r : model.loglik_trace) sweeps.push_back(r.sweep);
  CHECK(sweeps == std::vector<int>{0, 10, 20, 30, 35});
}

TEST_CASE("corpus topic weights") {
  SUBCASE("single topic") {
    const auto m = make_matrix({{{0, 2}}, {{1, 5}}}, 2);
    const auto model = fit(m, options(1, 0.5, 0.01, 5, 1));
    CHECK(corpus_topic_weights(model, m)(0) == doctest::Approx(1.0));
  }
  SUBCASE("two equal-length one-hot documents") {
    TopicModel model;
    model.topics = 2;
    model.theta.resize(2, 2);
    model.theta << 1, 0, 0, 1;
    const auto m = make_matrix({{{0, 4}}, {{1, 4}}}, 2);
    const auto w = corpus_topic_weights(model, m);
    CHECK(w(0) == doctest::Approx(0.5));
    CHECK(w(1) == doctest::Approx(0.5));
  }
  SUBCASE("random model matches direct weighted sum") {
    std::mt19937_64 rng(8);
    TopicModel model;
    model.topics = 5;
    model.theta = testing::random_theta(30, 5, rng);
    std::uniform_int_distribution<int> len(0, 20);
    std::vector<std::vector<DocTermMatrix::Entry>> rows;
    for (int d = 0; d < 30; ++d) {
      const int n = len(rng);
      rows.push_back(n ? std::vector<DocTermMatrix::Entry>{{0, n}} : std::vector<DocTermMatrix::Entry>{});
    }
    const auto m = make_matrix(rows, 1);
    const auto w = corpus_topic_weights(model, m);
    double total = 0;
    for (int d = 0; d < 30; ++d) total += m.doc_lengths[static_cast<std::size_t>(d)];
    for (int k = 0; k < 5; ++k) {
      double s = 0;
      for (int d = 0; d < 30; ++d) s += m.doc_lengths[static_cast<std::size_t>(d)] * model.theta(d, k);
      CHECK(w(k) == doctest::Approx(s / total).epsilon(1e-12));
    }
    CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch") {
    TopicModel model;
    model.theta = RowMatrixXd::Constant(3, 2, 0.5);
    CHECK_THROWS_AS(corpus_topic_weights(model, make_matrix({{{0, 1}}}, 1)), DataError);
  }
}

TEST_CASE("log likelihood") {
  SUBCASE("one token, one topic") {
    RowMatrixXd theta(1, 1), phi(1, 3);
    theta << 1.0;
    phi << 0.2, 0.5, 0.3;
    CHECK(log_likelihood(theta, phi, make_matrix({{{1, 1}}}, 3)) == doctest::Approx(std::log(0.5)));
  }
  SUBCASE("random instance matches a double loop and is nonpositive") {
    std::mt19937_64 rng(15);
    const int D = 12, K = 4, V = 9;
    const auto theta = testing::random_theta(D, K, rng);
    const auto phi = testing::random_theta(K, V, rng);
    std::uniform_int_distribution<int> count(0, 3);
    std::vector<std::vector<DocTermMatrix::Entry>> rows(D);
    for (int d = 0; d < D; ++d)
      for (int w = 0; w < V; ++w)
        if (const int c = count(rng)) rows[static_cast<std::size_t>(d)].emplace_back(w, c);
    const auto m = make_matrix(rows, V);

    double expected = 0;
    for (int d = 0; d < D; ++d)
      for (const auto& [w, c] : rows[static_cast<std::size_t>(d)]) {
        double p = 0;
        for (int k = 0; k < K; ++k) p += theta(d, k) * phi(k, static_cast<Eigen::Index>(w));
        expected += c * std::log(p);
      }
    const double ll = log_likelihood(theta, phi, m);
    CHECK(ll == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ll <= 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(log_likelihood(RowMatrixXd::Ones(2, 1), RowMatrixXd::Ones(1, 1), make_matrix({{{0, 1}}}, 1)),
                    DataError);
  }
}

TEST_CASE("model persistence") {
  const auto planted = synthetic::planted_lda(3, 20, 25, 20, 0.5, 0.1, 2);
  const auto vocab = build_vocabulary(planted.corpus, {}, 1);
  const auto m = count_matrix(planted.corpus, vocab);
  auto o = options(3, 0.5, 0.1, 20, 4);
  o.vocab_checksum = vocab.checksum();
  const auto model = fit(m, o);

  const auto dir = testing::temp_dir("model_io");
  save_model(model, dir / "model");
  const auto loaded = load_model(dir / "model");
  CHECK(loaded.topics == 3);
  CHECK(loaded.seed == 4);
  CHECK(loaded.vocab_checksum == vocab.checksum());
  CHECK(loaded.loglik_trace == model.loglik_trace);
  CHECK((loaded.phi - model.phi).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((loaded.theta - model.theta).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(max_row_sum_error(loaded.phi) <= 1e-12);
  CHECK(max_row_sum_error(loaded.theta) <= 1e-12);
}

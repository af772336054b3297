#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bbmh/error.hpp"
#include "bbmh/learn.hpp"
#include "bbmh/mix.hpp"

using namespace bbmh;
using namespace bbmh::learn;

namespace {

Dataset separable_pair() {
  Dataset d;
  d.dim = 2;
  d.records.push_back({1, {{0}, {}}});
  d.records.push_back({-1, {{1}, {}}});
  return d;
}

// Random real-valued problem with a planted linear rule and some label noise.
Dataset random_problem(std::uint64_t seed, std::size_t n, std::uint32_t dim) {
  SplitMixStream rng(seed);
  std::vector<double> truth(dim);
  for (auto& t : truth) t = rng.uniform() * 2 - 1;
  Dataset d;
  d.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    Example ex;
    double score = 0;
    for (std::uint32_t j = 0; j < dim; ++j) {
      if (rng.uniform() < 0.5) continue;
      const double v = rng.uniform() * 2 - 1;
      ex.x.indices.push_back(j);
      ex.x.values.push_back(v);
      score += v * truth[j];
    }
    ex.label = (score >= 0) != (rng.uniform() < 0.1) ? 1 : -1;
    d.records.push_back(std::move(ex));
  }
  return d;
}

}  // namespace

TEST(Train, RejectsBadInput) {
  EXPECT_THROW(train(Dataset{}, Loss::hinge, 1.0), InvalidArgument);
  EXPECT_THROW(train(separable_pair(), Loss::hinge, 0.0), InvalidArgument);
  EXPECT_THROW(train(separable_pair(), Loss::logistic, -1.0), InvalidArgument);
  Dataset bad = separable_pair();
  bad.records[0].label = 0;
  EXPECT_THROW(train(bad, Loss::hinge, 1.0), InvalidArgument);
}

TEST(Train, SeparablePairIsLearned) {
  for (Loss loss : {Loss::hinge, Loss::logistic}) {
    const LinearModel m = train(separable_pair(), loss, 100.0);
    EXPECT_EQ(accuracy(m, separable_pair()), 1.0);
  }
}

TEST(Train, ObjectiveNeverWorseThanZero) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = random_problem(seed, 200, 30);
    for (Loss loss : {Loss::hinge, Loss::logistic}) {
      for (double C : {0.001, 1.0, 100.0}) {
        const LinearModel m = train(d, loss, C);
        const std::vector<double> zero(30, 0.0);
        EXPECT_LT(objective(m.weights, d, loss, C), objective(zero, d, loss, C));
        for (double w : m.weights) EXPECT_TRUE(std::isfinite(w));
      }
    }
  }
}

TEST(Train, ReproducibleFromSeed) {
  const Dataset d = random_problem(3, 300, 20);
  TrainConfig cfg;
  cfg.seed = 17;
  EXPECT_EQ(train(d, Loss::hinge, 1.0, cfg).weights, train(d, Loss::hinge, 1.0, cfg).weights);
  cfg.seed = 18;
  EXPECT_NE(train(d, Loss::hinge, 1.0, TrainConfig{}).weights, train(d, Loss::hinge, 1.0, cfg).weights);
}

TEST(Train, ApproachesTheOptimumOfTheLogisticObjective) {
  // Plain gradient descent on the smooth objective gives a reference optimum.
  const Dataset d = random_problem(5, 200, 10);
  const double C = 0.1;
  std::vector<double> w(10, 0.0);
  for (int it = 0; it < 20000; ++it) {
    const auto g = logistic_gradient(w, d, C);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= 0.02 * g[i];
  }
  const double best = objective(w, d, Loss::logistic, C);
  TrainConfig cfg;
  cfg.max_epochs = 200;
  cfg.tolerance = 1e-7;
  const LinearModel m = train(d, Loss::logistic, C, cfg);
  EXPECT_LT(objective(m.weights, d, Loss::logistic, C), best * 1.01);
}

TEST(Predict, TiesMapToPlusOne) {
  LinearModel m;
  m.weights.assign(4, 0.0);
  Dataset d;
  d.dim = 4;
  d.records = {{1, {{0}, {}}}, {-1, {{1}, {}}}, {1, {{2, 3}, {}}}, {-1, {{}, {}}}};
  for (const auto& ex : d.records) EXPECT_EQ(predict(m, ex.x), 1);
  EXPECT_DOUBLE_EQ(accuracy(m, d), 0.5);
}

TEST(Predict, DimensionMismatchThrows) {
  LinearModel m;
  m.weights.assign(2, 0.0);
  FeatureVector x{{5}, {}};
  EXPECT_THROW(predict(m, x), InvalidArgument);
  Dataset d;
  d.dim = 3;
  EXPECT_THROW(accuracy(m, d), InvalidArgument);
}

TEST(Gradient, MatchesFiniteDifferences) {
  SplitMixStream rng(1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = random_problem(100 + seed, 40, 10);
    LinearModel m;
    m.C = 0.5 + rng.uniform() * 2;
    m.weights.resize(10);
    for (auto& w : m.weights) w = rng.uniform() * 2 - 1;
    EXPECT_LT(logistic_gradient_check(m, d, 1e-5), 1e-6);
  }
}

TEST(Gradient, SymmetricDataAtZero) {
  Dataset d;
  d.dim = 2;
  d.records = {{1, {{0}, {}}}, {-1, {{1}, {}}}};
  const std::vector<double> zero(2, 0.0);
  const auto g = logistic_gradient(zero, d, 2.0);
  // -C y x sigma(0) = -C y x / 2 per record.
  EXPECT_DOUBLE_EQ(g[0], -1.0);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
  LinearModel m;
  m.C = 2.0;
  m.weights = zero;
  EXPECT_LT(logistic_gradient_check(m, d), 1e-6);
}

TEST(Gradient, RegularizerOnlyWhenCIsZero) {
  const Dataset d = random_problem(9, 30, 6);
  const std::vector<double> w{0.5, -1.0, 2.0, 0.0, 3.5, -0.25};
  EXPECT_EQ(logistic_gradient(w, d, 0.0), w);
}

TEST(ModelFile, RoundTripIsExact) {
  LinearModel m;
  m.loss = Loss::logistic;
  m.C = 0.1;
  m.seed = 12345678901234ULL;
  m.weights = {0.1, -1e-300, 3.141592653589793, 0.0, -2.5e17};
  std::stringstream buf;
  write_model(buf, m);
  const std::string text = buf.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "bbmh-linear-model 1");
  const LinearModel back = read_model(buf);
  EXPECT_EQ(back.loss, m.loss);
  EXPECT_EQ(back.C, m.C);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.weights, m.weights);
  std::stringstream again;
  write_model(again, back);
  EXPECT_EQ(again.str(), text);
}

TEST(ModelFile, RejectsMalformed) {
  std::stringstream bad("bbmh-linear-model 1\nloss hinge\nC 1\ndim 3\nseed 0\n1\n2\n");
  EXPECT_THROW(read_model(bad), ParseError);
  std::stringstream worse("something else\n");
  EXPECT_THROW(read_model(worse), ParseError);
  std::stringstream loss("bbmh-linear-model 1\nloss squared\nC 1\ndim 0\nseed 0\n");
  EXPECT_THROW(read_model(loss), ParseError);
}

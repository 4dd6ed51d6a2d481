#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "relex/encoder.h"
#include "test_util.h"

using namespace relex;

namespace {

FilterBank random_bank(int n_filters, int window, int depth, Rng& rng, bool zero_bias = false) {
  FilterBank bank;
  bank.window = window;
  bank.depth = depth;
  bank.weights = testutil::random_matrix(n_filters, window * depth, rng);
  bank.bias = zero_bias ? Matrix(n_filters, 1, 0.0) : testutil::random_matrix(n_filters, 1, rng);
  return bank;
}

}  // namespace

TEST_CASE("a zero filter bank maps everything to its biases") {
  Rng rng(2);
  Matrix sentence = testutil::random_matrix(5, 4, rng);
  FilterBank bank;
  bank.window = 3;
  bank.depth = 4;
  bank.weights = Matrix(2, 12, 0.0);
  bank.bias = Matrix(2, 1, 0.0);
  bank.bias(0, 0) = 0.5;
  bank.bias(1, 0) = -1.25;
  Matrix out = convolve(sentence, bank);
  for (int j = 0; j < 5; ++j) {
    CHECK(out(0, j) == 0.5);
    CHECK(out(1, j) == -1.25);
  }
}

TEST_CASE("a one-token sentence convolves against the padded window") {
  Matrix sentence(1, 2);
  sentence(0, 0) = 3.0;
  sentence(0, 1) = -2.0;
  FilterBank bank;
  bank.window = 3;
  bank.depth = 2;
  bank.weights = Matrix(1, 6, 0.0);
  for (int i = 0; i < 6; ++i) bank.weights(0, i) = static_cast<double>(i + 1);
  bank.bias = Matrix(1, 1, 0.0);
  bank.bias(0, 0) = 0.25;
  Matrix out = convolve(sentence, bank);
  REQUIRE(out.rows == 1);
  REQUIRE(out.cols == 1);
  // only the center window row overlaps the sentence: weights (3, 4)
  CHECK(out(0, 0) == 3.0 * 3.0 + 4.0 * -2.0 + 0.25);
}

TEST_CASE("convolution matches the brute-force padded oracle exactly") {
  Rng rng(7);
  Matrix sentence = testutil::random_matrix(4, 3, rng);
  FilterBank bank = random_bank(2, 3, 3, rng);
  Matrix fast = convolve(sentence, bank);
  Matrix slow = oracle::convolve(sentence, bank);
  REQUIRE(fast.rows == slow.rows);
  REQUIRE(fast.cols == slow.cols);
  CHECK(fast.data == slow.data);
}

TEST_CASE("convolution and pooling match the oracles on random shapes") {
  Rng rng(20240901);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + rng.below_int(11);       // 2..12
    const int depth = 1 + rng.below_int(5);    // 1..5
    const int n_f = 1 + rng.below_int(4);      // 1..4
    const int window = 1 + 2 * rng.below_int(3);  // 1, 3, 5
    Matrix sentence = testutil::random_matrix(k, depth, rng);
    FilterBank bank = random_bank(n_f, window, depth, rng);

    Matrix fast = convolve(sentence, bank);
    Matrix slow = oracle::convolve(sentence, bank);
    CHECK(fast.data == slow.data);

    int head = rng.below_int(k);
    int tail = rng.below_int(k - 1);
    if (tail >= head) ++tail;
    Vector pooled = piecewise_max_pool(fast, head, tail);
    CHECK(pooled == oracle::piecewise_max_pool(fast, head, tail));
  }
}

TEST_CASE("a constant map pools to the constant in every non-empty segment") {
  Matrix map(2, 6, 1.5);
  Vector pooled = piecewise_max_pool(map, 1, 3);  // all three segments non-empty
  REQUIRE(pooled.size() == 6);
  for (double v : pooled) CHECK(v == 1.5);
}

TEST_CASE("entities at the ends leave the trailing segment empty") {
  Matrix map(1, 3);
  map(0, 0) = 4.0;
  map(0, 1) = -2.0;
  map(0, 2) = 7.0;
  // segments [0,0], [1,2], and nothing after the tail entity
  Vector pooled = piecewise_max_pool(map, 0, 2);
  CHECK(pooled == Vector{4.0, 7.0, 0.0});
}

TEST_CASE("a trailing empty segment pools to zero") {
  Matrix map(1, 4, -3.0);  // all negative so 0 cannot be a real max
  PoolIndices indices;
  Vector pooled = piecewise_max_pool(map, 1, 3, &indices);
  CHECK(pooled[2] == 0.0);
  CHECK(indices.argmax[2] == -1);
  CHECK(pooled[0] == -3.0);
  CHECK(pooled[1] == -3.0);
}

TEST_CASE("entity order does not matter to the segmentation") {
  Rng rng(13);
  Matrix map = testutil::random_matrix(3, 9, rng);
  CHECK(piecewise_max_pool(map, 2, 6) == piecewise_max_pool(map, 6, 2));
}

TEST_CASE("pool argmax indices point at the maxima inside their segments") {
  Rng rng(14);
  Matrix map = testutil::random_matrix(2, 8, rng);
  PoolIndices indices;
  Vector pooled = piecewise_max_pool(map, 2, 5, &indices);
  const int lo[3] = {0, 3, 6};
  const int hi[3] = {2, 5, 7};  // inclusive
  for (int f = 0; f < 2; ++f)
    for (int s = 0; s < 3; ++s) {
      const int arg = indices.argmax[static_cast<std::size_t>(f) * 3 + s];
      REQUIRE(arg >= lo[s]);
      REQUIRE(arg <= hi[s]);
      CHECK(map(f, arg) == pooled[static_cast<std::size_t>(f) * 3 + s]);
    }
}

TEST_CASE("pooling is permutation-invariant and monotone within a segment") {
  Rng rng(15);
  Matrix map = testutil::random_matrix(1, 7, rng);
  Vector base = piecewise_max_pool(map, 2, 4);

  Matrix shuffled = map;  // swap two columns inside segment one
  std::swap(shuffled(0, 0), shuffled(0, 2));
  CHECK(piecewise_max_pool(shuffled, 2, 4) == base);

  Matrix bumped = map;  // raising any entry never lowers its segment max
  for (int j = 0; j < 7; ++j) {
    bumped(0, j) += 0.5;
    Vector after = piecewise_max_pool(bumped, 2, 4);
    for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] >= base[i]);
    bumped(0, j) = map(0, j);
  }
}

TEST_CASE("convolution is linear in the input for fixed filters") {
  Rng rng(16);
  FilterBank bank = random_bank(3, 3, 4, rng, /*zero_bias=*/true);
  Matrix x = testutil::random_matrix(6, 4, rng);
  Matrix y = testutil::random_matrix(6, 4, rng);
  const double a = 0.7, b = -1.3;
  Matrix combo(6, 4);
  for (std::size_t i = 0; i < combo.data.size(); ++i)
    combo.data[i] = a * x.data[i] + b * y.data[i];

  Matrix cx = convolve(x, bank);
  Matrix cy = convolve(y, bank);
  Matrix cc = convolve(combo, bank);
  for (std::size_t i = 0; i < cc.data.size(); ++i)
    CHECK(cc.data[i] == doctest::Approx(a * cx.data[i] + b * cy.data[i]).epsilon(1e-9));
}

TEST_CASE("the nonlinearity is tanh") {
  Vector out = sentence_feature({0.0, 1.0, -1.0, 2.5});
  CHECK(out[0] == 0.0);
  CHECK(out[1] == doctest::Approx(0.7615941559557649).epsilon(1e-15));
  CHECK(out[2] == -out[1]);
  for (double v : out) {
    CHECK(v > -1.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("mismatched filter depth and even windows are rejected") {
  Rng rng(17);
  Matrix sentence = testutil::random_matrix(4, 3, rng);
  FilterBank wrong_depth = random_bank(1, 3, 2, rng);
  CHECK_THROWS_AS(convolve(sentence, wrong_depth), std::exception);
  FilterBank even = random_bank(1, 4, 3, rng);
  CHECK_THROWS_AS(convolve(sentence, even), std::exception);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "twodos/channel.hpp"
#include "twodos/experiment.hpp"

using namespace twodos;

namespace {

// Page with the given central bit and exactly n ones among the neighbors of
// pos, zeros elsewhere.
BitPage configuration(PageDims dims, Cell pos, int central, int ones) {
  BitPage page(dims.rows, dims.cols);
  page.set(pos, static_cast<std::uint8_t>(central));
  const HexNeighborhood hood = hex_neighbors(pos, dims);
  REQUIRE(hood.count >= ones);
  for (int j = 0; j < ones; ++j) page.set(hood.neighbors[j], 1);
  return page;
}

}  // namespace

TEST_CASE("hex neighborhood counts") {
  const PageDims dims{10, 10};
  CHECK(hex_neighbors({5, 5}, dims).count == 6);
  // Even-row corner keeps only east and south-east.
  const HexNeighborhood corner = hex_neighbors({0, 0}, dims);
  CHECK(corner.count == 2);
  for (const Cell& c : corner) CHECK(dims.contains(c));
  CHECK_THROWS_AS((void)hex_neighbors({10, 0}, dims), std::out_of_range);
  CHECK_THROWS_AS((void)hex_neighbors({0, -1}, dims), std::out_of_range);
}

TEST_CASE("hex neighborhood is symmetric and duplicate-free on a 6x6 page") {
  const PageDims dims{6, 6};
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      const HexNeighborhood hood = hex_neighbors({r, c}, dims);
      std::set<std::pair<int, int>> seen;
      for (const Cell& nb : hood) {
        CHECK(dims.contains(nb));
        CHECK(!(nb == Cell{r, c}));
        CHECK(seen.insert({nb.row, nb.col}).second);
        // Symmetry: the reverse membership must hold.
        const HexNeighborhood back = hex_neighbors(nb, dims);
        bool found = false;
        for (const Cell& bb : back) found = found || (bb == Cell{r, c});
        CHECK(found);
      }
    }
  }
}

TEST_CASE("noiseless intensity reproduces the 14 signal levels exactly") {
  const SignalLevelTable& table = SignalLevelTable::nominal();
  const PageDims dims{10, 10};
  const Cell pos{5, 5};
  for (int central = 0; central < 2; ++central) {
    for (int ones = 0; ones <= 6; ++ones) {
      const BitPage page = configuration(dims, pos, central, ones);
      CHECK(noiseless_intensity(page, pos, table) ==
            table.level(ones, central));
    }
  }
  // The all-zero and all-one limits from the table's corners.
  BitPage zeros(10, 10);
  CHECK(noiseless_intensity(zeros, pos, table) == 0.95);
  BitPage ones_page(10, 10);
  for (auto& b : ones_page.bits()) b = 1;
  CHECK(noiseless_intensity(ones_page, pos, table) == 0.05);
  // A single one read at itself and at a neighbor.
  BitPage single(10, 10);
  single.set(pos, 1);
  CHECK(noiseless_intensity(single, pos, table) == 0.50);
  for (const Cell& nb : hex_neighbors(pos, dims)) {
    CHECK(noiseless_intensity(single, nb, table) == 0.80);
  }
}

TEST_CASE("intensity depends only on the closed neighborhood") {
  const SignalLevelTable& table = SignalLevelTable::nominal();
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    BitPage page = BitPage::random(8, 8, rng);
    const Cell pos{static_cast<int>(rng.below(8)),
                   static_cast<int>(rng.below(8))};
    const double before = noiseless_intensity(page, pos, table);
    // Flip a cell outside the closed neighborhood.
    for (int k = 0; k < 20; ++k) {
      const Cell other{static_cast<int>(rng.below(8)),
                       static_cast<int>(rng.below(8))};
      bool inside = other == pos;
      for (const Cell& nb : hex_neighbors(pos, page.dims())) {
        inside = inside || (nb == other);
      }
      if (inside) continue;
      page.set(other, 1 - page.get(other));
      CHECK(noiseless_intensity(page, pos, table) == before);
    }
    // And intensity always lies in the 14-level set.
    bool member = false;
    for (int n = 0; n < 7; ++n) {
      for (int b = 0; b < 2; ++b) member = member || before == table.level(n, b);
    }
    CHECK(member);
  }
}

TEST_CASE("readback determinism and the noiseless flag") {
  const SignalLevelTable& table = SignalLevelTable::nominal();
  Rng rng(7);
  const BitPage page = BitPage::random(16, 16, rng);

  const ReadbackPage quiet = readback(page, table, NoiseModel::exact());
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      CHECK(quiet.get(r, c) == noiseless_intensity(page, {r, c}, table));
    }
  }

  const NoiseModel noise(0.01, 99);
  const ReadbackPage a = readback(page, table, noise);
  const ReadbackPage b = readback(page, table, noise);
  CHECK(a.values == b.values);
  const ReadbackPage c = readback(page, table, NoiseModel(0.01, 100));
  CHECK(a.values != c.values);
}

TEST_CASE("readback noise has the right mean over a large page") {
  const SignalLevelTable& table = SignalLevelTable::nominal();
  const BitPage page(512, 512);
  const double sigma2 = 0.01;
  const ReadbackPage rb = readback(page, table, NoiseModel(sigma2, 4242));
  double sum = 0.0;
  for (int r = 0; r < 512; ++r) {
    for (int c = 0; c < 512; ++c) {
      sum += rb.get(r, c) - noiseless_intensity(page, {r, c}, table);
    }
  }
  const double mean = sum / (512.0 * 512.0);
  CHECK(std::fabs(mean) <= 3.0 * std::sqrt(sigma2 / (512.0 * 512.0)));
}

TEST_CASE("snr definition matches the noise-tolerance table") {
  const SignalLevelTable& table = SignalLevelTable::nominal();
  CHECK(table.energy_sum() == doctest::Approx(25.5125).epsilon(1e-12));
  CHECK(snr_db(0.0018, 1.0, table) == doctest::Approx(17.43).epsilon(0.003));
  CHECK(snr_db(0.0215, 1.0, table) == doctest::Approx(6.66).epsilon(0.003));
  // Rate enters as a pure log offset.
  CHECK(snr_db(0.0215, 0.5, table) ==
        doctest::Approx(snr_db(0.0215, 1.0, table) + 10.0 * std::log10(2.0))
            .epsilon(1e-12));
  CHECK_THROWS_AS((void)snr_db(0.0, 1.0, table), std::invalid_argument);
  CHECK_THROWS_AS((void)snr_db(0.01, 0.0, table), std::invalid_argument);
  CHECK_THROWS_AS((void)snr_db(0.01, 1.5, table), std::invalid_argument);
}

TEST_CASE("sigma2 and snr are inverse maps") {
  const SignalLevelTable& table = SignalLevelTable::nominal();
  const double s2 = sigma2_from_snr_db(10.0, 0.9, table);
  CHECK(snr_db(s2, 0.9, table) == doctest::Approx(10.0).epsilon(1e-10));
  CHECK(sigma2_from_snr_db(17.4342, 1.0, table) ==
        doctest::Approx(0.0018).epsilon(0.001));
  // Strictly decreasing in sigma2.
  CHECK(snr_db(0.002, 1.0, table) > snr_db(0.003, 1.0, table));
}

TEST_CASE("signal table file round trip and validation") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "twodos_table_test";
  fs::create_directories(dir);
  const std::string path = (dir / "levels.txt").string();

  SignalLevelTable::nominal().to_file(path);
  const SignalLevelTable loaded = SignalLevelTable::from_file(path);
  for (int n = 0; n < 7; ++n) {
    for (int b = 0; b < 2; ++b) {
      CHECK(loaded.level(n, b) == SignalLevelTable::nominal().level(n, b));
    }
  }

  {
    std::ofstream out(path);
    out << "0 0.95 0.50\n1 0.80 0.35\n";  // missing rows
  }
  CHECK_THROWS_AS((void)SignalLevelTable::from_file(path), std::runtime_error);

  {
    std::ofstream out(path);
    // Non-monotone: n=1 exceeds n=0 in the central-0 column.
    out << "0 0.95 0.50\n1 0.99 0.35\n2 0.70 0.30\n3 0.55 0.20\n"
           "4 0.45 0.15\n5 0.35 0.10\n6 0.25 0.05\n";
  }
  CHECK_THROWS((void)SignalLevelTable::from_file(path));

  fs::remove_all(dir);
}

TEST_CASE("bit page basics") {
  CHECK_THROWS_AS(BitPage(0, 5), std::invalid_argument);
  CHECK_THROWS_AS((void)NoiseModel(0.0, 1), std::invalid_argument);
  Rng rng(1);
  const BitPage page = BitPage::random(9, 13, rng);
  int ones = 0;
  for (auto b : page.bits()) {
    CHECK((b == 0 || b == 1));
    ones += b;
  }
  CHECK(ones > 20);
  CHECK(ones < 9 * 13 - 20);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "support/reference.hpp"
#include "twodos/alist.hpp"
#include "twodos/ldpc.hpp"
#include "twodos/page_mapping.hpp"
#include "twodos/rng.hpp"

using namespace twodos;

TEST_CASE("regular construction: degrees, rate, 4-cycle freedom") {
  const ParityCheckMatrix H = generate_regular({3, 6, 1200, 1});
  CHECK(H.n() == 1200);
  CHECK(H.m() == 600);
  for (int i = 0; i < H.m(); ++i) CHECK(H.row(i).size() == 6);
  for (int j = 0; j < H.n(); ++j) CHECK(H.col(j).size() == 3);
  CHECK(twodos::testing::four_cycle_free(H));

  const ParityCheckMatrix H2 = generate_regular({3, 30, 3000, 2});
  CHECK(H2.m() == 300);
  CHECK(CodeParams{3, 30, 3000, 2}.design_rate() == doctest::Approx(0.9));
  CHECK(twodos::testing::four_cycle_free(H2));
}

TEST_CASE("construction is deterministic in the seed") {
  const ParityCheckMatrix a = generate_regular({3, 6, 600, 17});
  const ParityCheckMatrix b = generate_regular({3, 6, 600, 17});
  CHECK(a.rows() == b.rows());
  const ParityCheckMatrix c = generate_regular({3, 6, 600, 18});
  CHECK(a.rows() != c.rows());
}

TEST_CASE("code parameter validation") {
  CHECK_THROWS_AS(generate_regular({1, 6, 600, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_regular({3, 3, 600, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_regular({3, 7, 600, 1}), std::invalid_argument);
}

TEST_CASE("encoder: zero word, syndrome, systematic round trip") {
  const ParityCheckMatrix H = generate_regular({3, 6, 120, 3});
  const Encoder enc = make_encoder(H);
  CHECK(enc.n() == 120);
  CHECK(enc.k() == 120 - enc.rank());
  CHECK(enc.rank() <= 60);

  const std::vector<std::uint8_t> zero(enc.k(), 0);
  const auto zero_cw = enc.encode(zero);
  for (auto b : zero_cw) CHECK(b == 0);

  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::uint8_t> msg(enc.k());
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng.bit());
    const auto cw = enc.encode(msg);
    const auto syn = syndrome(H, cw);
    for (auto s : syn) CHECK(s == 0);
    CHECK(enc.extract_message(cw) == msg);
  }
}

TEST_CASE("single bit flip produces dv syndrome failures") {
  const ParityCheckMatrix H = generate_regular({3, 6, 120, 3});
  const Encoder enc = make_encoder(H);
  Rng rng(6);
  std::vector<std::uint8_t> msg(enc.k());
  for (auto& b : msg) b = static_cast<std::uint8_t>(rng.bit());
  auto cw = enc.encode(msg);
  const int flip = static_cast<int>(rng.below(cw.size()));
  cw[flip] ^= 1;
  const auto syn = syndrome(H, cw);
  int weight = 0;
  for (auto s : syn) weight += s;
  CHECK(weight == 3);
  CHECK_THROWS_AS(
      (void)syndrome(H, std::vector<std::uint8_t>(119, 0)),
      std::invalid_argument);
}

TEST_CASE("page mapping is a row-major bijection") {
  CHECK(PageMapping::near_square_dims(10000) == std::pair<int, int>{100, 100});
  CHECK(PageMapping::near_square_dims(1200) == std::pair<int, int>{30, 40});
  const PageMapping map = PageMapping::row_major(10000, 100, 100);
  CHECK(map.cell_of(0) == Cell{0, 0});
  CHECK(map.cell_of(100) == Cell{1, 0});
  for (int i = 0; i < 10000; i += 97) {
    CHECK(map.index_of(map.cell_of(i)) == i);
  }
  CHECK_THROWS_AS((void)PageMapping::row_major(10000, 99, 100),
                  std::invalid_argument);
}

TEST_CASE("alist round trip preserves the matrix") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "twodos_alist_test";
  fs::create_directories(dir);
  const std::string path = (dir / "h.alist").string();

  const ParityCheckMatrix H = generate_regular({3, 6, 120, 3});
  write_alist(H, path);

  // Header carries n m, then the maximum degrees.
  std::ifstream in(path);
  int n = 0, m = 0, maxc = 0, maxr = 0;
  in >> n >> m >> maxc >> maxr;
  CHECK(n == 120);
  CHECK(m == 60);
  CHECK(maxc == 3);
  CHECK(maxr == 6);
  in.close();

  const ParityCheckMatrix back = read_alist(path);
  CHECK(back.n() == H.n());
  CHECK(back.m() == H.m());
  CHECK(back.rows() == H.rows());
  fs::remove_all(dir);
}

TEST_CASE("alist parser rejects malformed input") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "twodos_alist_bad";
  fs::create_directories(dir);
  const std::string path = (dir / "bad.alist").string();

  auto write_file = [&](const std::string& text) {
    std::ofstream out(path);
    out << text;
  };

  write_file("4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n");  // truncated rows
  CHECK_THROWS_AS((void)read_alist(path), AlistParseError);

  write_file("4 2\n1 2\n1 1 1 1\n2 2\n1\n1\n2\n2\n1 2\n9 4\n");  // bad index
  CHECK_THROWS_AS((void)read_alist(path), AlistParseError);

  write_file("");  // empty
  CHECK_THROWS_AS((void)read_alist(path), AlistParseError);

  // Row section inconsistent with the column section.
  write_file("2 1\n1 2\n1 1\n2\n1\n1\n1 1\n");
  CHECK_THROWS_AS((void)read_alist(path), AlistParseError);

  fs::remove_all(dir);
}

TEST_CASE("rank-deficient matrices are tolerated") {
  // Duplicate rows force rank < m.
  std::vector<std::vector<int>> rows = {{0, 1, 2}, {0, 1, 2}, {1, 2, 3}};
  const ParityCheckMatrix H(4, 3, std::move(rows));
  const Encoder enc = make_encoder(H);
  CHECK(enc.rank() == 2);
  CHECK(enc.k() == 2);
  Rng rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<std::uint8_t> msg(enc.k());
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng.bit());
    const auto cw = enc.encode(msg);
    for (auto s : syndrome(H, cw)) CHECK(s == 0);
    CHECK(enc.extract_message(cw) == msg);
  }
}

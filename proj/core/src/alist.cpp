#include "twodos/alist.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

namespace twodos {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in, const std::string& path)
      : in_(in), path_(path) {}

  // Next non-blank line as a token stream.
  std::vector<long> next_numbers() {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      std::istringstream fields(line);
      std::vector<long> out;
      long v;
      while (fields >> v) out.push_back(v);
      std::string trailing;
      if (fields.clear(), fields >> trailing; !trailing.empty()) {
        fail("non-numeric token '" + trailing + "'");
      }
      if (!out.empty()) return out;
    }
    fail("unexpected end of file");
    return {};
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw AlistParseError(path_ + ":" + std::to_string(lineno_) + ": " + what);
  }

  int lineno() const { return lineno_; }

 private:
  std::istream& in_;
  std::string path_;
  int lineno_ = 0;
};

// A degree-d entry line: exactly d nonzero indices, optionally padded with
// zeros (the classic fixed-width alist layout).
std::vector<int> entry_line(LineReader& reader, int degree, long max_index) {
  const std::vector<long> nums = reader.next_numbers();
  std::vector<int> out;
  bool padding = false;
  for (long v : nums) {
    if (v == 0) {
      padding = true;
      continue;
    }
    if (padding) reader.fail("nonzero index after zero padding");
    if (v < 1 || v > max_index) {
      reader.fail("index " + std::to_string(v) + " out of range [1, " +
                  std::to_string(max_index) + "]");
    }
    out.push_back(static_cast<int>(v - 1));
  }
  if (static_cast<int>(out.size()) != degree) {
    reader.fail("expected " + std::to_string(degree) + " indices, found " +
                std::to_string(out.size()));
  }
  return out;
}

}  // namespace

ParityCheckMatrix read_alist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw AlistParseError(path + ": cannot open for reading");
  LineReader reader(in, path);

  const std::vector<long> header = reader.next_numbers();
  if (header.size() != 2 || header[0] < 1 || header[1] < 0) {
    reader.fail("expected header \"n m\"");
  }
  const int n = static_cast<int>(header[0]);
  const int m = static_cast<int>(header[1]);

  const std::vector<long> maxdeg = reader.next_numbers();
  if (maxdeg.size() != 2 || maxdeg[0] < 0 || maxdeg[1] < 0) {
    reader.fail("expected \"max_col_degree max_row_degree\"");
  }

  const std::vector<long> col_degs = reader.next_numbers();
  if (static_cast<int>(col_degs.size()) != n) {
    reader.fail("expected " + std::to_string(n) + " column degrees");
  }
  const std::vector<long> row_degs = reader.next_numbers();
  if (static_cast<int>(row_degs.size()) != m) {
    reader.fail("expected " + std::to_string(m) + " row degrees");
  }
  for (long d : col_degs) {
    if (d < 0 || d > maxdeg[0]) reader.fail("column degree out of range");
  }
  for (long d : row_degs) {
    if (d < 0 || d > maxdeg[1]) reader.fail("row degree out of range");
  }

  // Column section is authoritative; the row section is verified against it.
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
  for (int j = 0; j < n; ++j) {
    const std::vector<int> col_rows =
        entry_line(reader, static_cast<int>(col_degs[j]), m);
    for (int i : col_rows) rows[i].push_back(j);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<int> row_cols =
        entry_line(reader, static_cast<int>(row_degs[i]), n);
    std::sort(row_cols.begin(), row_cols.end());
    std::vector<int> expected = rows[i];
    std::sort(expected.begin(), expected.end());
    if (row_cols != expected) {
      reader.fail("row " + std::to_string(i + 1) +
                  " disagrees with the column section");
    }
  }
  return ParityCheckMatrix(n, m, std::move(rows));
}

void write_alist(const ParityCheckMatrix& H, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");

  std::size_t max_col = 0, max_row = 0;
  for (int j = 0; j < H.n(); ++j) max_col = std::max(max_col, H.col(j).size());
  for (int i = 0; i < H.m(); ++i) max_row = std::max(max_row, H.row(i).size());

  out << H.n() << ' ' << H.m() << '\n';
  out << max_col << ' ' << max_row << '\n';
  for (int j = 0; j < H.n(); ++j) {
    out << H.col(j).size() << (j + 1 < H.n() ? ' ' : '\n');
  }
  for (int i = 0; i < H.m(); ++i) {
    out << H.row(i).size() << (i + 1 < H.m() ? ' ' : '\n');
  }
  auto write_entries = [&](const std::vector<int>& entries, std::size_t pad) {
    for (std::size_t t = 0; t < pad; ++t) {
      const long v = t < entries.size() ? entries[t] + 1 : 0;
      out << v << (t + 1 < pad ? ' ' : '\n');
    }
  };
  for (int j = 0; j < H.n(); ++j) write_entries(H.col(j), max_col);
  for (int i = 0; i < H.m(); ++i) write_entries(H.row(i), max_row);
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace twodos

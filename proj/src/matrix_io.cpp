#include "tibpalm/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "tibpalm/errors.hpp"

namespace tibpalm {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(pos, end - pos);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);

    std::size_t first = row.find_first_not_of(" \t");
    if (first != std::string_view::npos && row[first] != '#') {
      std::size_t i = first;
      while (i < row.size()) {
        if (row[i] == ' ' || row[i] == '\t') {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < row.size() && row[j] != ' ' && row[j] != '\t') ++j;
        tokens.push_back({row.substr(i, j - i), line, i + 1});
        i = j;
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
    ++line;
  }
  return tokens;
}

double parse_value(const Token& t) {
  double v = 0.0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  // from_chars does not accept a leading '+'.
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e)
    throw ParseError("non-numeric token '" + std::string(t.text) + "'", t.line, t.column);
  if (!std::isfinite(v))
    throw ParseError("non-finite value '" + std::string(t.text) + "'", t.line, t.column);
  return v;
}

Index parse_extent(const Token& t) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size() || v < 1)
    throw ParseError("malformed header token '" + std::string(t.text) + "'", t.line, t.column);
  return static_cast<Index>(v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Matrix parse_matrix(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.size() < 2) {
    const std::size_t line = tokens.empty() ? 1 : tokens.front().line;
    throw ParseError("missing '<rows> <cols>' header", line, 1);
  }
  if (tokens[0].line != tokens[1].line)
    throw ParseError("header must hold rows and cols on one line", tokens[0].line,
                     tokens[0].column);
  const Index rows = parse_extent(tokens[0]);
  const Index cols = parse_extent(tokens[1]);
  const std::size_t expected = static_cast<std::size_t>(rows * cols);
  const std::size_t got = tokens.size() - 2;
  if (got != expected) {
    const Token& at = got > expected ? tokens[2 + expected] : tokens.back();
    throw ParseError("expected " + std::to_string(expected) + " values, found " +
                         std::to_string(got),
                     at.line, at.column);
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = parse_value(tokens[2 + i * cols + j]);
  return m;
}

std::string format_matrix(const Matrix& m) {
  if (!m.allFinite()) throw InputError("format_matrix: non-finite entry");
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open matrix file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  const std::string text = format_matrix(m);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write matrix file " + path.string());
  out << text;
}

}  // namespace tibpalm

#include "genlasso/matrix_io.hpp"

#include "genlasso/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace genlasso {
namespace {

[[noreturn]] void parse_error(const std::string& origin, int line, const std::string& msg) {
  throw InputError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

double parse_double(const std::string& tok, const std::string& origin, int line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) parse_error(origin, line, "non-numeric token '" + tok + "'");
  return v;
}

long parse_dim(const std::string& tok, const std::string& origin) {
  long v = -1;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) {
    parse_error(origin, 1, "bad dimension '" + tok + "'");
  }
  return v;
}

}  // namespace

Matrix parse_matrix(std::istream& in, const std::string& origin) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> head;
  while (head.empty() && std::getline(in, line)) {
    ++lineno;
    head = tokens(line);
  }
  if (head.size() != 2) parse_error(origin, lineno, "expected header 'rows cols'");
  const long rows = parse_dim(head[0], origin);
  const long cols = parse_dim(head[1], origin);
  Matrix a(rows, cols);
  long r = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokens(line);
    if (toks.empty()) continue;
    if (r == rows) parse_error(origin, lineno, "more rows than the header declares");
    if (static_cast<long>(toks.size()) != cols) {
      parse_error(origin, lineno, "expected " + std::to_string(cols) + " values, found " +
                                      std::to_string(toks.size()));
    }
    for (long c = 0; c < cols; ++c) a(r, c) = parse_double(toks[c], origin, lineno);
    ++r;
  }
  if (r != rows) {
    parse_error(origin, lineno, "expected " + std::to_string(rows) + " rows, found " + std::to_string(r));
  }
  return a;
}

Matrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_matrix(in, path);
}

Vector read_vector(const std::string& path) {
  const Matrix a = read_matrix(path);
  if (a.cols() == 1) return a.col(0);
  if (a.rows() == 1) return a.row(0).transpose();
  throw InputError(path + ": expected a single row or column, got " + std::to_string(a.rows()) +
                   "x" + std::to_string(a.cols()));
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_matrix(out, a);
  if (!out) throw InputError("write failed for '" + path + "'");
}

void write_vector(const std::string& path, const Vector& v) { write_matrix(path, Matrix(v)); }

}  // namespace genlasso

#include "univdyn/rational.hpp"

#include <cctype>
#include <sstream>

#include "univdyn/error.hpp"

namespace univdyn {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  std::string_view num = trim(s.substr(0, slash));
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : trim(s.substr(slash + 1));
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  }
  std::string n(num.front() == '+' ? num.substr(1) : num);
  Integer p(n, 10);
  Integer q(std::string(den), 10);
  if (q == 0) throw Error(ErrorCode::ParseError, "zero denominator: '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational pow2_neg(std::size_t n) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, n);
  return Rational(Integer(1), den);
}

Rational pow(const Rational& base, std::size_t exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational frac(const Rational& q) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return q - Rational(fl);
}

Matrix parse_matrix(std::string_view text) {
  std::string s(trim(text));
  Matrix m;
  if (!s.empty() && s.front() == '[') {
    // [[a,b],[c,d]]
    std::size_t depth = 0;
    std::string cell;
    std::vector<Rational> row;
    for (char c : s) {
      if (c == '[') {
        ++depth;
        if (depth > 2) throw Error(ErrorCode::ParseError, "matrix nesting too deep");
        if (depth == 2) row.clear();
        cell.clear();
      } else if (c == ']') {
        if (depth == 0) throw Error(ErrorCode::ParseError, "unbalanced ']'");
        if (depth == 2) {
          if (!trim(cell).empty()) row.push_back(parse_rational(cell));
          m.push_back(row);
        }
        cell.clear();
        --depth;
      } else if (c == ',') {
        if (depth == 2) {
          row.push_back(parse_rational(cell));
          cell.clear();
        }
      } else if (depth == 2) {
        cell.push_back(c);
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        throw Error(ErrorCode::ParseError, "unexpected character in matrix");
      }
    }
    if (depth != 0) throw Error(ErrorCode::ParseError, "unbalanced '['");
  } else {
    std::stringstream rows(s);
    std::string line;
    while (std::getline(rows, line, ';')) {
      std::stringstream cells(line);
      std::string tok;
      std::vector<Rational> row;
      while (cells >> tok) row.push_back(parse_rational(tok));
      if (!row.empty()) m.push_back(row);
    }
  }
  if (m.empty()) throw Error(ErrorCode::ParseError, "empty matrix");
  for (const auto& row : m) {
    if (row.size() != m.size()) throw Error(ErrorCode::ParseError, "matrix must be square");
  }
  return m;
}

std::string to_string(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

std::string to_string(const Matrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ",";
    out += "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) out += ",";
      out += to_string(m[i][j]);
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace univdyn

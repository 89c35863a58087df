#pragma once

// Matrix dump format (text, one matrix row per line):
//
//   # rows=<n> cols=<n> internal_dim=<d> floquet_copies=<k>
//   re+imj,re+imj,...
//
// Entries use 17 significant digits, so load(dump(A)) == A bit for bit.

#include <exactfw/blockop.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace exactfw {

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_complex(Complex z) {
  std::string out = format_real(z.real());
  if (std::signbit(z.imag()))
    out += "-" + format_real(-z.imag());
  else
    out += "+" + format_real(z.imag());
  return out + "j";
}

inline double parse_real(const std::string &text) {
  if (text.empty())
    throw Error(ErrorKind::Io, "empty number");
  char *end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw Error(ErrorKind::Io, "malformed number '" + text + "'");
  return value;
}

inline Complex parse_complex(const std::string &text) {
  if (text.size() < 2 || text.back() != 'j')
    throw Error(ErrorKind::Io, "malformed complex entry '" + text + "'");
  // The separator is the last sign that does not belong to an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = text.size() - 1; i > 0; --i) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos)
    throw Error(ErrorKind::Io, "malformed complex entry '" + text + "'");
  const double re = parse_real(text.substr(0, split));
  const double im = parse_real(text.substr(split, text.size() - split - 1));
  return {re, im};
}

inline void dump_matrix(const BlockOperator &a, std::ostream &out) {
  out << "# rows=" << a.side() << " cols=" << a.side()
      << " internal_dim=" << a.shape().internal_dim << " floquet_copies=" << a.shape().copies
      << "\n";
  for (Eigen::Index r = 0; r < a.matrix().rows(); ++r) {
    for (Eigen::Index c = 0; c < a.matrix().cols(); ++c) {
      if (c)
        out << ',';
      out << format_complex(a.matrix()(r, c));
    }
    out << "\n";
  }
}

inline void dump_matrix(const BlockOperator &a, const std::string &path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  dump_matrix(a, out);
  out.flush();
  if (!out)
    throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

inline BlockOperator load_matrix(std::istream &in) {
  std::string header;
  if (!std::getline(in, header))
    throw Error(ErrorKind::Io, "missing header");
  int rows = 0, cols = 0, internal_dim = 0, copies = 0;
  if (std::sscanf(header.c_str(), "# rows=%d cols=%d internal_dim=%d floquet_copies=%d", &rows,
                  &cols, &internal_dim, &copies) != 4)
    throw Error(ErrorKind::Io, "malformed header '" + header + "'");
  if (rows != cols || rows < 0)
    throw Error(ErrorKind::Io, "matrix must be square");
  Matrix m(rows, cols);
  std::string line;
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      throw Error(ErrorKind::Io, "expected " + std::to_string(rows) + " rows");
    std::stringstream ss(line);
    std::string cell;
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= cols)
        throw Error(ErrorKind::Io, "too many entries in row " + std::to_string(r));
      m(r, c++) = parse_complex(cell);
    }
    if (c != cols)
      throw Error(ErrorKind::Io, "too few entries in row " + std::to_string(r));
  }
  try {
    return {std::move(m), BlockShape{internal_dim, copies}};
  } catch (const Error &e) {
    throw Error(ErrorKind::Io, e.what());
  }
}

inline BlockOperator load_matrix(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  return load_matrix(in);
}

} // namespace exactfw

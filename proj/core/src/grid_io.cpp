#include "bmstab/grid_io.hpp"

#include <fstream>
#include <sstream>

#include "bmstab/error.hpp"

namespace bmstab {

namespace {

std::int64_t parse_i64(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad integer '" + tok + "'");
  }
}

}  // namespace

void write_bmgrid(std::ostream& out, const GridSet2D& s) {
  const LatticeSpec& l = s.lattice();
  out << "BMGRID 1\n" << to_string(l.hx, true) << ' ' << to_string(l.hy, true) << ' ' << l.q << '\n';
  for (const auto& [j, runs] : s.rows()) {
    out << j << ':';
    for (const Run& r : runs) out << ' ' << r.begin << ".." << r.end;
    out << '\n';
  }
}

GridSet2D read_bmgrid(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  if (!next() || line != "BMGRID 1") throw Error(ErrorCode::ParseError, "missing 'BMGRID 1' header");
  if (!next()) throw Error(ErrorCode::ParseError, "missing lattice line");
  std::istringstream head(line);
  std::string hx, hy, q;
  if (!(head >> hx >> hy >> q)) throw Error(ErrorCode::ParseError, "lattice line needs 'hx hy q'");
  LatticeSpec lattice(parse_rational(hx), parse_rational(hy), parse_i64(q, lineno));

  GridSet2D::Rows rows;
  std::int64_t last_row = 0;
  bool have_row = false;
  while (next()) {
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 'row: runs'");
    std::string rowtok = line.substr(0, colon);
    rowtok.erase(0, rowtok.find_first_not_of(" \t"));
    rowtok.erase(rowtok.find_last_not_of(" \t") + 1);
    std::int64_t j = parse_i64(rowtok, lineno);
    if (have_row && j <= last_row)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": rows must ascend");
    have_row = true;
    last_row = j;
    std::istringstream body(line.substr(colon + 1));
    std::string tok;
    auto& runs = rows[j];
    while (body >> tok) {
      auto dots = tok.find("..");
      if (dots == std::string::npos)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad run '" + tok + "'");
      Run r{parse_i64(tok.substr(0, dots), lineno), parse_i64(tok.substr(dots + 2), lineno)};
      if (r.end <= r.begin)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": empty run '" + tok + "'");
      runs.push_back(r);
    }
  }
  return GridSet2D(lattice, std::move(rows));
}

std::string to_bmgrid(const GridSet2D& s) {
  std::ostringstream out;
  write_bmgrid(out, s);
  return out.str();
}

GridSet2D from_bmgrid(const std::string& text) {
  std::istringstream in(text);
  return read_bmgrid(in);
}

void save_bmgrid(const std::string& path, const GridSet2D& s) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_bmgrid(out, s);
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

GridSet2D load_bmgrid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_bmgrid(in);
}

}  // namespace bmstab

#pragma once

#include <iosfwd>
#include <string>

#include "bmstab/lattice.hpp"

namespace bmstab {

// BMGRID v1:
//   BMGRID 1
//   <hx as p/q> <hy as p/q> <q>
//   <row>: <begin>..<end> <begin>..<end> ...     (rows ascending, runs half-open)
void write_bmgrid(std::ostream& out, const GridSet2D& s);
GridSet2D read_bmgrid(std::istream& in);

std::string to_bmgrid(const GridSet2D& s);
GridSet2D from_bmgrid(const std::string& text);

void save_bmgrid(const std::string& path, const GridSet2D& s);
GridSet2D load_bmgrid(const std::string& path);

}  // namespace bmstab

#ifndef GRAPHON_LDP_IO_H_
#define GRAPHON_LDP_IO_H_

#include <iosfwd>
#include <string>

#include "graphon_ldp/graphon.h"

namespace graphon_ldp {

// Graphon matrix file:
//   line 1        m
//   lines 2..m+1  m whitespace-separated decimal values per row
// Asymmetry up to 1e-12 is repaired by averaging; larger asymmetry is a
// kParse error.
Graphon ReadGraphon(std::istream& in);
Graphon ReadGraphonFile(const std::string& path);
void WriteGraphon(std::ostream& out, const Graphon& h);

// Graph file:
//   line 1           n
//   following lines  "u v", 1-based, one edge per line
void WriteGraph(std::ostream& out, const Graph& g);
Graph ReadGraph(std::istream& in);
Graph ReadGraphFile(const std::string& path);

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_IO_H_

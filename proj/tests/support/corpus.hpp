#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "termflow/dsl.hpp"

namespace corpus {

inline std::string path(const std::string& name) { return std::string(TERMFLOW_CORPUS_DIR) + "/" + name; }

inline std::string text(const std::string& name) {
  std::ifstream in(path(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline termflow::DispersionSpec dispersion(const std::string& name) {
  return termflow::parse_dispersion(text(name));
}
inline termflow::TermSystem system(const std::string& name) { return termflow::parse_system(text(name)); }
inline termflow::DependencyGraph graph(const std::string& name) { return termflow::parse_graph(text(name)); }

}  // namespace corpus

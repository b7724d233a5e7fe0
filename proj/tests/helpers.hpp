#pragma once

#include <string>
#include <vector>

#include "gpe/gpe.hpp"

inline std::string fixture(const std::string& name) {
  return std::string(GPE_FIXTURE_DIR) + "/" + name;
}

// The worked 8-vertex example used throughout the tests, built in code so
// graph tests do not depend on the io module.
inline gpe::Graph example1_graph() {
  gpe::GraphBuilder b(8, false);
  b.add_edge(0, 1).add_edge(0, 2).add_edge(1, 2).add_edge(2, 3).add_edge(2, 4);
  b.add_edge(3, 5).add_edge(4, 5).add_edge(5, 6).add_edge(6, 7);
  return b.build();
}

inline std::vector<double> example1_signal() {
  return {-1.0, -2.3, 0.0, -3.0, 1.0, 5.0, 1.0, -1.1};
}

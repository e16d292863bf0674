#ifndef BIHGAP_BIHGAP_HPP
#define BIHGAP_BIHGAP_HPP

// Umbrella header: the whole library in one include.

#include "bihgap/rational.hpp"
#include "bihgap/core_geometry.hpp"
#include "bihgap/gap_analysis.hpp"
#include "bihgap/product_solver.hpp"
#include "bihgap/fd_oracle.hpp"
#include "bihgap/io.hpp"

#endif  // BIHGAP_BIHGAP_HPP

#ifndef RCD_DEMO_HPP
#define RCD_DEMO_HPP

#include "rcd/serde.hpp"

namespace rcd::demo {

/// The two standard 40-agent setups: a common DC level in integrated
/// ARMA(1,1) noise on an Erdos-Renyi graph with Laplacian averaging weights.
/// Both share one recorded coefficient stream; the decay demo pins agent 3's
/// moving-average coefficient to 1 (a unit-circle pole), the floor demo
/// redraws it inside the unit interval. Seeds are fixed so every tool and
/// test sees byte-identical setups.
ConfigDocument regime_a_document();  // sigma = 10, exponential decay
ConfigDocument regime_b_document();  // sigma = 5, positive error floors

std::uint64_t graph_seed();
std::uint64_t coefficient_seed();

}  // namespace rcd::demo

#endif  // RCD_DEMO_HPP

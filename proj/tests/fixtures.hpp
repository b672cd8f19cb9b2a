#pragma once

// Hand-pinned instances shared between tests. The expected values asserted
// against them were produced by tests/oracles/oracle.py, which evaluates the
// same formulas independently of the library.

#include <string>

#include "relaysim/channel.hpp"
#include "relaysim/config_io.hpp"
#include "relaysim/topology.hpp"

namespace fixtures {

// All fixed instances pin their own channel so defaults can move freely.
inline relaysim::ChannelConfig fi_channel() {
    relaysim::ChannelConfig cc;
    cc.carrier_freq_mhz = 3500.0;
    cc.reference_dist_m = 100.0;
    cc.terrain = relaysim::Terrain::B;
    cc.noise_density_dbm_per_hz = -168.0;
    cc.shadowing_enabled = false;
    return cc;
}

// FI-1: three MSs sharing one relay; exercises coupled interference.
inline relaysim::Topology fi1_topology() {
    return relaysim::parse_topology(R"(
[stations]
station = 0 bs 0 0 30 10 1000
station = 1 ntrs 600 0 10 12 1000
station = 2 ms 1200 0 2 6 1000
station = 3 ms 600 800 2 4 1000
station = 4 ms 600 -500 2 8 1000
[links]
link = 1 0 1e7
link = 2 0 4e6
link = 2 1 5e6
link = 3 0 7e6
link = 3 1 6e6
link = 4 0 9e6
link = 4 1 8e6
)");
}

// FI-2: single MS behind one relay, with a direct-link alternative.
inline relaysim::Topology fi2_topology() {
    return relaysim::parse_topology(R"(
[stations]
station = 0 bs 0 0 30 8 1000
station = 1 ntrs 700 0 10 15 1000
station = 2 ms 1400 0 2 5 1000
[links]
link = 1 0 8e6
link = 2 0 3.5e6
link = 2 1 6e6
)");
}

// FI-3: one MS, one direct link; closed-form per-frame energy.
inline std::string fi3_topology_text() {
    return "[stations]\n"
           "station = 0 bs 0 0 30 10 1000\n"
           "station = 1 ms 900 0 2 7 1000\n"
           "[links]\n"
           "link = 1 0 5e6\n";
}

inline relaysim::Topology fi3_topology() { return relaysim::parse_topology(fi3_topology_text()); }

}  // namespace fixtures

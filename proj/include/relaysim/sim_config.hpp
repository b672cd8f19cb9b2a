#pragma once

#include <cstdint>
#include <string>

#include "relaysim/baseline.hpp"
#include "relaysim/bco.hpp"
#include "relaysim/channel.hpp"
#include "relaysim/energy.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

enum class Scenario { ThreeHop = 3, FourHop = 4, FiveHop = 5 };

enum class Algorithm { Ebcd, Dijkstra };

inline const char* to_string(Algorithm a) {
    return a == Algorithm::Ebcd ? "ebcd" : "dijkstra";
}

struct SimConfig {
    Scenario scenario = Scenario::ThreeHop;
    int n_frames = 2000;
    std::uint64_t seed = 1;
    int re_route_interval = 0;  // 0 = route once
    std::int64_t demand_min_bits = 900;
    std::int64_t demand_max_bits = 2000;
    DistRule dist_rule = DistRule::Bottleneck;
    bool normalize_fitness = false;
    BaselineWeight baseline_weight = BaselineWeight::Distance;
    std::string topology_file;  // replay a serialized topology instead of generating

    TopologyConfig topology;
    ChannelConfig channel;
    FrameConfig frame;
    McsTable mcs = default_mcs_table();
    BcoParams bco;

    int max_hops() const { return static_cast<int>(scenario); }
    // routing uses the expected demand: the midpoint of the per-frame range
    std::int64_t expected_demand_bits() const { return (demand_min_bits + demand_max_bits) / 2; }

    bool operator==(const SimConfig&) const = default;
};

}  // namespace relaysim

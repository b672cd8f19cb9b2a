#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/errors.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

struct FrameConfig {
    double frame_duration_s = 5e-3;
    int slots_per_frame = 48;

    double slot_duration_s() const { return frame_duration_s / slots_per_frame; }

    bool operator==(const FrameConfig&) const = default;
};

struct TrafficDemand {
    StationId ms = 0;
    std::int64_t bits_this_frame = 0;  // d_i
};

// Hop classes of Eq-6 style accounting: MS->RS and MS->BS count as MR (the
// BS acts as a specific RS for the direct case), RS->RS as RR, RS->BS as RB.
enum class HopClass { MR, RR, RB };

inline HopClass classify_hop(StationKind from, StationKind to) {
    if (from == StationKind::MobileStation) return HopClass::MR;
    return to == StationKind::BaseStation ? HopClass::RB : HopClass::RR;
}

struct EnergyBreakdown {
    double e_mr_mj = 0.0;
    double e_rr_mj = 0.0;
    double e_rb_mj = 0.0;
    double total_mj = 0.0;
};

struct FitnessComponents {
    double energy_term = 0.0;   // E, mJ
    double traffic_term = 0.0;  // T, dimensionless
    double dist_term = 0.0;     // Dist = received power, mW
    double f_value = 0.0;       // F = E + T + 1/Dist
};

enum class DistRule { Bottleneck, FirstHop };

// Everything a resolved hop contributes to energy/fitness: the chosen MCS
// level, the transmit power it implies, and what the receiver sees.
struct HopContext {
    McsLevel level;
    double p_required_mw = 0.0;
    double received_mw = 0.0;
    double bandwidth_hz = 0.0;
    HopClass cls = HopClass::MR;
    bool power_capped = false;
};

inline std::int64_t slots_for(std::int64_t demand_bits, const McsLevel& level) {
    // slots are indivisible: ceil(d / D(k))
    return (demand_bits + level.bits_per_slot - 1) / level.bits_per_slot;
}

// Energy of one hop for one frame: slots x slot time x required power.
// mW * s == mJ, mJ * 1 == mJ.
inline double link_energy_mj(std::int64_t demand_bits, const McsLevel& level,
                             const FrameConfig& fc, double p_required_mw) {
    if (demand_bits < 0) throw SimError(ErrorCode::BadArgument, "negative demand");
    return static_cast<double>(slots_for(demand_bits, level)) * fc.slot_duration_s() *
           p_required_mw;
}

// Per-class route energy; the same demand traverses every hop.
inline EnergyBreakdown route_energy_mj(std::int64_t demand_bits, const FrameConfig& fc,
                                       std::span<const HopContext> hops) {
    EnergyBreakdown out;
    for (const HopContext& h : hops) {
        const double e = link_energy_mj(demand_bits, h.level, fc, h.p_required_mw);
        switch (h.cls) {
            case HopClass::MR: out.e_mr_mj += e; break;
            case HopClass::RR: out.e_rr_mj += e; break;
            case HopClass::RB: out.e_rb_mj += e; break;
        }
    }
    out.total_mj = out.e_mr_mj + out.e_rr_mj + out.e_rb_mj;
    return out;
}

// T = d_i / BW
inline double traffic_cost(std::int64_t demand_bits, double bandwidth_hz) {
    if (bandwidth_hz <= 0.0) throw SimError(ErrorCode::BadArgument, "non-positive bandwidth");
    return static_cast<double>(demand_bits) / bandwidth_hz;
}

// F = E + T + 1/Dist with E the route total, T over the bottleneck link
// bandwidth, and Dist the received power under the configured rule.
inline FitnessComponents route_fitness(std::int64_t demand_bits, const FrameConfig& fc,
                                       std::span<const HopContext> hops,
                                       DistRule rule = DistRule::Bottleneck) {
    if (hops.empty()) throw SimError(ErrorCode::BadArgument, "empty hop context list");
    FitnessComponents out;
    out.energy_term = route_energy_mj(demand_bits, fc, hops).total_mj;

    double min_bw = hops.front().bandwidth_hz;
    double dist = hops.front().received_mw;
    for (const HopContext& h : hops) {
        min_bw = std::min(min_bw, h.bandwidth_hz);
        if (rule == DistRule::Bottleneck) dist = std::min(dist, h.received_mw);
    }
    out.traffic_term = traffic_cost(demand_bits, min_bw);
    if (dist <= 0.0) throw SimError(ErrorCode::DegenerateDist, "received power is zero");
    out.dist_term = dist;
    out.f_value = out.energy_term + out.traffic_term + 1.0 / dist;
    return out;
}

}  // namespace relaysim

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/energy.hpp"
#include "relaysim/rng.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

// Per-link constants resolved once per topology. pass1_* is the
// interference-free resolution (the first pass of the two-pass interference
// scheme); it doubles as each transmission's contribution to everyone
// else's interference pool.
struct LinkData {
    int from_idx = 0;
    int to_idx = 0;
    double distance_m = 0.0;
    double bandwidth_hz = 0.0;
    double loss_linear = 1.0;    // L, shadowing included when enabled
    double gain_product = 1.0;   // G_i * G_j
    double bn0_mw = 0.0;         // B * N0
    double l_over_g = 1.0;       // L / (G_i*G_j)
    double p_max_mw = 1000.0;    // transmitter's cap
    HopClass cls = HopClass::MR;
    int pass1_level_idx = 0;
    double pass1_power_mw = 0.0;
    bool pass1_capped = false;
};

struct ResolvedHop {
    int level_idx = 0;
    double power_mw = 0.0;
    bool capped = false;
};

// Immutable per-topology tables: station index map, the pairwise path-gain
// matrix used for interference sums, and per-link budgets.
class NetworkModel {
  public:
    NetworkModel(const Topology& topo, const ChannelConfig& channel, const FrameConfig& frame,
                 const McsTable& mcs, Rng* shadow_rng = nullptr)
        : topo_(&topo), channel_(channel), frame_(frame), mcs_(mcs) {
        if (!mcs_table_valid(mcs_))
            throw SimError(ErrorCode::BadArgument, "invalid MCS table");
        for (const McsLevel& l : mcs_.levels) mcs_factor_.push_back(db_to_linear(l.snr_threshold_db));

        n_ = static_cast<int>(topo.stations.size());
        for (int i = 0; i < n_; ++i) index_[topo.stations[i].id] = i;

        // lognormal shadowing: one draw per unordered pair, applied to both
        // directions (the channel is reciprocal); pair order (i, j<i) fixed
        std::vector<double> shadow(static_cast<std::size_t>(n_) * n_, 0.0);
        if (channel_.shadowing_enabled && shadow_rng) {
            for (int i = 0; i < n_; ++i) {
                for (int j = 0; j < i; ++j) {
                    const double s = shadow_rng->normal() * channel_.shadowing_sigma_db;
                    shadow[static_cast<std::size_t>(i) * n_ + j] = s;
                    shadow[static_cast<std::size_t>(j) * n_ + i] = s;
                }
            }
        }

        // pairwise path gain G_i*G_j / L(i,j); distances below d0 clamp to d0
        // (interference paths between arbitrary stations can be that short)
        pair_gain_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
        const double n0 = channel_.noise_density_mw_per_hz();
        for (int i = 0; i < n_; ++i) {
            const Station& a = topo.stations[i];
            for (int j = 0; j <= i; ++j) {
                const Station& b = topo.stations[j];
                const double d = std::max(station_distance_m(a, b), channel_.reference_dist_m);
                const double pl = sui_path_loss_db(channel_, d, a.antenna_height_m,
                                                   b.antenna_height_m,
                                                   shadow[static_cast<std::size_t>(i) * n_ + j]);
                const double g = db_to_linear(a.antenna_gain_db) *
                                 db_to_linear(b.antenna_gain_db) / db_to_linear(pl);
                pair_gain_[static_cast<std::size_t>(i) * n_ + j] = g;
                pair_gain_[static_cast<std::size_t>(j) * n_ + i] = g;
            }
        }

        links_.reserve(topo.links.size());
        for (const Link& l : topo.links) {
            const Station& a = *topo.find_station(l.from);
            const Station& b = *topo.find_station(l.to);
            LinkData ld;
            ld.from_idx = index_.at(l.from);
            ld.to_idx = index_.at(l.to);
            ld.distance_m = l.distance_m;
            ld.bandwidth_hz = l.bandwidth_hz;
            const double d = std::max(l.distance_m, channel_.reference_dist_m);
            const double pl =
                sui_path_loss_db(channel_, d, a.antenna_height_m, b.antenna_height_m,
                                 shadow[static_cast<std::size_t>(ld.from_idx) * n_ + ld.to_idx]);
            ld.loss_linear = db_to_linear(pl);
            ld.gain_product = db_to_linear(a.antenna_gain_db) * db_to_linear(b.antenna_gain_db);
            ld.bn0_mw = l.bandwidth_hz * n0;
            ld.l_over_g = ld.loss_linear / ld.gain_product;
            ld.p_max_mw = a.tx_power_max_mw;
            ld.cls = classify_hop(a.kind, b.kind);
            const ResolvedHop p1 = resolve_with_budget(ld, 0.0);
            ld.pass1_level_idx = p1.level_idx;
            ld.pass1_power_mw = p1.power_mw;
            ld.pass1_capped = p1.capped;
            links_.push_back(ld);
            link_index_[{l.from, l.to}] = static_cast<int>(links_.size()) - 1;
        }
    }

    const Topology& topology() const { return *topo_; }
    const ChannelConfig& channel() const { return channel_; }
    const FrameConfig& frame() const { return frame_; }
    const McsTable& mcs() const { return mcs_; }
    int station_count() const { return n_; }
    int station_index(StationId id) const { return index_.at(id); }
    const Station& station_at(int idx) const { return topo_->stations[idx]; }

    double pair_gain(int i, int j) const {
        return pair_gain_[static_cast<std::size_t>(i) * n_ + j];
    }

    const LinkData& link(int idx) const { return links_[idx]; }
    int link_count() const { return static_cast<int>(links_.size()); }

    int link_index(StationId from, StationId to) const {
        auto it = link_index_.find({from, to});
        if (it == link_index_.end())
            throw SimError(ErrorCode::BadArgument,
                           "no link " + std::to_string(from) + "->" + std::to_string(to));
        return it->second;
    }

    // Highest MCS level whose required power fits the cap, given the
    // interference at the receiver. Falls back to full power at the lowest
    // level when nothing fits (the power-cap rule); the caller counts caps.
    ResolvedHop resolve_with_budget(const LinkData& ld, double interference_mw) const {
        const double scale = (ld.bn0_mw + interference_mw) * ld.l_over_g;
        for (int k = static_cast<int>(mcs_factor_.size()) - 1; k >= 0; --k) {
            const double p = mcs_factor_[k] * scale;
            if (p <= ld.p_max_mw) return {k, p, false};
        }
        return {0, ld.p_max_mw, true};
    }

    const McsLevel& level(int idx) const { return mcs_.levels[idx]; }

  private:
    const Topology* topo_;
    ChannelConfig channel_;
    FrameConfig frame_;
    McsTable mcs_;
    std::vector<double> mcs_factor_;
    int n_ = 0;
    std::map<StationId, int> index_;
    std::vector<double> pair_gain_;
    std::vector<LinkData> links_;
    std::map<std::pair<StationId, StationId>, int> link_index_;
};

// A route pre-resolved to link indices for the hot evaluation paths.
struct CompiledRoute {
    Route route;
    std::vector<int> link_idx;
    double min_bandwidth_hz = 0.0;
};

inline CompiledRoute compile_route(const NetworkModel& m, const Route& r) {
    CompiledRoute out;
    out.route = r;
    out.min_bandwidth_hz = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < r.hops.size(); ++i) {
        const int li = m.link_index(r.hops[i], r.hops[i + 1]);
        out.link_idx.push_back(li);
        out.min_bandwidth_hz = std::min(out.min_bandwidth_hz, m.link(li).bandwidth_hz);
    }
    return out;
}

}  // namespace relaysim

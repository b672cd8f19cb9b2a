#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "relaysim/errors.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {

using StationId = int;

enum class StationKind { BaseStation, TransparentRS, NonTransparentRS, MobileStation };

inline const char* to_string(StationKind k) {
    switch (k) {
        case StationKind::BaseStation: return "bs";
        case StationKind::TransparentRS: return "trs";
        case StationKind::NonTransparentRS: return "ntrs";
        case StationKind::MobileStation: return "ms";
    }
    return "?";
}

struct Station {
    StationId id = 0;
    StationKind kind = StationKind::MobileStation;
    double x_m = 0.0;
    double y_m = 0.0;
    double antenna_height_m = 2.0;
    double antenna_gain_db = 0.0;
    double tx_power_max_mw = 1000.0;

    bool operator==(const Station&) const = default;
};

struct Link {
    StationId from = 0;
    StationId to = 0;
    double distance_m = 0.0;
    double bandwidth_hz = 0.0;

    bool operator==(const Link&) const = default;
};

struct Route {
    std::vector<StationId> hops;  // first = MS, last = BS

    int hop_count() const { return static_cast<int>(hops.size()) - 1; }

    bool operator==(const Route&) const = default;
    // Lexicographic on the hop sequence; the project-wide tie-break order.
    bool operator<(const Route& o) const {
        return std::lexicographical_compare(hops.begin(), hops.end(), o.hops.begin(),
                                            o.hops.end());
    }
};

struct TopologyConfig {
    int n_rs = 10;
    int n_ms = 30;
    int max_hops = 3;  // 2..5
    double deployment_radius_m = 2000.0;
    double d_min_m = 200.0;
    double d_max_m = 2000.0;
    double bw_min_hz = 3.5e6;
    double bw_max_hz = 10.0e6;
    double transparent_fraction = 0.3;
    double bs_height_m = 30.0;
    double rs_height_m = 10.0;
    double ms_height_m = 2.0;
    double bs_rs_gain_min_db = 5.0;
    double bs_rs_gain_max_db = 20.0;
    double ms_gain_min_db = 1.0;
    double ms_gain_max_db = 10.0;
    double tx_power_max_mw = 1000.0;
    int max_routes_per_ms = 256;

    bool operator==(const TopologyConfig&) const = default;
};

struct Topology {
    std::vector<Station> stations;  // sorted by id; BS first by construction
    std::vector<Link> links;        // sorted by (from, to)
    int max_hops = 3;
    double deployment_radius_m = 2000.0;
    std::set<StationId> unreachable_ms;  // flagged at generation time
    bool route_cap_hit = false;          // any MS hit max_routes_per_ms

    bool operator==(const Topology&) const = default;

    const Station* find_station(StationId id) const {
        auto it = std::lower_bound(stations.begin(), stations.end(), id,
                                   [](const Station& s, StationId v) { return s.id < v; });
        return (it != stations.end() && it->id == id) ? &*it : nullptr;
    }

    const Link* find_link(StationId from, StationId to) const {
        auto it = std::lower_bound(links.begin(), links.end(), std::pair{from, to},
                                   [](const Link& l, const std::pair<StationId, StationId>& v) {
                                       return std::pair{l.from, l.to} < v;
                                   });
        return (it != links.end() && it->from == from && it->to == to) ? &*it : nullptr;
    }

    std::vector<StationId> mobile_stations() const {
        std::vector<StationId> out;
        for (const auto& s : stations)
            if (s.kind == StationKind::MobileStation) out.push_back(s.id);
        return out;
    }
};

inline bool is_relay(StationKind k) {
    return k == StationKind::TransparentRS || k == StationKind::NonTransparentRS;
}

// Link direction rules: uplink only — MS->RS, MS->BS, RS->RS, RS->BS.
inline bool direction_legal(StationKind from, StationKind to) {
    if (from == StationKind::MobileStation) return is_relay(to) || to == StationKind::BaseStation;
    if (is_relay(from)) return is_relay(to) || to == StationKind::BaseStation;
    return false;
}

inline double station_distance_m(const Station& a, const Station& b) {
    const double dx = a.x_m - b.x_m;
    const double dy = a.y_m - b.y_m;
    return std::sqrt(dx * dx + dy * dy);
}

// ---------------------------------------------------------------------------
// Route validation
// ---------------------------------------------------------------------------

enum class RouteViolationKind {
    TooShort,
    FirstNotMobileStation,
    LastNotBaseStation,
    IntermediateNotRelay,
    UnknownStation,
    MissingLink,
    HopBoundExceeded,
    TransparentRelayMisplaced,
    RepeatedStation,
};

struct RouteViolation {
    RouteViolationKind kind;
    std::string detail;
};

// Returns every violated route invariant; the route is valid iff empty.
inline std::vector<RouteViolation> validate_route(const Topology& t, const Route& r) {
    std::vector<RouteViolation> out;
    if (r.hops.size() < 2) {
        out.push_back({RouteViolationKind::TooShort, "route needs at least MS and BS"});
        return out;
    }
    std::vector<const Station*> st(r.hops.size());
    for (std::size_t i = 0; i < r.hops.size(); ++i) {
        st[i] = t.find_station(r.hops[i]);
        if (!st[i]) {
            out.push_back(
                {RouteViolationKind::UnknownStation, "station " + std::to_string(r.hops[i])});
            return out;
        }
    }
    if (st.front()->kind != StationKind::MobileStation)
        out.push_back({RouteViolationKind::FirstNotMobileStation,
                       "first station is " + std::string(to_string(st.front()->kind))});
    if (st.back()->kind != StationKind::BaseStation)
        out.push_back({RouteViolationKind::LastNotBaseStation,
                       "last station is " + std::string(to_string(st.back()->kind))});
    for (std::size_t i = 1; i + 1 < st.size(); ++i) {
        if (!is_relay(st[i]->kind))
            out.push_back({RouteViolationKind::IntermediateNotRelay,
                           "station " + std::to_string(st[i]->id)});
        // A transparent relay only serves as the single intermediate of a
        // two-hop route; longer chains are non-transparent territory.
        if (st[i]->kind == StationKind::TransparentRS && r.hops.size() != 3)
            out.push_back({RouteViolationKind::TransparentRelayMisplaced,
                           "station " + std::to_string(st[i]->id) + " in " +
                               std::to_string(r.hop_count()) + "-hop route"});
    }
    if (r.hop_count() > t.max_hops)
        out.push_back({RouteViolationKind::HopBoundExceeded,
                       std::to_string(r.hop_count()) + " > " + std::to_string(t.max_hops)});
    for (std::size_t i = 0; i + 1 < r.hops.size(); ++i) {
        if (!t.find_link(r.hops[i], r.hops[i + 1]))
            out.push_back({RouteViolationKind::MissingLink,
                           std::to_string(r.hops[i]) + "->" + std::to_string(r.hops[i + 1])});
    }
    std::vector<StationId> sorted = r.hops;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        out.push_back({RouteViolationKind::RepeatedStation, "route revisits a station"});
    return out;
}

// ---------------------------------------------------------------------------
// Route enumeration
// ---------------------------------------------------------------------------

namespace detail {

struct RouteSearch {
    const Topology* topo;
    int max_hops;
    // adjacency: station id -> outgoing neighbor ids (ascending because
    // Topology.links is sorted by (from, to))
    std::map<StationId, std::vector<StationId>> adj;

    explicit RouteSearch(const Topology& t, int hops) : topo(&t), max_hops(hops) {
        for (const Link& l : t.links) adj[l.from].push_back(l.to);
    }

    // Emits routes in lexicographic hop-id order (ascending neighbor lists,
    // and the BS completion of a prefix sorts where its id says it does).
    void dfs(std::vector<StationId>& path, std::vector<Route>& out) const {
        const StationId here = path.back();
        const bool after_transparent =
            topo->find_station(here)->kind == StationKind::TransparentRS;
        auto it = adj.find(here);
        if (it == adj.end()) return;
        for (StationId next : it->second) {
            const Station* st = topo->find_station(next);
            if (st->kind == StationKind::BaseStation) {
                path.push_back(next);
                out.push_back(Route{path});
                path.pop_back();
                continue;
            }
            // a transparent relay forwards straight to the BS, nothing else
            if (after_transparent) continue;
            // entering a relay costs a hop and the BS completion costs one more
            if (static_cast<int>(path.size()) >= max_hops) continue;
            if (std::find(path.begin(), path.end(), next) != path.end()) continue;
            // transparent RS is only legal directly after the MS
            if (st->kind == StationKind::TransparentRS && path.size() != 1) continue;
            path.push_back(next);
            dfs(path, out);
            path.pop_back();
        }
    }
};

// Cheap existence check used at generation time: direct link, transparent
// 2-hop, or a min-hop BFS over non-transparent relays.
inline bool has_valid_route(const Topology& t, StationId ms, int max_hops) {
    StationId bs_id = -1;
    for (const Station& s : t.stations)
        if (s.kind == StationKind::BaseStation) bs_id = s.id;
    if (bs_id < 0) return false;
    if (t.find_link(ms, bs_id)) return true;
    if (max_hops < 2) return false;

    std::map<StationId, std::vector<StationId>> adj;
    for (const Link& l : t.links) adj[l.from].push_back(l.to);

    // transparent relays: exactly MS -> tRS -> BS
    for (StationId n : adj[ms]) {
        const Station* st = t.find_station(n);
        if (st->kind == StationKind::TransparentRS && t.find_link(n, bs_id)) return true;
    }
    // non-transparent chains: BFS hop counts are simple-path hop counts
    std::map<StationId, int> dist;
    std::vector<StationId> frontier;
    for (StationId n : adj[ms]) {
        const Station* st = t.find_station(n);
        if (st->kind == StationKind::NonTransparentRS) {
            dist[n] = 1;
            frontier.push_back(n);
        }
    }
    while (!frontier.empty()) {
        std::vector<StationId> next_frontier;
        for (StationId u : frontier) {
            if (dist[u] + 1 <= max_hops && t.find_link(u, bs_id)) return true;
            if (dist[u] + 2 > max_hops) continue;  // no room for another relay + BS
            for (StationId v : adj[u]) {
                const Station* st = t.find_station(v);
                if (st->kind != StationKind::NonTransparentRS) continue;
                if (dist.count(v)) continue;
                dist[v] = dist[u] + 1;
                next_frontier.push_back(v);
            }
        }
        frontier = std::move(next_frontier);
    }
    return false;
}

}  // namespace detail

// All simple MS->BS routes with hop_count <= max_hops obeying the relay-type
// rules, in lexicographic hop-id order.
inline std::vector<Route> enumerate_routes(const Topology& t, StationId ms, int max_hops) {
    const Station* start = t.find_station(ms);
    if (!start || start->kind != StationKind::MobileStation)
        throw SimError(ErrorCode::BadArgument,
                       "station " + std::to_string(ms) + " is not a mobile station");
    detail::RouteSearch search(t, max_hops);
    std::vector<Route> out;
    std::vector<StationId> path{ms};
    search.dfs(path, out);
    return out;
}

// Enumeration with the candidate cap: keeps the max_routes shortest-distance
// candidates (ties lexicographic), returned in lexicographic order.
inline std::vector<Route> enumerate_routes_capped(const Topology& t, StationId ms, int max_hops,
                                                  int max_routes, bool* cap_hit = nullptr) {
    std::vector<Route> all = enumerate_routes(t, ms, max_hops);
    if (cap_hit) *cap_hit = false;
    if (max_routes > 0 && static_cast<int>(all.size()) > max_routes) {
        if (cap_hit) *cap_hit = true;
        auto total_dist = [&t](const Route& r) {
            double d = 0.0;
            for (std::size_t i = 0; i + 1 < r.hops.size(); ++i)
                d += t.find_link(r.hops[i], r.hops[i + 1])->distance_m;
            return d;
        };
        std::vector<std::pair<double, std::size_t>> keyed(all.size());
        for (std::size_t i = 0; i < all.size(); ++i) keyed[i] = {total_dist(all[i]), i};
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Route> kept;
        kept.reserve(max_routes);
        for (int i = 0; i < max_routes; ++i) kept.push_back(std::move(all[keyed[i].second]));
        std::sort(kept.begin(), kept.end());
        return kept;
    }
    return all;
}

// ---------------------------------------------------------------------------
// Topology generation
// ---------------------------------------------------------------------------

// Seeded placement per the Table-1 ranges. Station ids: BS = 0, RSs = 1..n_rs,
// MSs = n_rs+1..n_rs+n_ms. Draw order is fixed (per station: x, y, gain,
// kind-uniform for RSs), so identical (cfg, seed) is bit-identical. Points are
// drawn by rejection inside the disc to avoid trig, which keeps placement
// reproducible across libm implementations.
inline Topology generate_topology(const TopologyConfig& cfg, std::uint64_t seed) {
    if (cfg.deployment_radius_m <= 0.0)
        throw SimError(ErrorCode::ZeroRadius, "deployment_radius_m must be positive");
    if (cfg.n_rs < 0 || cfg.n_ms < 0)
        throw SimError(ErrorCode::ImpossibleConfig, "station counts must be non-negative");
    if (cfg.d_min_m > 2.0 * cfg.deployment_radius_m)
        throw SimError(ErrorCode::ImpossibleConfig,
                       "d_min_m exceeds the deployment disc diameter; no link can exist");
    if (cfg.d_min_m > cfg.d_max_m)
        throw SimError(ErrorCode::ImpossibleConfig, "d_min_m > d_max_m");

    Rng rng(derive_seed(seed, Stream::Topology));
    Topology t;
    t.max_hops = cfg.max_hops;
    t.deployment_radius_m = cfg.deployment_radius_m;

    auto disc_point = [&rng, &cfg](double& x, double& y) {
        const double r = cfg.deployment_radius_m;
        do {
            x = rng.uniform(-r, r);
            y = rng.uniform(-r, r);
        } while (x * x + y * y > r * r);
    };

    Station bs;
    bs.id = 0;
    bs.kind = StationKind::BaseStation;
    bs.x_m = 0.0;
    bs.y_m = 0.0;
    bs.antenna_height_m = cfg.bs_height_m;
    bs.antenna_gain_db = rng.uniform(cfg.bs_rs_gain_min_db, cfg.bs_rs_gain_max_db);
    bs.tx_power_max_mw = cfg.tx_power_max_mw;
    t.stations.push_back(bs);

    int n_transparent = 0;
    for (int i = 0; i < cfg.n_rs; ++i) {
        Station rs;
        rs.id = 1 + i;
        disc_point(rs.x_m, rs.y_m);
        rs.antenna_height_m = cfg.rs_height_m;
        rs.antenna_gain_db = rng.uniform(cfg.bs_rs_gain_min_db, cfg.bs_rs_gain_max_db);
        rs.tx_power_max_mw = cfg.tx_power_max_mw;
        const bool transparent = rng.uniform01() < cfg.transparent_fraction;
        rs.kind = transparent ? StationKind::TransparentRS : StationKind::NonTransparentRS;
        n_transparent += transparent ? 1 : 0;
        t.stations.push_back(rs);
    }
    // multi-hop scenarios need at least one chainable relay
    if (cfg.n_rs > 0 && n_transparent == cfg.n_rs)
        t.stations.back().kind = StationKind::NonTransparentRS;

    for (int i = 0; i < cfg.n_ms; ++i) {
        Station ms;
        ms.id = 1 + cfg.n_rs + i;
        ms.kind = StationKind::MobileStation;
        disc_point(ms.x_m, ms.y_m);
        ms.antenna_height_m = cfg.ms_height_m;
        ms.antenna_gain_db = rng.uniform(cfg.ms_gain_min_db, cfg.ms_gain_max_db);
        ms.tx_power_max_mw = cfg.tx_power_max_mw;
        t.stations.push_back(ms);
    }

    // links: every direction-legal pair with distance inside [d_min, d_max],
    // visited in ascending (from, to) order; bandwidth drawn per link
    for (const Station& a : t.stations) {
        for (const Station& b : t.stations) {
            if (a.id == b.id || !direction_legal(a.kind, b.kind)) continue;
            const double d = station_distance_m(a, b);
            if (d < cfg.d_min_m || d > cfg.d_max_m) continue;
            t.links.push_back(Link{a.id, b.id, d, rng.uniform(cfg.bw_min_hz, cfg.bw_max_hz)});
        }
    }

    for (StationId ms : t.mobile_stations()) {
        if (!detail::has_valid_route(t, ms, cfg.max_hops)) t.unreachable_ms.insert(ms);
    }
    return t;
}

}  // namespace relaysim

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "relaysim/baseline.hpp"
#include "relaysim/bco.hpp"
#include "relaysim/config_io.hpp"
#include "relaysim/evaluation.hpp"
#include "relaysim/rng.hpp"
#include "relaysim/sim_config.hpp"

namespace relaysim {

struct FrameResult {
    int frame_index = 0;
    double total_energy_mj = 0.0;
    EnergyBreakdown per_class;
    std::int64_t slots_used = 0;
    std::int64_t slots_demanded = 0;
    std::int64_t carried_over_bits = 0;
    int power_capped_links = 0;
};

struct RunReport {
    Algorithm algorithm = Algorithm::Ebcd;
    double mean_energy_per_frame_mj = 0.0;
    std::vector<FrameResult> frames;
    int unreachable_count = 0;
    double routing_wallclock_s = 0.0;
    Solution solution;
    std::vector<double> cost_trace;  // empty for the baseline
    std::int64_t bits_sampled = 0;
    std::int64_t bits_served = 0;
    std::int64_t bits_queued_end = 0;
    std::int64_t power_capped_total = 0;
    std::uint64_t demand_stream_hash = 0;
    bool route_cap_hit = false;
};

struct ComparisonReport {
    RunReport ebcd;
    RunReport baseline;
    double savings_percent = 0.0;  // 100 * (E_base - E_ebcd) / E_base
};

// ---------------------------------------------------------------------------
// Frame engine
// ---------------------------------------------------------------------------

// Per-frame state transition: demands enter per-MS FIFO queues, the access
// budget (slots_per_frame) admits first-hop bursts in ascending MS order
// billed at the interference-free first-hop MCS, and the admitted
// transmissions are then resolved with two-pass interference for the energy
// accounting.
class FrameEngine {
  public:
    FrameEngine(const NetworkModel& model, std::vector<CompiledRoute> routes)
        : model_(&model), routes_(std::move(routes)), queue_bits_(routes_.size(), 0) {}

    void set_routes(std::vector<CompiledRoute> routes) {
        routes_ = std::move(routes);
        if (queue_bits_.size() != routes_.size()) queue_bits_.assign(routes_.size(), 0);
    }

    std::int64_t queued_bits() const {
        std::int64_t total = 0;
        for (std::int64_t q : queue_bits_) total += q;
        return total;
    }

    std::int64_t bits_served_total() const { return bits_served_; }

    FrameResult step(int frame_index, std::span<const std::int64_t> demands) {
        const NetworkModel& m = *model_;
        const int n = static_cast<int>(routes_.size());
        FrameResult out;
        out.frame_index = frame_index;

        for (int s = 0; s < n; ++s) queue_bits_[s] += demands[s];

        // admission against the access budget
        std::vector<std::int64_t> served(n, 0);
        std::int64_t remaining = m.frame().slots_per_frame;
        for (int s = 0; s < n; ++s) {
            if (queue_bits_[s] == 0) continue;
            const LinkData& first = m.link(routes_[s].link_idx.front());
            const McsLevel& level = m.level(first.pass1_level_idx);
            const std::int64_t want = slots_for(queue_bits_[s], level);
            out.slots_demanded += want;
            const std::int64_t grant = std::min(want, remaining);
            if (grant > 0) {
                served[s] =
                    std::min<std::int64_t>(queue_bits_[s], grant * level.bits_per_slot);
                queue_bits_[s] -= served[s];
                remaining -= grant;
                out.slots_used += grant;
                bits_served_ += served[s];
            }
        }

        // active transmissions: every hop of every route that carried bits
        std::vector<int> active;
        for (int s = 0; s < n; ++s) {
            if (served[s] == 0) continue;
            active.insert(active.end(), routes_[s].link_idx.begin(), routes_[s].link_idx.end());
        }

        for (int s = 0; s < n; ++s) {
            if (served[s] == 0) continue;
            for (int li : routes_[s].link_idx) {
                const LinkData& ld = m.link(li);
                const double i_mw = detail::interference_direct(m, active, ld);
                const ResolvedHop res = m.resolve_with_budget(ld, i_mw);
                if (res.capped) ++out.power_capped_links;
                const double e =
                    link_energy_mj(served[s], m.level(res.level_idx), m.frame(), res.power_mw);
                switch (ld.cls) {
                    case HopClass::MR: out.per_class.e_mr_mj += e; break;
                    case HopClass::RR: out.per_class.e_rr_mj += e; break;
                    case HopClass::RB: out.per_class.e_rb_mj += e; break;
                }
            }
        }
        out.per_class.total_mj =
            out.per_class.e_mr_mj + out.per_class.e_rr_mj + out.per_class.e_rb_mj;
        out.total_energy_mj = out.per_class.total_mj;
        out.carried_over_bits = queued_bits();
        return out;
    }

  private:
    const NetworkModel* model_;
    std::vector<CompiledRoute> routes_;
    std::vector<std::int64_t> queue_bits_;
    std::int64_t bits_served_ = 0;
};

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

namespace detail {

struct PreparedNetwork {
    Topology topology;
    std::unique_ptr<NetworkModel> model;
    std::unique_ptr<EvalContext> ctx;
};

inline PreparedNetwork prepare_network(const SimConfig& cfg) {
    PreparedNetwork out;
    TopologyConfig tcfg = cfg.topology;
    tcfg.max_hops = cfg.max_hops();
    if (!cfg.topology_file.empty()) {
        out.topology = parse_topology_file(cfg.topology_file);
        out.topology.max_hops = tcfg.max_hops;
        // reachability depends on the hop bound; recompute for this run
        out.topology.unreachable_ms.clear();
        for (StationId ms : out.topology.mobile_stations())
            if (!has_valid_route(out.topology, ms, tcfg.max_hops))
                out.topology.unreachable_ms.insert(ms);
    } else {
        out.topology = generate_topology(tcfg, cfg.seed);
    }
    Rng shadow_rng(derive_seed(cfg.seed, Stream::Shadowing));
    out.model = std::make_unique<NetworkModel>(
        out.topology, cfg.channel, cfg.frame, cfg.mcs,
        cfg.channel.shadowing_enabled ? &shadow_rng : nullptr);
    out.ctx = std::make_unique<EvalContext>(
        make_eval_context(*out.model, tcfg, cfg.expected_demand_bits()));
    out.ctx->dist_rule = cfg.dist_rule;
    out.ctx->normalize_fitness = cfg.normalize_fitness;
    return out;
}

struct RoutingOutcome {
    std::vector<CompiledRoute> routes;  // per ctx slot
    Solution solution;
    std::vector<double> cost_trace;
};

inline RoutingOutcome route_once(const SimConfig& cfg, const PreparedNetwork& net,
                                 Algorithm algo, std::uint64_t reroute_index) {
    RoutingOutcome out;
    const EvalContext& ctx = *net.ctx;
    if (algo == Algorithm::Ebcd) {
        BcoParams params = cfg.bco;
        params.seed = derive_seed(cfg.seed, Stream::Search, reroute_index);
        EbcdResult res = run_ebcd(ctx, params);
        out.solution = std::move(res.best);
        out.cost_trace = std::move(res.cost_trace);
    } else {
        BaselineResult res = dijkstra_routes(net.topology, cfg.baseline_weight, net.model.get(),
                                             cfg.expected_demand_bits());
        out.solution = std::move(res.solution);
    }
    out.routes.reserve(ctx.slot_count());
    for (int s = 0; s < ctx.slot_count(); ++s) {
        auto it = out.solution.assignment.find(ctx.ms_ids[s]);
        if (it == out.solution.assignment.end())
            throw SimError(ErrorCode::NoRouteExists,
                           "router produced no route for reachable MS " +
                               std::to_string(ctx.ms_ids[s]));
        out.routes.push_back(compile_route(*net.model, it->second));
    }
    return out;
}

inline RunReport run_prepared(const SimConfig& cfg, const PreparedNetwork& net, Algorithm algo) {
    RunReport report;
    report.algorithm = algo;
    report.unreachable_count = static_cast<int>(net.topology.unreachable_ms.size());
    report.route_cap_hit = net.topology.route_cap_hit;

    const auto t0 = std::chrono::steady_clock::now();
    RoutingOutcome routing = route_once(cfg, net, algo, 0);
    report.routing_wallclock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.solution = routing.solution;
    report.cost_trace = std::move(routing.cost_trace);

    FrameEngine engine(*net.model, std::move(routing.routes));
    Rng demand_rng(derive_seed(cfg.seed, Stream::Demand));
    const int slots = net.ctx->slot_count();
    std::vector<std::int64_t> demands(slots);

    std::uint64_t reroutes = 0;
    double energy_sum = 0.0;
    report.frames.reserve(cfg.n_frames);
    for (int f = 0; f < cfg.n_frames; ++f) {
        if (cfg.re_route_interval > 0 && f > 0 && f % cfg.re_route_interval == 0) {
            const auto r0 = std::chrono::steady_clock::now();
            RoutingOutcome again = route_once(cfg, net, algo, ++reroutes);
            report.routing_wallclock_s +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - r0).count();
            report.solution = again.solution;
            engine.set_routes(std::move(again.routes));
        }
        for (int s = 0; s < slots; ++s) {
            demands[s] = demand_rng.int_in(cfg.demand_min_bits, cfg.demand_max_bits);
            report.bits_sampled += demands[s];
            report.demand_stream_hash =
                (report.demand_stream_hash ^ static_cast<std::uint64_t>(demands[s])) *
                0x100000001b3ULL;
        }
        FrameResult fr = engine.step(f, demands);
        energy_sum += fr.total_energy_mj;
        report.power_capped_total += fr.power_capped_links;
        report.frames.push_back(std::move(fr));
    }
    report.bits_served = engine.bits_served_total();
    report.bits_queued_end = engine.queued_bits();
    report.mean_energy_per_frame_mj = cfg.n_frames > 0 ? energy_sum / cfg.n_frames : 0.0;
    return report;
}

}  // namespace detail

// Full experiment run: topology from (cfg, seed), routes from the requested
// algorithm at the expected demand, then the frame loop. Deterministic per
// (cfg, algorithm).
inline RunReport run(const SimConfig& cfg, Algorithm algo) {
    const detail::PreparedNetwork net = detail::prepare_network(cfg);
    return detail::run_prepared(cfg, net, algo);
}

// Both algorithms over the identical topology and demand stream (common
// random numbers); savings_percent = 100 * (E_base - E_ebcd) / E_base.
inline ComparisonReport compare(const SimConfig& cfg) {
    const detail::PreparedNetwork net = detail::prepare_network(cfg);
    ComparisonReport out;
    out.ebcd = detail::run_prepared(cfg, net, Algorithm::Ebcd);
    out.baseline = detail::run_prepared(cfg, net, Algorithm::Dijkstra);
    const double e_base = out.baseline.mean_energy_per_frame_mj;
    const double e_ebcd = out.ebcd.mean_energy_per_frame_mj;
    out.savings_percent = e_base > 0.0 ? 100.0 * (e_base - e_ebcd) / e_base : 0.0;
    return out;
}

}  // namespace relaysim

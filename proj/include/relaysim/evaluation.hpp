#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "relaysim/energy.hpp"
#include "relaysim/network_model.hpp"

namespace relaysim {

// Everything route evaluation needs besides the assignment itself: the
// per-MS candidate sets (lexicographic order), per-MS demands, and the
// fitness conventions in force.
struct EvalContext {
    const NetworkModel* model = nullptr;
    std::vector<StationId> ms_ids;                       // reachable MSs, ascending id
    std::vector<std::vector<CompiledRoute>> candidates;  // per slot, lexicographic
    std::vector<std::int64_t> demand_bits;               // per slot
    DistRule dist_rule = DistRule::Bottleneck;
    bool normalize_fitness = false;
    bool interference_enabled = true;

    int slot_count() const { return static_cast<int>(ms_ids.size()); }
    int slot_of(StationId ms) const {
        auto it = std::lower_bound(ms_ids.begin(), ms_ids.end(), ms);
        if (it == ms_ids.end() || *it != ms)
            throw SimError(ErrorCode::BadArgument,
                           "station " + std::to_string(ms) + " has no candidate slot");
        return static_cast<int>(it - ms_ids.begin());
    }
};

// Candidate sets for every reachable MS, capped per cfg.max_routes_per_ms.
inline EvalContext make_eval_context(const NetworkModel& model, const TopologyConfig& tcfg,
                                     std::int64_t demand_bits_each) {
    const Topology& t = model.topology();
    EvalContext ctx;
    ctx.model = &model;
    for (StationId ms : t.mobile_stations()) {
        if (t.unreachable_ms.count(ms)) continue;
        bool cap_hit = false;
        std::vector<Route> routes =
            enumerate_routes_capped(t, ms, t.max_hops, tcfg.max_routes_per_ms, &cap_hit);
        if (routes.empty())
            throw SimError(ErrorCode::EmptyCandidates,
                           "reachable MS " + std::to_string(ms) + " has no candidate route");
        std::vector<CompiledRoute> compiled;
        compiled.reserve(routes.size());
        for (const Route& r : routes) compiled.push_back(compile_route(model, r));
        ctx.ms_ids.push_back(ms);
        ctx.candidates.push_back(std::move(compiled));
        ctx.demand_bits.push_back(demand_bits_each);
    }
    return ctx;
}

namespace detail {

// Interference at the receiver of `subject` under the two-pass convention:
// every other same-frame transmission contributes its interference-free
// (pass-1) power, received over the transmitter->receiver pair path. The
// subject's transmitter and the receiver itself are excluded (a station
// neither interferes with its own burst nor receives while transmitting).
inline double interference_direct(const NetworkModel& m, std::span<const int> active_links,
                                  const LinkData& subject) {
    double i_mw = 0.0;
    for (int li : active_links) {
        const LinkData& t = m.link(li);
        if (t.from_idx == subject.from_idx || t.from_idx == subject.to_idx) continue;
        i_mw += m.pair_gain(t.from_idx, subject.to_idx) * t.pass1_power_mw;
    }
    return i_mw;
}

}  // namespace detail

// Canonical per-route fitness of one slot inside a full assignment.
// Pure function of (ctx, choice); the reference that search results are
// reported and compared with.
inline FitnessComponents route_fitness_in_assignment(const EvalContext& ctx,
                                                     std::span<const int> choice, int slot,
                                                     int* capped_hops = nullptr) {
    const NetworkModel& m = *ctx.model;
    std::vector<int> active;
    if (ctx.interference_enabled) {
        for (int s = 0; s < ctx.slot_count(); ++s) {
            const CompiledRoute& r = ctx.candidates[s][choice[s]];
            active.insert(active.end(), r.link_idx.begin(), r.link_idx.end());
        }
    }
    const CompiledRoute& r = ctx.candidates[slot][choice[slot]];
    std::vector<HopContext> hops;
    hops.reserve(r.link_idx.size());
    for (int li : r.link_idx) {
        const LinkData& ld = m.link(li);
        const double i_mw =
            ctx.interference_enabled ? detail::interference_direct(m, active, ld) : 0.0;
        const ResolvedHop res = m.resolve_with_budget(ld, i_mw);
        HopContext hc;
        hc.level = m.level(res.level_idx);
        hc.p_required_mw = res.power_mw;
        hc.received_mw = res.power_mw / ld.l_over_g;
        hc.bandwidth_hz = ld.bandwidth_hz;
        hc.cls = ld.cls;
        hc.power_capped = res.capped;
        if (res.capped && capped_hops) ++*capped_hops;
        hops.push_back(hc);
    }
    return route_fitness(ctx.demand_bits[slot], m.frame(), hops, ctx.dist_rule);
}

// Canonical assignment cost: sum of coupled route fitness over all slots.
inline double assignment_cost_direct(const EvalContext& ctx, std::span<const int> choice) {
    double total = 0.0;
    for (int s = 0; s < ctx.slot_count(); ++s)
        total += route_fitness_in_assignment(ctx, choice, s).f_value;
    return total;
}

// ---------------------------------------------------------------------------
// Incremental engine for the optimizer's inner loop.
//
// Maintains, per assignment:
//   txsum[s]  — sum of pass-1 powers of station s's active transmissions
//   pool[j]   — sum over stations s of pair_gain(s, j) * txsum[s]
// so the interference of a hop i->j is pool[j] minus the i and j terms.
// Updates are O(hops * stations) per route change. Totals drift by ULPs
// relative to the canonical path, so results that leave the loop are
// re-evaluated canonically.
// ---------------------------------------------------------------------------

class SolutionEngine {
  public:
    struct State {
        std::vector<int> choice;
        std::vector<double> txsum;
        std::vector<double> pool;
        double total = 0.0;
        std::uint64_t version = 0;
        std::vector<std::uint64_t> clean_version;  // per slot; == version means at argmin
        int cursor = 0;                            // round-robin MS pointer
    };

    struct Terms {
        double energy = 0.0;
        double traffic = 0.0;
        double inv_dist = 0.0;

        double f() const { return energy + traffic + inv_dist; }
    };

    explicit SolutionEngine(const EvalContext& ctx) : ctx_(&ctx) {}

    const EvalContext& context() const { return *ctx_; }

    State make_state(std::vector<int> choice) const {
        const NetworkModel& m = *ctx_->model;
        State st;
        st.choice = std::move(choice);
        st.txsum.assign(m.station_count(), 0.0);
        st.pool.assign(m.station_count(), 0.0);
        st.clean_version.assign(ctx_->slot_count(), ~std::uint64_t{0});
        if (ctx_->interference_enabled) {
            for (int s = 0; s < ctx_->slot_count(); ++s)
                for (int li : ctx_->candidates[s][st.choice[s]].link_idx)
                    st.txsum[m.link(li).from_idx] += m.link(li).pass1_power_mw;
            for (int src = 0; src < m.station_count(); ++src) {
                if (st.txsum[src] == 0.0) continue;
                for (int j = 0; j < m.station_count(); ++j)
                    st.pool[j] += m.pair_gain(src, j) * st.txsum[src];
            }
        }
        st.total = total_cost(st);
        return st;
    }

    // E / T / 1/Dist of `cand` for `slot` with every other slot fixed.
    // Pool adjustments swap the slot's current transmissions for the
    // candidate's before the i/j exclusions are applied.
    Terms candidate_terms(const State& st, int slot, int cand) const {
        const NetworkModel& m = *ctx_->model;
        const CompiledRoute& cur = ctx_->candidates[slot][st.choice[slot]];
        const CompiledRoute& r = ctx_->candidates[slot][cand];
        Terms out;
        double dist = std::numeric_limits<double>::infinity();
        bool first_hop = true;
        for (int li : r.link_idx) {
            const LinkData& ld = m.link(li);
            double i_mw = 0.0;
            if (ctx_->interference_enabled) {
                const int i = ld.from_idx;
                const int j = ld.to_idx;
                double pool_j = st.pool[j];
                double tx_i = st.txsum[i];
                double tx_j = st.txsum[j];
                for (int t : cur.link_idx) {
                    const LinkData& lt = m.link(t);
                    pool_j -= m.pair_gain(lt.from_idx, j) * lt.pass1_power_mw;
                    if (lt.from_idx == i) tx_i -= lt.pass1_power_mw;
                    if (lt.from_idx == j) tx_j -= lt.pass1_power_mw;
                }
                for (int t : r.link_idx) {
                    const LinkData& lt = m.link(t);
                    pool_j += m.pair_gain(lt.from_idx, j) * lt.pass1_power_mw;
                    if (lt.from_idx == i) tx_i += lt.pass1_power_mw;
                    if (lt.from_idx == j) tx_j += lt.pass1_power_mw;
                }
                // incremental removal can leave a -1 ulp residue
                i_mw = std::max(pool_j - m.pair_gain(i, j) * tx_i - m.pair_gain(j, j) * tx_j, 0.0);
            }
            const ResolvedHop res = m.resolve_with_budget(ld, i_mw);
            out.energy +=
                static_cast<double>(slots_for(ctx_->demand_bits[slot], m.level(res.level_idx))) *
                m.frame().slot_duration_s() * res.power_mw;
            const double recv = res.power_mw / ld.l_over_g;
            if (ctx_->dist_rule == DistRule::Bottleneck) dist = std::min(dist, recv);
            else if (first_hop) dist = recv;
            first_hop = false;
        }
        out.traffic = static_cast<double>(ctx_->demand_bits[slot]) / r.min_bandwidth_hz;
        out.inv_dist = 1.0 / dist;
        return out;
    }

    double candidate_f(const State& st, int slot, int cand) const {
        return candidate_terms(st, slot, cand).f();
    }

    // Cost of the state's assignment evaluated through the pools.
    double total_cost(const State& st) const {
        double total = 0.0;
        for (int s = 0; s < ctx_->slot_count(); ++s) total += candidate_f(st, s, st.choice[s]);
        return total;
    }

    void apply(State& st, int slot, int cand) const {
        const NetworkModel& m = *ctx_->model;
        if (ctx_->interference_enabled) {
            const CompiledRoute& cur = ctx_->candidates[slot][st.choice[slot]];
            const CompiledRoute& r = ctx_->candidates[slot][cand];
            // net per-station power deltas, then one pool sweep per station
            std::vector<std::pair<int, double>> delta;
            auto add = [&delta](int s, double d) {
                for (auto& e : delta)
                    if (e.first == s) {
                        e.second += d;
                        return;
                    }
                delta.push_back({s, d});
            };
            for (int t : cur.link_idx) add(m.link(t).from_idx, -m.link(t).pass1_power_mw);
            for (int t : r.link_idx) add(m.link(t).from_idx, m.link(t).pass1_power_mw);
            for (const auto& [s, d] : delta) {
                if (d == 0.0) continue;
                st.txsum[s] += d;
                for (int j = 0; j < m.station_count(); ++j)
                    st.pool[j] += m.pair_gain(s, j) * d;
            }
        }
        st.choice[slot] = cand;
        st.total = total_cost(st);
    }

    // One elitist pass on `slot`: rank candidates by own-route F (min-max
    // normalized over the candidate set when configured), adopt the winner
    // only if the coupled total does not increase. Candidates are stored in
    // lexicographic order, so strict < implements the lexicographic
    // tie-break. Returns whether the assignment changed.
    bool try_improve(State& st, int slot) const {
        const auto& cands = ctx_->candidates[slot];
        int best = st.choice[slot];
        if (cands.size() > 1) {
            if (!ctx_->normalize_fitness) {
                double best_f = std::numeric_limits<double>::infinity();
                for (int c = 0; c < static_cast<int>(cands.size()); ++c) {
                    const double f = candidate_f(st, slot, c);
                    if (f < best_f) {
                        best_f = f;
                        best = c;
                    }
                }
            } else {
                std::vector<Terms> terms;
                terms.reserve(cands.size());
                for (int c = 0; c < static_cast<int>(cands.size()); ++c)
                    terms.push_back(candidate_terms(st, slot, c));
                Terms lo = terms[0];
                Terms hi = terms[0];
                for (const Terms& t : terms) {
                    lo.energy = std::min(lo.energy, t.energy);
                    hi.energy = std::max(hi.energy, t.energy);
                    lo.traffic = std::min(lo.traffic, t.traffic);
                    hi.traffic = std::max(hi.traffic, t.traffic);
                    lo.inv_dist = std::min(lo.inv_dist, t.inv_dist);
                    hi.inv_dist = std::max(hi.inv_dist, t.inv_dist);
                }
                auto norm = [](double v, double a, double b) {
                    return b > a ? (v - a) / (b - a) : 0.0;
                };
                double best_score = std::numeric_limits<double>::infinity();
                for (int c = 0; c < static_cast<int>(cands.size()); ++c) {
                    const double score = norm(terms[c].energy, lo.energy, hi.energy) +
                                         norm(terms[c].traffic, lo.traffic, hi.traffic) +
                                         norm(terms[c].inv_dist, lo.inv_dist, hi.inv_dist);
                    if (score < best_score) {
                        best_score = score;
                        best = c;
                    }
                }
            }
        }
        const int old = st.choice[slot];
        bool changed = false;
        if (best != old) {
            const double old_total = st.total;
            apply(st, slot, best);
            if (st.total <= old_total) {
                changed = true;
                ++st.version;
            } else {
                apply(st, slot, old);
                st.total = old_total;  // keep the lineage exactly monotone
            }
        }
        st.clean_version[slot] = st.version;
        return changed;
    }

  private:
    const EvalContext* ctx_;
};

}  // namespace relaysim

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "relaysim/bco.hpp"
#include "relaysim/evaluation.hpp"
#include "relaysim/topology.hpp"

namespace relaysim {

enum class BaselineWeight { Distance, Energy };

namespace detail {

// Walks the hop-layered search space (same hop bound and relay-type rules
// the colony's candidate enumeration obeys) and folds the minimum path under
// (weight, hop count, lexicographic hop sequence). Full path labels, no
// dominance pruning, so ties and revisit blocking are resolved exactly.
class ShortestRouteFold {
  public:
    ShortestRouteFold(const Topology& t, BaselineWeight weight, const NetworkModel* model,
                      std::int64_t demand_bits)
        : topo_(&t), weight_(weight), model_(model), demand_(demand_bits) {
        for (const Link& l : t.links) adj_[l.from].push_back(&l);
    }

    // empty route if the MS has no constrained path
    Route best_route(StationId ms) {
        best_ = Route{};
        best_weight_ = std::numeric_limits<double>::infinity();
        std::vector<StationId> path{ms};
        walk(path, 0.0);
        return best_;
    }

  private:
    double link_weight(const Link& l) const {
        if (weight_ == BaselineWeight::Distance) return l.distance_m;
        const LinkData& ld = model_->link(model_->link_index(l.from, l.to));
        return static_cast<double>(slots_for(demand_, model_->level(ld.pass1_level_idx))) *
               model_->frame().slot_duration_s() * ld.pass1_power_mw;
    }

    void consider(const std::vector<StationId>& path, double weight) {
        if (weight > best_weight_) return;
        if (weight == best_weight_ && !best_.hops.empty()) {
            const int hops = static_cast<int>(path.size()) - 1;
            if (hops > best_.hop_count()) return;
            if (hops == best_.hop_count() &&
                !std::lexicographical_compare(path.begin(), path.end(), best_.hops.begin(),
                                              best_.hops.end()))
                return;
        }
        best_ = Route{path};
        best_weight_ = weight;
    }

    void walk(std::vector<StationId>& path, double weight) {
        const StationId here = path.back();
        const bool after_transparent =
            topo_->find_station(here)->kind == StationKind::TransparentRS;
        auto it = adj_.find(here);
        if (it == adj_.end()) return;
        for (const Link* l : it->second) {
            const Station* st = topo_->find_station(l->to);
            const double w = weight + link_weight(*l);
            if (st->kind == StationKind::BaseStation) {
                path.push_back(l->to);
                consider(path, w);
                path.pop_back();
                continue;
            }
            if (after_transparent) continue;
            if (static_cast<int>(path.size()) >= topo_->max_hops) continue;
            if (w > best_weight_) continue;  // positive weights only grow
            if (std::find(path.begin(), path.end(), l->to) != path.end()) continue;
            if (st->kind == StationKind::TransparentRS && path.size() != 1) continue;
            path.push_back(l->to);
            walk(path, w);
            path.pop_back();
        }
    }

    const Topology* topo_;
    BaselineWeight weight_;
    const NetworkModel* model_;
    std::int64_t demand_;
    std::map<StationId, std::vector<const Link*>> adj_;
    Route best_;
    double best_weight_ = 0.0;
};

}  // namespace detail

struct BaselineResult {
    Solution solution;
    std::set<StationId> unreachable;
};

// Per-MS minimum-total-weight route to the BS under the colony's exact
// constraint set. Weight is link distance by default; the energy weighting
// (interference-free per-link energy at the routing demand) is a
// sensitivity probe.
inline BaselineResult dijkstra_routes(const Topology& t,
                                      BaselineWeight weight = BaselineWeight::Distance,
                                      const NetworkModel* model = nullptr,
                                      std::int64_t demand_bits = 0) {
    if (weight == BaselineWeight::Energy && model == nullptr)
        throw SimError(ErrorCode::BadArgument, "energy weighting needs a network model");
    detail::ShortestRouteFold fold(t, weight, model, demand_bits);
    BaselineResult out;
    for (StationId ms : t.mobile_stations()) {
        Route r = fold.best_route(ms);
        if (r.hops.empty()) out.unreachable.insert(ms);
        else out.solution.assignment[ms] = std::move(r);
    }
    return out;
}

// Global minimum of the coupled assignment cost by joint enumeration.
// The assignment space is odometer-ordered (slot-major, candidates in
// lexicographic order), so keeping the first strict minimum implements the
// lexicographic tie-break.
inline std::pair<Solution, double> exhaustive_best(const EvalContext& ctx,
                                                   double guard = 1e6) {
    if (ctx.slot_count() == 0)
        throw SimError(ErrorCode::EmptyCandidates, "no reachable MS to route");
    double product = 1.0;
    for (int s = 0; s < ctx.slot_count(); ++s) {
        if (ctx.candidates[s].empty())
            throw SimError(ErrorCode::EmptyCandidates,
                           "MS " + std::to_string(ctx.ms_ids[s]) + " has no candidates");
        product *= static_cast<double>(ctx.candidates[s].size());
        if (product > guard)
            throw SimError(ErrorCode::TooLarge, "joint assignment space exceeds the guard");
    }

    std::vector<int> choice(ctx.slot_count(), 0);
    std::vector<int> best_choice = choice;
    double best_cost = assignment_cost_direct(ctx, choice);
    for (;;) {
        int pos = ctx.slot_count() - 1;
        while (pos >= 0) {
            if (++choice[pos] < static_cast<int>(ctx.candidates[pos].size())) break;
            choice[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        const double c = assignment_cost_direct(ctx, choice);
        if (c < best_cost) {
            best_cost = c;
            best_choice = choice;
        }
    }
    return {detail::solution_from_choice(ctx, best_choice), best_cost};
}

}  // namespace relaysim

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "relaysim/evaluation.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {

// One route per reachable MS; the unit the colony optimizes.
struct Solution {
    std::map<StationId, Route> assignment;

    bool operator==(const Solution&) const = default;
};

struct BcoParams {
    int n_bees = 30;
    int max_inner_steps = 0;  // 0 resolves to 2 * (number of MSs)
    int max_iterations = 100;
    int stagnation_limit = 20;
    int elite_count = 2;
    std::uint64_t seed = 1;

    bool operator==(const BcoParams&) const = default;
};

struct EbcdResult {
    Solution best;
    double best_cost = 0.0;
    std::vector<double> cost_trace;  // best-so-far per iteration, non-increasing
    int iterations_run = 0;
};

namespace detail {

inline std::vector<int> choice_from_solution(const EvalContext& ctx, const Solution& s) {
    std::vector<int> choice(ctx.slot_count());
    for (int slot = 0; slot < ctx.slot_count(); ++slot) {
        const StationId ms = ctx.ms_ids[slot];
        auto it = s.assignment.find(ms);
        if (it == s.assignment.end())
            throw SimError(ErrorCode::BadArgument,
                           "solution misses MS " + std::to_string(ms));
        const auto& cands = ctx.candidates[slot];
        int found = -1;
        for (int c = 0; c < static_cast<int>(cands.size()); ++c)
            if (cands[c].route == it->second) {
                found = c;
                break;
            }
        if (found < 0)
            throw SimError(ErrorCode::BadArgument,
                           "route for MS " + std::to_string(ms) + " is not a candidate");
        choice[slot] = found;
    }
    return choice;
}

inline Solution solution_from_choice(const EvalContext& ctx, std::span<const int> choice) {
    Solution s;
    for (int slot = 0; slot < ctx.slot_count(); ++slot)
        s.assignment[ctx.ms_ids[slot]] = ctx.candidates[slot][choice[slot]].route;
    return s;
}

}  // namespace detail

// Coupled cost of a full assignment: sum of per-route F with interference
// from the co-assigned routes.
inline double solution_cost(const Solution& s, const EvalContext& ctx) {
    const std::vector<int> choice = detail::choice_from_solution(ctx, s);
    return assignment_cost_direct(ctx, choice);
}

// n_bees solutions, each MS assigned a uniformly random candidate.
inline std::vector<Solution> init_population(const EvalContext& ctx, const BcoParams& p) {
    for (int s = 0; s < ctx.slot_count(); ++s)
        if (ctx.candidates[s].empty())
            throw SimError(ErrorCode::EmptyCandidates,
                           "MS " + std::to_string(ctx.ms_ids[s]) + " has no candidates");
    Rng rng(p.seed);
    std::vector<Solution> out;
    out.reserve(p.n_bees);
    for (int b = 0; b < p.n_bees; ++b) {
        std::vector<int> choice(ctx.slot_count());
        for (int s = 0; s < ctx.slot_count(); ++s)
            choice[s] = static_cast<int>(rng.below(ctx.candidates[s].size()));
        out.push_back(detail::solution_from_choice(ctx, choice));
    }
    return out;
}

// Elitist pass on one MS: its candidates are ranked by F with the rest of
// the assignment fixed and the best is adopted (when the coupled total does
// not increase). The result never costs more than the input.
inline Solution local_improve(const Solution& s, const EvalContext& ctx, StationId ms) {
    SolutionEngine engine(ctx);
    SolutionEngine::State st = engine.make_state(detail::choice_from_solution(ctx, s));
    engine.try_improve(st, ctx.slot_of(ms));
    return detail::solution_from_choice(ctx, st.choice);
}

// Eq.-4 recruitment over solution qualities f_i = 1/cost_i:
// P_i = f_i / sum_k f_k.
inline std::vector<double> recruitment_probabilities(std::span<const double> costs) {
    std::vector<double> probs(costs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (costs[i] <= 0.0)
            throw SimError(ErrorCode::NonPositiveCost,
                           "cost[" + std::to_string(i) + "] = " + std::to_string(costs[i]));
        probs[i] = 1.0 / costs[i];
        sum += probs[i];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

// The colony loop: per iteration every bee runs its inner local-improvement
// steps (round-robin over MSs), the elite solutions survive unconditionally,
// and each remaining bee abandons with probability proportional to its gap
// from the iteration best, re-seating on a recruitment draw. Stops on
// max_iterations or stagnation_limit iterations without improvement.
inline EbcdResult run_ebcd(const EvalContext& ctx, const BcoParams& params) {
    if (ctx.slot_count() == 0)
        throw SimError(ErrorCode::EmptyCandidates, "no reachable MS to route");
    for (int s = 0; s < ctx.slot_count(); ++s)
        if (ctx.candidates[s].empty())
            throw SimError(ErrorCode::EmptyCandidates,
                           "MS " + std::to_string(ctx.ms_ids[s]) + " has no candidates");

    const int inner_steps =
        params.max_inner_steps > 0 ? params.max_inner_steps : 2 * ctx.slot_count();
    const int n_bees = std::max(1, params.n_bees);
    const int elite_count = std::clamp(params.elite_count, 1, n_bees);

    Rng rng(params.seed);
    SolutionEngine engine(ctx);

    std::vector<SolutionEngine::State> bees;
    bees.reserve(n_bees);
    for (int b = 0; b < n_bees; ++b) {
        std::vector<int> choice(ctx.slot_count());
        for (int s = 0; s < ctx.slot_count(); ++s)
            choice[s] = static_cast<int>(rng.below(ctx.candidates[s].size()));
        bees.push_back(engine.make_state(std::move(choice)));
    }

    // best-so-far bookkeeping is canonical (drift-free), the loop itself
    // runs on the incremental states
    std::vector<int> best_choice = bees[0].choice;
    double best_cost = assignment_cost_direct(ctx, best_choice);
    for (int b = 1; b < n_bees; ++b) {
        const double c = assignment_cost_direct(ctx, bees[b].choice);
        if (c < best_cost) {
            best_cost = c;
            best_choice = bees[b].choice;
        }
    }

    EbcdResult result;
    int stagnation = 0;
    for (int iter = 0; iter < params.max_iterations; ++iter) {
        for (auto& bee : bees) {
            for (int step = 0; step < inner_steps; ++step) {
                const int slot = bee.cursor;
                bee.cursor = (bee.cursor + 1) % ctx.slot_count();
                if (bee.clean_version[slot] == bee.version) continue;  // nothing changed
                engine.try_improve(bee, slot);
            }
        }

        int iter_best = 0;
        int iter_worst = 0;
        for (int b = 1; b < n_bees; ++b) {
            if (bees[b].total < bees[iter_best].total) iter_best = b;
            if (bees[b].total > bees[iter_worst].total) iter_worst = b;
        }
        const double canonical = assignment_cost_direct(ctx, bees[iter_best].choice);
        if (canonical < best_cost) {
            best_cost = canonical;
            best_choice = bees[iter_best].choice;
            stagnation = 0;
        } else {
            ++stagnation;
        }
        result.cost_trace.push_back(best_cost);
        result.iterations_run = iter + 1;
        if (stagnation >= params.stagnation_limit) break;
        if (iter + 1 == params.max_iterations) break;

        // elite ranking: (cost, bee index)
        std::vector<int> order(n_bees);
        for (int b = 0; b < n_bees; ++b) order[b] = b;
        std::sort(order.begin(), order.end(), [&bees](int a, int b) {
            if (bees[a].total != bees[b].total) return bees[a].total < bees[b].total;
            return a < b;
        });
        std::vector<bool> elite(n_bees, false);
        for (int e = 0; e < elite_count; ++e) elite[order[e]] = true;

        const double cost_lo = bees[order.front()].total;
        const double cost_hi = bees[order.back()].total;
        if (cost_hi <= cost_lo) continue;  // uniform population, nothing to re-seat

        // abandonment draws reference the pre-reseating population snapshot
        std::vector<double> costs(n_bees);
        for (int b = 0; b < n_bees; ++b) costs[b] = bees[b].total;
        const std::vector<double> probs = recruitment_probabilities(costs);
        const std::vector<SolutionEngine::State> snapshot = bees;

        for (int b = 0; b < n_bees; ++b) {
            if (elite[b]) continue;
            const double p_abandon = (costs[b] - cost_lo) / (cost_hi - cost_lo);
            if (rng.uniform01() >= p_abandon) continue;
            const double u = rng.uniform01();
            double acc = 0.0;
            int target = n_bees - 1;
            for (int k = 0; k < n_bees; ++k) {
                acc += probs[k];
                if (u < acc) {
                    target = k;
                    break;
                }
            }
            bees[b] = snapshot[target];
        }
    }

    result.best = detail::solution_from_choice(ctx, best_choice);
    result.best_cost = best_cost;
    return result;
}

}  // namespace relaysim

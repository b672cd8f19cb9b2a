#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "relaysim/baseline.hpp"
#include "relaysim/bco.hpp"
#include "relaysim/rng.hpp"

using namespace relaysim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Instance {
    Topology topology;
    std::unique_ptr<NetworkModel> model;
    EvalContext ctx;
};

Instance desk_instance(std::uint64_t seed, int n_rs, int n_ms, int cap = 8,
                       bool interference = true) {
    Instance inst;
    TopologyConfig tcfg;
    tcfg.n_rs = n_rs;
    tcfg.n_ms = n_ms;
    tcfg.max_hops = 3;
    tcfg.max_routes_per_ms = cap;
    inst.topology = generate_topology(tcfg, seed);
    inst.model = std::make_unique<NetworkModel>(inst.topology, fixtures::fi_channel(),
                                                FrameConfig{}, default_mcs_table());
    inst.ctx = make_eval_context(*inst.model, tcfg, 1450);
    inst.ctx.interference_enabled = interference;
    return inst;
}

}  // namespace

TEST_CASE("recruitment probabilities follow quality 1/cost") {
    SECTION("hand-computed example") {
        const double costs[] = {2.0, 3.0, 5.0};
        const auto p = recruitment_probabilities(costs);
        // 15/31, 10/31, 6/31 (tests/oracles/oracle.py)
        REQUIRE_THAT(p[0], WithinRel(0.48387096774193555, 1e-12));
        REQUIRE_THAT(p[1], WithinRel(0.32258064516129037, 1e-12));
        REQUIRE_THAT(p[2], WithinRel(0.19354838709677422, 1e-12));
    }
    SECTION("equal costs are uniform") {
        const double costs[] = {7.5, 7.5, 7.5, 7.5};
        for (double p : recruitment_probabilities(costs))
            REQUIRE_THAT(p, WithinRel(0.25, 1e-12));
    }
    SECTION("single solution takes it all") {
        const double costs[] = {42.0};
        REQUIRE(recruitment_probabilities(costs)[0] == 1.0);
    }
    SECTION("probability vector sums to one") {
        Rng rng(13);
        for (int i = 0; i < 200; ++i) {
            std::vector<double> costs(1 + rng.below(20));
            for (double& c : costs) c = rng.uniform(1e-6, 1e9);
            const auto p = recruitment_probabilities(costs);
            double sum = 0.0;
            for (double x : p) {
                REQUIRE(x >= 0.0);
                sum += x;
            }
            REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("permutation equivariance") {
        const std::vector<double> costs = {2.0, 9.0, 4.5, 1.25};
        const auto p = recruitment_probabilities(costs);
        std::vector<double> rev(costs.rbegin(), costs.rend());
        const auto q = recruitment_probabilities(rev);
        for (std::size_t i = 0; i < costs.size(); ++i)
            REQUIRE(p[i] == q[costs.size() - 1 - i]);
    }
    SECTION("common scale cancels") {
        const std::vector<double> costs = {2.0, 9.0, 4.5, 1.25};
        std::vector<double> scaled = costs;
        for (double& c : scaled) c *= 64.0;  // power of two: exact in fp
        const auto p = recruitment_probabilities(costs);
        const auto q = recruitment_probabilities(scaled);
        for (std::size_t i = 0; i < costs.size(); ++i)
            REQUIRE_THAT(p[i], WithinRel(q[i], 1e-12));
    }
    SECTION("non-positive costs are rejected") {
        const double costs[] = {1.0, 0.0};
        REQUIRE_THROWS_AS(recruitment_probabilities(costs), SimError);
    }
}

TEST_CASE("initial population") {
    Instance inst = desk_instance(5, 3, 4);
    BcoParams p;
    p.n_bees = 8;
    p.seed = 5;

    SECTION("deterministic per seed") {
        REQUIRE(init_population(inst.ctx, p) == init_population(inst.ctx, p));
    }
    SECTION("single bee") {
        p.n_bees = 1;
        REQUIRE(init_population(inst.ctx, p).size() == 1);
    }
    SECTION("one candidate per MS collapses the population") {
        Instance tiny = desk_instance(5, 3, 4, /*cap=*/1);
        const auto pop = init_population(tiny.ctx, p);
        for (const Solution& s : pop) REQUIRE(s == pop.front());
    }
}

TEST_CASE("local improvement") {
    Instance inst = desk_instance(21, 3, 5);
    BcoParams p;
    p.n_bees = 1;
    p.seed = 3;
    const Solution start = init_population(inst.ctx, p).front();

    SECTION("never increases the coupled cost") {
        Solution s = start;
        for (int pass = 0; pass < 3; ++pass) {
            for (StationId ms : inst.ctx.ms_ids) {
                const double before = solution_cost(s, inst.ctx);
                s = local_improve(s, inst.ctx, ms);
                REQUIRE(solution_cost(s, inst.ctx) <= before);
            }
        }
    }
    SECTION("a solution at its per-MS optimum is a fixed point") {
        Solution s = start;
        for (int pass = 0; pass < 10; ++pass)
            for (StationId ms : inst.ctx.ms_ids) s = local_improve(s, inst.ctx, ms);
        for (StationId ms : inst.ctx.ms_ids)
            REQUIRE(local_improve(s, inst.ctx, ms) == s);
    }
}

TEST_CASE("local improvement adopts the cheaper of two candidates") {
    // FI-2: the MS has exactly the direct route and the relay route
    const Topology t = fixtures::fi2_topology();
    const NetworkModel model(t, fixtures::fi_channel(), FrameConfig{}, default_mcs_table());
    TopologyConfig tcfg;
    EvalContext ctx = make_eval_context(model, tcfg, 1600);
    REQUIRE(ctx.candidates[0].size() == 2);

    Solution direct;
    direct.assignment[2] = Route{{2, 0}};
    Solution relayed;
    relayed.assignment[2] = Route{{2, 1, 0}};
    const double f_direct = solution_cost(direct, ctx);
    const double f_relayed = solution_cost(relayed, ctx);
    const Solution& better = f_direct < f_relayed ? direct : relayed;
    const Solution& worse = f_direct < f_relayed ? relayed : direct;
    REQUIRE(local_improve(worse, ctx, 2) == better);
    REQUIRE(local_improve(better, ctx, 2) == better);
}

TEST_CASE("repeated improvement matches greedy coordinate descent") {
    // interference off so per-route argmin and total-cost descent coincide
    Instance inst = desk_instance(33, 4, 5, 16, /*interference=*/false);
    BcoParams p;
    p.n_bees = 1;
    p.seed = 9;
    Solution mine = init_population(inst.ctx, p).front();
    Solution oracle = mine;

    // library path
    for (int pass = 0; pass < 20; ++pass)
        for (StationId ms : inst.ctx.ms_ids) mine = local_improve(mine, inst.ctx, ms);

    // test-local greedy coordinate descent over the same candidate sets
    for (int pass = 0; pass < 20; ++pass) {
        for (int slot = 0; slot < inst.ctx.slot_count(); ++slot) {
            const StationId ms = inst.ctx.ms_ids[slot];
            Solution best = oracle;
            double best_cost = solution_cost(oracle, inst.ctx);
            for (const CompiledRoute& cand : inst.ctx.candidates[slot]) {
                Solution trial = oracle;
                trial.assignment[ms] = cand.route;
                const double c = solution_cost(trial, inst.ctx);
                if (c < best_cost) {
                    best_cost = c;
                    best = trial;
                }
            }
            oracle = best;
        }
    }
    REQUIRE_THAT(solution_cost(mine, inst.ctx),
                 WithinRel(solution_cost(oracle, inst.ctx), 1e-9));
}

TEST_CASE("colony run: degenerate single-candidate space") {
    Instance inst = desk_instance(5, 3, 4, /*cap=*/1);
    BcoParams p;
    p.n_bees = 6;
    p.max_iterations = 100;
    p.stagnation_limit = 7;
    p.seed = 2;
    const EbcdResult r = run_ebcd(inst.ctx, p);
    REQUIRE(r.iterations_run == 7);  // no improvement is possible after init
    REQUIRE(r.cost_trace.size() == 7);
    for (double c : r.cost_trace) REQUIRE(c == r.cost_trace.front());
    for (int slot = 0; slot < inst.ctx.slot_count(); ++slot)
        REQUIRE(r.best.assignment.at(inst.ctx.ms_ids[slot]) ==
                inst.ctx.candidates[slot][0].route);
}

TEST_CASE("colony run: deterministic per seed") {
    Instance inst = desk_instance(40, 4, 5);
    BcoParams p;
    p.n_bees = 10;
    p.max_iterations = 30;
    p.stagnation_limit = 10;
    p.seed = 77;
    const EbcdResult a = run_ebcd(inst.ctx, p);
    const EbcdResult b = run_ebcd(inst.ctx, p);
    REQUIRE(a.best == b.best);
    REQUIRE(a.best_cost == b.best_cost);
    REQUIRE(a.cost_trace == b.cost_trace);
    REQUIRE(a.iterations_run == b.iterations_run);
}

TEST_CASE("colony run: trace is non-increasing and ends at the best cost") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance inst = desk_instance(seed, 3, 5);
        BcoParams p;
        p.n_bees = 8;
        p.max_iterations = 25;
        p.stagnation_limit = 8;
        p.seed = seed;
        const EbcdResult r = run_ebcd(inst.ctx, p);
        REQUIRE_FALSE(r.cost_trace.empty());
        for (std::size_t i = 1; i < r.cost_trace.size(); ++i)
            REQUIRE(r.cost_trace[i] <= r.cost_trace[i - 1]);
        REQUIRE(r.best_cost == r.cost_trace.back());
        REQUIRE_THAT(solution_cost(r.best, inst.ctx), WithinRel(r.best_cost, 1e-12));
    }
}

TEST_CASE("colony run: near-optimal on small instances") {
    int within = 0;
    const int n = 10;
    for (int i = 0; i < n; ++i) {
        Instance inst = desk_instance(100 + i, 3, 4);
        BcoParams p;
        p.seed = 1000 + i;
        const EbcdResult r = run_ebcd(inst.ctx, p);
        const auto [best, best_cost] = exhaustive_best(inst.ctx);
        REQUIRE(r.best_cost >= best_cost);  // global-minimum bound
        if (r.best_cost <= best_cost * 1.05) ++within;
    }
    REQUIRE(within >= 9);
}

TEST_CASE("colony run rejects an empty search space") {
    Instance inst = desk_instance(5, 3, 4);
    EvalContext empty = inst.ctx;
    empty.ms_ids.clear();
    empty.candidates.clear();
    empty.demand_bits.clear();
    BcoParams p;
    REQUIRE_THROWS_AS(run_ebcd(empty, p), SimError);
}

#include <catch2/catch_amalgamated.hpp>

#include "relaysim/channel.hpp"
#include "relaysim/rng.hpp"

using namespace relaysim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ChannelConfig cc_at(double f_mhz, Terrain t = Terrain::B) {
    ChannelConfig cc;
    cc.carrier_freq_mhz = f_mhz;
    cc.reference_dist_m = 100.0;
    cc.terrain = t;
    return cc;
}

}  // namespace

TEST_CASE("intercept term at the reference distance") {
    // d = d0, f = 2000 MHz, hr = 2 m: the frequency and height corrections
    // vanish and PL reduces to A = 20*log10(4*pi*d0/lambda).
    // Expected value from tests/oracles/oracle.py.
    const double pl = sui_path_loss_db(cc_at(2000.0), 100.0, 30.0, 2.0);
    REQUIRE_THAT(pl, WithinAbs(78.468383135162997712, 1e-9));
}

TEST_CASE("frequency and height corrections vanish at their pivots") {
    // Xf = 0 at 2000 MHz and Xh = 0 at hr = 2 for every terrain
    for (Terrain t : {Terrain::A, Terrain::B, Terrain::C}) {
        const double pl = sui_path_loss_db(cc_at(2000.0, t), 100.0, 25.0, 2.0);
        const double lambda = speed_of_light_m_s / 2000.0e6;
        const double a = 20.0 * std::log10(4.0 * M_PI * 100.0 / lambda);
        REQUIRE_THAT(pl, WithinAbs(a, 1e-12));
    }
}

TEST_CASE("terrain C exponent at hb = 30") {
    // gamma = (PL(1000) - PL(100)) / (10 * log10(10)); hand value 4.11666...
    const ChannelConfig cc = cc_at(2000.0, Terrain::C);
    const double gamma =
        (sui_path_loss_db(cc, 1000.0, 30.0, 2.0) - sui_path_loss_db(cc, 100.0, 30.0, 2.0)) / 10.0;
    REQUIRE_THAT(gamma, WithinRel(4.116666666666666, 1e-12));
}

TEST_CASE("path loss rejects distances below the reference") {
    REQUIRE_THROWS_AS(sui_path_loss_db(cc_at(3500.0), 99.0, 30.0, 2.0), SimError);
}

TEST_CASE("path loss is non-decreasing in distance") {
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
        ChannelConfig cc = cc_at(rng.uniform(700.0, 6000.0),
                                 static_cast<Terrain>(rng.int_in(0, 2)));
        const double hb = rng.uniform(5.0, 60.0);
        const double hr = rng.uniform(1.0, 5.0);
        const double d1 = rng.uniform(100.0, 5000.0);
        const double d2 = d1 + rng.uniform(0.0, 3000.0);
        REQUIRE(sui_path_loss_db(cc, d2, hb, hr) >= sui_path_loss_db(cc, d1, hb, hr));
    }
}

TEST_CASE("db conversions round-trip") {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double db = rng.uniform(-150.0, 150.0);
        REQUIRE_THAT(linear_to_db(db_to_linear(db)), WithinAbs(db, 1e-9));
    }
}

TEST_CASE("received power direct substitutions") {
    REQUIRE_THAT(received_power_mw(100.0, 1.0, 1.0, 10.0), WithinRel(10.0, 1e-15));
    REQUIRE(received_power_mw(123.5, 1.0, 1.0, 1.0) == 123.5);
    REQUIRE_THAT(received_power_mw(100.0, 2.0, 5.0, 1000.0), WithinRel(1.0, 1e-15));
}

TEST_CASE("interference sums co-frame received powers") {
    REQUIRE(interference_mw({}) == 0.0);
    const double powers[] = {1.0, 2.0};
    REQUIRE(interference_mw(powers) == 3.0);
}

TEST_CASE("required power identities") {
    const McsLevel zero_db{1, 48, 0.0};
    const McsLevel ten_db{1, 48, 10.0};
    const double b = 7e6;
    const double n0 = 1e-10;
    // delta = 0 dB, L = G = 1, I = 0: exactly B*N0
    REQUIRE(required_tx_power_mw(zero_db, b, n0, 0.0, 1.0, 1.0) == b * n0);
    // delta = 10 dB: exactly 10 * B * N0
    REQUIRE(required_tx_power_mw(ten_db, b, n0, 0.0, 1.0, 1.0) == 10.0 * (b * n0));
}

TEST_CASE("required power for Table-1-typical inputs") {
    // B = 7 MHz, N0 = -100 dBm/Hz, L = 80 dB, G = 15 dB, delta = 6 dB;
    // expected value from tests/oracles/oracle.py
    const McsLevel level{1, 48, 6.0};
    const double p = required_tx_power_mw(level, 7e6, dbm_to_mw(-100.0), 0.0,
                                          db_to_linear(80.0), db_to_linear(15.0));
    REQUIRE_THAT(p, WithinRel(8812.47788255917, 1e-12));
}

TEST_CASE("threshold consistency between the power equations") {
    // substituting the required power back into the received-power equation
    // recovers the SNR threshold over noise-plus-interference exactly
    Rng rng(77);
    for (int i = 0; i < 1000; ++i) {
        const McsLevel level{1, 48, rng.uniform(0.0, 25.0)};
        const double b = rng.uniform(3.5e6, 10e6);
        const double n0 = dbm_to_mw(rng.uniform(-174.0, -90.0));
        const double i_mw = rng.uniform(0.0, 1e-6);
        const double l = db_to_linear(rng.uniform(60.0, 140.0));
        const double g = db_to_linear(rng.uniform(2.0, 30.0));
        const double p = required_tx_power_mw(level, b, n0, i_mw, l, g);
        const double recovered =
            received_power_mw(p, g, 1.0, l) / (b * n0 + i_mw);
        REQUIRE_THAT(recovered, WithinRel(db_to_linear(level.snr_threshold_db), 1e-9));
    }
}

TEST_CASE("mcs selection picks the highest feasible level") {
    const McsTable table = default_mcs_table();
    LinkBudget budget = LinkBudget::from_db(80.0, db_to_linear(15.0), 7e6 * dbm_to_mw(-100.0));

    SECTION("unbounded cap selects the top level") {
        const auto level = select_mcs(table, budget, 1e18);
        REQUIRE(level.has_value());
        REQUIRE(level->index == table.levels.back().index);
    }
    SECTION("vanishing cap is infeasible") {
        REQUIRE_FALSE(select_mcs(table, budget, 1e-12).has_value());
    }
    SECTION("mid-range budget agrees with exhaustive screening") {
        Rng rng(31);
        for (int i = 0; i < 200; ++i) {
            LinkBudget b = LinkBudget::from_db(rng.uniform(70.0, 130.0),
                                               db_to_linear(rng.uniform(2.0, 30.0)),
                                               rng.uniform(3.5e6, 10e6) * dbm_to_mw(-168.0));
            const double cap = rng.uniform(1.0, 1000.0);
            const auto picked = select_mcs(table, b, cap);
            // independent screen: walk every level
            const McsLevel* expect = nullptr;
            for (const McsLevel& l : table.levels) {
                const double p = db_to_linear(l.snr_threshold_db) *
                                 b.noise_plus_interference_mw * b.path_loss_linear /
                                 b.gain_product_linear;
                if (p <= cap) expect = &l;
            }
            if (!expect) {
                REQUIRE_FALSE(picked.has_value());
            } else {
                REQUIRE(picked.has_value());
                REQUIRE(picked->index == expect->index);
                // local optimality: the next level up must not fit
                for (const McsLevel& l : table.levels) {
                    if (l.index != picked->index + 1) continue;
                    const double p = db_to_linear(l.snr_threshold_db) *
                                     b.noise_plus_interference_mw * b.path_loss_linear /
                                     b.gain_product_linear;
                    REQUIRE(p > cap);
                }
            }
        }
    }
}

TEST_CASE("mcs table validation") {
    REQUIRE(mcs_table_valid(default_mcs_table()));
    REQUIRE_FALSE(mcs_table_valid(McsTable{}));
    // bits per slot must be strictly increasing
    REQUIRE_FALSE(mcs_table_valid(McsTable{{{1, 48, 6.0}, {2, 48, 8.5}}}));
    // thresholds must be strictly increasing
    REQUIRE_FALSE(mcs_table_valid(McsTable{{{1, 48, 6.0}, {2, 72, 6.0}}}));
    REQUIRE_FALSE(mcs_table_valid(McsTable{{{1, 0, 6.0}}}));
}

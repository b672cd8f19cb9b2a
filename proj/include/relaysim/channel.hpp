#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "relaysim/errors.hpp"
#include "relaysim/units.hpp"

namespace relaysim {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class Terrain { A, B, C };

struct TerrainConstants {
    double a;
    double b;
    double c;
};

// Standard SUI parameterization: A = dense urban, B = suburban, C = flat/rural.
inline TerrainConstants terrain_constants(Terrain t) {
    switch (t) {
        case Terrain::A: return {4.6, 0.0075, 12.6};
        case Terrain::B: return {4.0, 0.0065, 17.1};
        case Terrain::C: return {3.6, 0.005, 20.0};
    }
    return {4.0, 0.0065, 17.1};
}

struct ChannelConfig {
    double carrier_freq_mhz = 3500.0;
    double reference_dist_m = 100.0;  // d0
    Terrain terrain = Terrain::B;
    // Table-1's -100 dBm noise entry read as total in-band noise over a
    // nominal 7 MHz channel: -100 - 10*log10(7e6) dBm/Hz. The -100 dBm/Hz
    // density reading puts every generated link 3+ orders of magnitude past
    // the 1 W transmit cap, which flattens MCS selection entirely.
    double noise_density_dbm_per_hz = -100.0 - 10.0 * std::log10(7.0e6);
    bool shadowing_enabled = false;
    double shadowing_sigma_db = 9.6;

    double noise_density_mw_per_hz() const { return dbm_to_mw(noise_density_dbm_per_hz); }

    bool operator==(const ChannelConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Modulation / coding schemes
// ---------------------------------------------------------------------------

struct McsLevel {
    int index = 0;
    int bits_per_slot = 0;       // D(k)
    double snr_threshold_db = 0; // delta(k)

    bool operator==(const McsLevel&) const = default;
};

struct McsTable {
    std::vector<McsLevel> levels;

    bool operator==(const McsTable&) const = default;
};

// Representative OFDMA-style ladder; the table is config-overridable and
// everything downstream depends only on the configured values.
inline McsTable default_mcs_table() {
    return McsTable{{
        {1, 48, 6.0},
        {2, 72, 8.5},
        {3, 96, 11.5},
        {4, 144, 15.0},
        {5, 192, 19.0},
        {6, 216, 21.0},
    }};
}

inline bool mcs_table_valid(const McsTable& t) {
    if (t.levels.empty()) return false;
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
        if (t.levels[i].bits_per_slot <= 0) return false;
        if (i > 0) {
            if (t.levels[i].index <= t.levels[i - 1].index) return false;
            if (t.levels[i].bits_per_slot <= t.levels[i - 1].bits_per_slot) return false;
            if (t.levels[i].snr_threshold_db <= t.levels[i - 1].snr_threshold_db) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Link budget math
// ---------------------------------------------------------------------------

struct LinkBudget {
    double path_loss_db = 0.0;
    double path_loss_linear = 1.0;           // L = 10^(path_loss_db/10)
    double gain_product_linear = 1.0;        // G_i * G_j
    double noise_plus_interference_mw = 0.0; // B*N0 + I

    static LinkBudget from_db(double pl_db, double gain_product_linear, double npi_mw) {
        return {pl_db, db_to_linear(pl_db), gain_product_linear, npi_mw};
    }
};

// SUI path loss in dB:
//   PL = A + 10*gamma*log10(d/d0) + Xf + Xh (+ shadow)
//   A = 20*log10(4*pi*d0/lambda), gamma = a - b*hb + c/hb,
//   Xf = 6*log10(f/2000),  Xh = -10.8*log10(hr/2)  (-20*log10(hr/2) terrain C)
// hb is the taller endpoint, hr the shorter; links are reused in MS->RS and
// RS->RS roles, so the role assignment follows height, not direction.
inline double sui_path_loss_db(const ChannelConfig& cc, double distance_m,
                               double base_height_m, double remote_height_m,
                               double shadow_db = 0.0) {
    if (distance_m < cc.reference_dist_m) {
        throw SimError(ErrorCode::BelowReferenceDistance,
                       "distance " + std::to_string(distance_m) + " m below d0 " +
                           std::to_string(cc.reference_dist_m) + " m");
    }
    const double hb = std::max(base_height_m, remote_height_m);
    const double hr = std::min(base_height_m, remote_height_m);
    const TerrainConstants tc = terrain_constants(cc.terrain);

    const double lambda_m = speed_of_light_m_s / (cc.carrier_freq_mhz * 1e6);
    const double a_intercept = 20.0 * std::log10(4.0 * M_PI * cc.reference_dist_m / lambda_m);
    const double gamma = tc.a - tc.b * hb + tc.c / hb;
    const double xf = 6.0 * std::log10(cc.carrier_freq_mhz / 2000.0);
    const double xh = (cc.terrain == Terrain::C) ? -20.0 * std::log10(hr / 2.0)
                                                 : -10.8 * std::log10(hr / 2.0);

    return a_intercept + 10.0 * gamma * std::log10(distance_m / cc.reference_dist_m) + xf + xh +
           shadow_db;
}

// Received signal power at the far end: G_i * G_j * P_i / L(i,j).
inline double received_power_mw(double tx_power_mw, double gain_tx_linear, double gain_rx_linear,
                                double path_loss_linear) {
    return gain_tx_linear * gain_rx_linear * tx_power_mw / path_loss_linear;
}

// Sum of co-frame received powers at the receiver; the caller excludes the
// subject transmitter (and, per the frame model, the receiver itself).
inline double interference_mw(std::span<const double> other_received_powers_mw) {
    return std::accumulate(other_received_powers_mw.begin(), other_received_powers_mw.end(), 0.0);
}

// Transmit power that hits the SNR threshold exactly at the receiver:
//   10^(delta/10) * (B*N0 + I) * L / (G_i*G_j)
inline double required_tx_power_mw(const McsLevel& level, double bandwidth_hz,
                                   double noise_density_mw_per_hz, double interference_mw,
                                   double path_loss_linear, double gain_product_linear) {
    const double npi = bandwidth_hz * noise_density_mw_per_hz + interference_mw;
    return db_to_linear(level.snr_threshold_db) * npi * path_loss_linear / gain_product_linear;
}

// Highest-index level whose required power fits the transmit cap.
inline std::optional<McsLevel> select_mcs(const McsTable& table, const LinkBudget& budget,
                                          double tx_power_max_mw) {
    std::optional<McsLevel> best;
    for (const McsLevel& level : table.levels) {
        const double p = db_to_linear(level.snr_threshold_db) * budget.noise_plus_interference_mw *
                         budget.path_loss_linear / budget.gain_product_linear;
        if (p <= tx_power_max_mw) best = level;
    }
    return best;
}

}  // namespace relaysim

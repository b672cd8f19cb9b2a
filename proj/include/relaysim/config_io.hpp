#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relaysim/csv.hpp"
#include "relaysim/sim_config.hpp"

namespace relaysim {

struct ConfigError {
    enum class Kind { Syntax, UnknownSection, UnknownKey, BadValue, OutOfRange };
    Kind kind = Kind::Syntax;
    int line = 0;  // 0 = not tied to a line (overrides, cross-field checks)
    std::string key;
    std::string message;

    std::string to_string() const {
        std::string k;
        switch (kind) {
            case Kind::Syntax: k = "syntax error"; break;
            case Kind::UnknownSection: k = "unknown section"; break;
            case Kind::UnknownKey: k = "unknown key"; break;
            case Kind::BadValue: k = "bad value"; break;
            case Kind::OutOfRange: k = "out of range"; break;
        }
        std::string out = k;
        if (line > 0) out += " at line " + std::to_string(line);
        if (!key.empty()) out += " [" + key + "]";
        out += ": " + message;
        return out;
    }
};

struct ParseResult {
    SimConfig config;
    std::vector<ConfigError> errors;

    bool ok() const { return errors.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline bool parse_i64(const std::string& s, std::int64_t& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && p == t.data() + t.size();
}

inline bool parse_u64(const std::string& s, std::uint64_t& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && p == t.data() + t.size();
}

inline bool parse_f64(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

inline bool parse_bool(const std::string& s, bool& out) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "on") { out = true; return true; }
    if (t == "false" || t == "0" || t == "off") { out = false; return true; }
    return false;
}

using SetError = std::optional<std::pair<ConfigError::Kind, std::string>>;

struct KeyHandler {
    std::string section;
    std::string key;
    std::function<SetError(SimConfig&, const std::string&)> set;
    std::function<std::string(const SimConfig&)> get;
};

inline SetError bad(const std::string& msg) {
    return std::make_pair(ConfigError::Kind::BadValue, msg);
}
inline SetError range(const std::string& msg) {
    return std::make_pair(ConfigError::Kind::OutOfRange, msg);
}

inline std::string serialize_mcs(const McsTable& t) {
    std::string out;
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(t.levels[i].index) + ":" +
               std::to_string(t.levels[i].bits_per_slot) + ":" +
               format_double(t.levels[i].snr_threshold_db);
    }
    return out;
}

inline bool parse_mcs(const std::string& s, McsTable& out) {
    McsTable table;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) return false;
        const std::size_t c1 = item.find(':');
        const std::size_t c2 = item.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) return false;
        std::int64_t idx = 0, bits = 0;
        double snr = 0.0;
        if (!parse_i64(item.substr(0, c1), idx)) return false;
        if (!parse_i64(item.substr(c1 + 1, c2 - c1 - 1), bits)) return false;
        if (!parse_f64(item.substr(c2 + 1), snr)) return false;
        table.levels.push_back({static_cast<int>(idx), static_cast<int>(bits), snr});
    }
    if (!mcs_table_valid(table)) return false;
    out = std::move(table);
    return true;
}

// The single source of truth for the config surface: every key's parser,
// range check and canonical serialization.
inline const std::vector<KeyHandler>& key_handlers() {
    static const std::vector<KeyHandler> handlers = [] {
        std::vector<KeyHandler> h;

        auto add_i64 = [&h](const char* sec, const char* key, auto member, std::int64_t lo,
                            std::int64_t hi) {
            h.push_back({sec, key,
                         [member, lo, hi](SimConfig& c, const std::string& v) -> SetError {
                             std::int64_t x = 0;
                             if (!parse_i64(v, x)) return bad("expected an integer");
                             if (x < lo || x > hi)
                                 return range("must be in [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "]");
                             c.*member = static_cast<std::remove_reference_t<decltype(c.*member)>>(x);
                             return std::nullopt;
                         },
                         [member](const SimConfig& c) {
                             return format_int(static_cast<std::int64_t>(c.*member));
                         }});
        };
        auto add_bool = [&h](const char* sec, const char* key, auto member) {
            h.push_back({sec, key,
                         [member](SimConfig& c, const std::string& v) -> SetError {
                             bool x = false;
                             if (!parse_bool(v, x)) return bad("expected true/false");
                             c.*member = x;
                             return std::nullopt;
                         },
                         [member](const SimConfig& c) {
                             return std::string(c.*member ? "true" : "false");
                         }});
        };

        const double inf = std::numeric_limits<double>::infinity();
        using TC = TopologyConfig;
        auto add_tc_i = [&h](const char* key, int TC::*member, std::int64_t lo, std::int64_t hi) {
            h.push_back({"topology", key,
                         [member, lo, hi](SimConfig& c, const std::string& v) -> SetError {
                             std::int64_t x = 0;
                             if (!parse_i64(v, x)) return bad("expected an integer");
                             if (x < lo || x > hi)
                                 return range("must be in [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "]");
                             c.topology.*member = static_cast<int>(x);
                             return std::nullopt;
                         },
                         [member](const SimConfig& c) {
                             return format_int(c.topology.*member);
                         }});
        };
        auto add_tc_f = [&h, inf](const char* key, double TC::*member, double lo,
                                  double hi = 0.0) {
            const double high = hi == 0.0 ? inf : hi;
            h.push_back({"topology", key,
                         [member, lo, high](SimConfig& c, const std::string& v) -> SetError {
                             double x = 0;
                             if (!parse_f64(v, x)) return bad("expected a number");
                             if (x < lo || x > high)
                                 return range("must be >= " + format_double(lo));
                             c.topology.*member = x;
                             return std::nullopt;
                         },
                         [member](const SimConfig& c) { return format_double(c.topology.*member); }});
        };

        add_tc_i("n_rs", &TC::n_rs, 0, 100000);
        add_tc_i("n_ms", &TC::n_ms, 0, 100000);
        add_tc_f("deployment_radius_m", &TC::deployment_radius_m, 1e-9);
        add_tc_f("d_min_m", &TC::d_min_m, 0.0);
        add_tc_f("d_max_m", &TC::d_max_m, 0.0);
        add_tc_f("bw_min_hz", &TC::bw_min_hz, 1e-9);
        add_tc_f("bw_max_hz", &TC::bw_max_hz, 1e-9);
        h.push_back({"topology", "transparent_fraction",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x = 0;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         if (x < 0.0 || x > 1.0) return range("must be in [0, 1]");
                         c.topology.transparent_fraction = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) {
                         return format_double(c.topology.transparent_fraction);
                     }});
        add_tc_f("bs_height_m", &TC::bs_height_m, 1e-9);
        add_tc_f("rs_height_m", &TC::rs_height_m, 1e-9);
        add_tc_f("ms_height_m", &TC::ms_height_m, 1e-9);
        h.push_back({"topology", "bs_rs_gain_min_db",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         c.topology.bs_rs_gain_min_db = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.topology.bs_rs_gain_min_db); }});
        h.push_back({"topology", "bs_rs_gain_max_db",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         c.topology.bs_rs_gain_max_db = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.topology.bs_rs_gain_max_db); }});
        h.push_back({"topology", "ms_gain_min_db",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         c.topology.ms_gain_min_db = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.topology.ms_gain_min_db); }});
        h.push_back({"topology", "ms_gain_max_db",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         c.topology.ms_gain_max_db = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.topology.ms_gain_max_db); }});
        add_tc_f("tx_power_max_mw", &TC::tx_power_max_mw, 1e-12);
        add_tc_i("max_routes_per_ms", &TC::max_routes_per_ms, 1, 1000000);
        h.push_back({"topology", "file",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         c.topology_file = trim(v);
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return c.topology_file; }});

        // [channel]
        h.push_back({"channel", "carrier_freq_mhz",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         if (x <= 0.0) return range("must be positive");
                         c.channel.carrier_freq_mhz = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.channel.carrier_freq_mhz); }});
        h.push_back({"channel", "reference_dist_m",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         if (x <= 0.0) return range("must be positive");
                         c.channel.reference_dist_m = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.channel.reference_dist_m); }});
        h.push_back({"channel", "terrain",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         const std::string t = trim(v);
                         if (t == "A") c.channel.terrain = Terrain::A;
                         else if (t == "B") c.channel.terrain = Terrain::B;
                         else if (t == "C") c.channel.terrain = Terrain::C;
                         else return bad("expected A, B or C");
                         return std::nullopt;
                     },
                     [](const SimConfig& c) {
                         switch (c.channel.terrain) {
                             case Terrain::A: return std::string("A");
                             case Terrain::B: return std::string("B");
                             case Terrain::C: return std::string("C");
                         }
                         return std::string("B");
                     }});
        h.push_back({"channel", "noise_density_dbm_per_hz",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         c.channel.noise_density_dbm_per_hz = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) {
                         return format_double(c.channel.noise_density_dbm_per_hz);
                     }});
        h.push_back({"channel", "shadowing_enabled",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         bool x;
                         if (!parse_bool(v, x)) return bad("expected true/false");
                         c.channel.shadowing_enabled = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) {
                         return std::string(c.channel.shadowing_enabled ? "true" : "false");
                     }});
        h.push_back({"channel", "shadowing_sigma_db",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         if (x < 0.0) return range("must be non-negative");
                         c.channel.shadowing_sigma_db = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.channel.shadowing_sigma_db); }});

        // [mcs]
        h.push_back({"mcs", "levels",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         McsTable t;
                         if (!parse_mcs(v, t))
                             return bad("expected strictly increasing index:bits:snr triples");
                         c.mcs = std::move(t);
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return serialize_mcs(c.mcs); }});

        // [frame]
        h.push_back({"frame", "frame_duration_s",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         double x;
                         if (!parse_f64(v, x)) return bad("expected a number");
                         if (x <= 0.0) return range("must be positive");
                         c.frame.frame_duration_s = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_double(c.frame.frame_duration_s); }});
        h.push_back({"frame", "slots_per_frame",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         std::int64_t x;
                         if (!parse_i64(v, x)) return bad("expected an integer");
                         if (x < 1) return range("must be >= 1");
                         c.frame.slots_per_frame = static_cast<int>(x);
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_int(c.frame.slots_per_frame); }});

        // [bco]
        auto add_bco = [&h](const char* key, int BcoParams::*member, std::int64_t lo) {
            h.push_back({"bco", key,
                         [member, lo](SimConfig& c, const std::string& v) -> SetError {
                             std::int64_t x;
                             if (!parse_i64(v, x)) return bad("expected an integer");
                             if (x < lo) return range("must be >= " + std::to_string(lo));
                             c.bco.*member = static_cast<int>(x);
                             return std::nullopt;
                         },
                         [member](const SimConfig& c) { return format_int(c.bco.*member); }});
        };
        add_bco("n_bees", &BcoParams::n_bees, 1);
        add_bco("max_inner_steps", &BcoParams::max_inner_steps, 0);  // 0 = 2 * n_ms
        add_bco("max_iterations", &BcoParams::max_iterations, 1);
        add_bco("stagnation_limit", &BcoParams::stagnation_limit, 1);
        add_bco("elite_count", &BcoParams::elite_count, 1);

        // [sim]
        h.push_back({"sim", "scenario",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         const std::string t = trim(v);
                         if (t == "3hop") c.scenario = Scenario::ThreeHop;
                         else if (t == "4hop") c.scenario = Scenario::FourHop;
                         else if (t == "5hop") c.scenario = Scenario::FiveHop;
                         else return bad("expected 3hop, 4hop or 5hop");
                         return std::nullopt;
                     },
                     [](const SimConfig& c) {
                         return std::string(c.scenario == Scenario::ThreeHop   ? "3hop"
                                            : c.scenario == Scenario::FourHop ? "4hop"
                                                                              : "5hop");
                     }});
        add_i64("sim", "n_frames", &SimConfig::n_frames, 1, 100000000);
        h.push_back({"sim", "seed",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         std::uint64_t x;
                         if (!parse_u64(v, x)) return bad("expected a non-negative integer");
                         c.seed = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_uint(c.seed); }});
        add_i64("sim", "re_route_interval", &SimConfig::re_route_interval, 0, 100000000);
        h.push_back({"sim", "demand_min_bits",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         std::int64_t x;
                         if (!parse_i64(v, x)) return bad("expected an integer");
                         if (x < 0) return range("must be non-negative");
                         c.demand_min_bits = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_int(c.demand_min_bits); }});
        h.push_back({"sim", "demand_max_bits",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         std::int64_t x;
                         if (!parse_i64(v, x)) return bad("expected an integer");
                         if (x < 0) return range("must be non-negative");
                         c.demand_max_bits = x;
                         return std::nullopt;
                     },
                     [](const SimConfig& c) { return format_int(c.demand_max_bits); }});
        h.push_back({"sim", "dist_rule",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         const std::string t = trim(v);
                         if (t == "bottleneck") c.dist_rule = DistRule::Bottleneck;
                         else if (t == "first_hop") c.dist_rule = DistRule::FirstHop;
                         else return bad("expected bottleneck or first_hop");
                         return std::nullopt;
                     },
                     [](const SimConfig& c) {
                         return std::string(c.dist_rule == DistRule::Bottleneck ? "bottleneck"
                                                                                : "first_hop");
                     }});
        add_bool("sim", "normalize_fitness", &SimConfig::normalize_fitness);
        h.push_back({"sim", "baseline_weight",
                     [](SimConfig& c, const std::string& v) -> SetError {
                         const std::string t = trim(v);
                         if (t == "distance") c.baseline_weight = BaselineWeight::Distance;
                         else if (t == "energy") c.baseline_weight = BaselineWeight::Energy;
                         else return bad("expected distance or energy");
                         return std::nullopt;
                     },
                     [](const SimConfig& c) {
                         return std::string(c.baseline_weight == BaselineWeight::Distance
                                                ? "distance"
                                                : "energy");
                     }});
        return h;
    }();
    return handlers;
}

inline const KeyHandler* find_handler(const std::string& section, const std::string& key) {
    for (const KeyHandler& h : key_handlers())
        if (h.section == section && h.key == key) return &h;
    return nullptr;
}

inline bool known_section(const std::string& section) {
    for (const KeyHandler& h : key_handlers())
        if (h.section == section) return true;
    return false;
}

}  // namespace detail

// Cross-field checks that no single key can validate alone.
inline std::vector<ConfigError> validate_config(const SimConfig& c) {
    std::vector<ConfigError> out;
    auto err = [&out](const std::string& key, const std::string& msg) {
        out.push_back({ConfigError::Kind::OutOfRange, 0, key, msg});
    };
    if (c.topology.d_min_m > c.topology.d_max_m)
        err("topology.d_min_m", "d_min_m exceeds d_max_m");
    if (c.topology.bw_min_hz > c.topology.bw_max_hz)
        err("topology.bw_min_hz", "bw_min_hz exceeds bw_max_hz");
    if (c.topology.bs_rs_gain_min_db > c.topology.bs_rs_gain_max_db)
        err("topology.bs_rs_gain_min_db", "gain range is inverted");
    if (c.topology.ms_gain_min_db > c.topology.ms_gain_max_db)
        err("topology.ms_gain_min_db", "gain range is inverted");
    if (c.demand_min_bits > c.demand_max_bits)
        err("sim.demand_min_bits", "demand range is inverted");
    if (c.bco.elite_count > c.bco.n_bees)
        err("bco.elite_count", "elite_count exceeds n_bees");
    if (c.topology.d_min_m > 2.0 * c.topology.deployment_radius_m)
        err("topology.d_min_m", "no link can fit inside the deployment disc");
    return out;
}

// Flat sectioned key = value format. '#' lines are comments; an empty file
// parses to the full default configuration.
inline ParseResult parse_config(const std::string& text) {
    ParseResult out;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                out.errors.push_back({ConfigError::Kind::Syntax, line_no, "",
                                      "unterminated section header"});
                continue;
            }
            section = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::known_section(section))
                out.errors.push_back(
                    {ConfigError::Kind::UnknownSection, line_no, section, "'" + section + "'"});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            out.errors.push_back(
                {ConfigError::Kind::Syntax, line_no, "", "expected key = value"});
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) {
            out.errors.push_back(
                {ConfigError::Kind::Syntax, line_no, key, "key before any [section]"});
            continue;
        }
        if (!detail::known_section(section)) continue;  // already reported
        const detail::KeyHandler* handler = detail::find_handler(section, key);
        if (!handler) {
            out.errors.push_back({ConfigError::Kind::UnknownKey, line_no, section + "." + key,
                                  "'" + key + "' in [" + section + "]"});
            continue;
        }
        if (auto err = handler->set(out.config, value)) {
            out.errors.push_back({err->first, line_no, section + "." + key, err->second});
        }
    }
    for (const ConfigError& e : validate_config(out.config)) out.errors.push_back(e);
    return out;
}

// "section.key=value", the CLI override form. Unknown keys are rejected.
inline std::optional<ConfigError> apply_override(SimConfig& cfg, const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        return ConfigError{ConfigError::Kind::Syntax, 0, spec, "expected section.key=value"};
    const std::string path = detail::trim(spec.substr(0, eq));
    const std::string value = detail::trim(spec.substr(eq + 1));
    const std::size_t dot = path.find('.');
    if (dot == std::string::npos)
        return ConfigError{ConfigError::Kind::Syntax, 0, path, "expected section.key=value"};
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    const detail::KeyHandler* handler = detail::find_handler(section, key);
    if (!handler)
        return ConfigError{ConfigError::Kind::UnknownKey, 0, path, "'" + path + "'"};
    if (auto err = handler->set(cfg, value))
        return ConfigError{err->first, 0, path, err->second};
    return std::nullopt;
}

// Canonical text: every key in registry order. parse(serialize(c)) == c.
inline std::string serialize_config(const SimConfig& cfg) {
    std::string out;
    std::string section;
    for (const detail::KeyHandler& h : detail::key_handlers()) {
        if (h.section != section) {
            if (!out.empty()) out += "\n";
            out += "[" + h.section + "]\n";
            section = h.section;
        }
        out += h.key + " = " + h.get(cfg) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Topology replay files
// ---------------------------------------------------------------------------

// station = <id> <kind> <x> <y> <height_m> <gain_db> <pmax_mw>
// link    = <from> <to> <bandwidth_hz>            (distance from positions)
inline std::string serialize_topology(const Topology& t) {
    std::string out = "[stations]\n";
    for (const Station& s : t.stations) {
        out += "station = " + format_int(s.id) + " " + to_string(s.kind) + " " +
               format_double(s.x_m) + " " + format_double(s.y_m) + " " +
               format_double(s.antenna_height_m) + " " + format_double(s.antenna_gain_db) + " " +
               format_double(s.tx_power_max_mw) + "\n";
    }
    out += "\n[links]\n";
    for (const Link& l : t.links) {
        out += "link = " + format_int(l.from) + " " + format_int(l.to) + " " +
               format_double(l.bandwidth_hz) + "\n";
    }
    return out;
}

inline Topology parse_topology(const std::string& text) {
    Topology t;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    auto fail = [&line_no](const std::string& msg) {
        throw SimError(ErrorCode::BadArgument,
                       "topology file line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == '[') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        std::istringstream fields(line.substr(eq + 1));
        if (key == "station") {
            Station s;
            std::string kind;
            if (!(fields >> s.id >> kind >> s.x_m >> s.y_m >> s.antenna_height_m >>
                  s.antenna_gain_db >> s.tx_power_max_mw))
                fail("expected: id kind x y height gain_db pmax_mw");
            if (kind == "bs") s.kind = StationKind::BaseStation;
            else if (kind == "trs") s.kind = StationKind::TransparentRS;
            else if (kind == "ntrs") s.kind = StationKind::NonTransparentRS;
            else if (kind == "ms") s.kind = StationKind::MobileStation;
            else fail("unknown station kind '" + kind + "'");
            t.stations.push_back(s);
        } else if (key == "link") {
            Link l;
            if (!(fields >> l.from >> l.to >> l.bandwidth_hz))
                fail("expected: from to bandwidth_hz");
            t.links.push_back(l);
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    std::sort(t.stations.begin(), t.stations.end(),
              [](const Station& a, const Station& b) { return a.id < b.id; });
    int n_bs = 0;
    for (std::size_t i = 0; i < t.stations.size(); ++i) {
        if (i > 0 && t.stations[i].id == t.stations[i - 1].id)
            throw SimError(ErrorCode::BadArgument,
                           "duplicate station id " + std::to_string(t.stations[i].id));
        if (t.stations[i].kind == StationKind::BaseStation) ++n_bs;
    }
    if (n_bs != 1)
        throw SimError(ErrorCode::BadArgument, "topology needs exactly one base station");
    for (Link& l : t.links) {
        const Station* a = t.find_station(l.from);
        const Station* b = t.find_station(l.to);
        if (!a || !b)
            throw SimError(ErrorCode::BadArgument,
                           "link references unknown station " +
                               std::to_string(!a ? l.from : l.to));
        if (!direction_legal(a->kind, b->kind))
            throw SimError(ErrorCode::BadArgument,
                           "link " + std::to_string(l.from) + "->" + std::to_string(l.to) +
                               " violates the direction rules");
        if (l.bandwidth_hz <= 0.0)
            throw SimError(ErrorCode::BadArgument, "link bandwidth must be positive");
        l.distance_m = station_distance_m(*a, *b);
    }
    std::sort(t.links.begin(), t.links.end(), [](const Link& a, const Link& b) {
        return std::pair{a.from, a.to} < std::pair{b.from, b.to};
    });
    return t;
}

inline Topology parse_topology_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw SimError(ErrorCode::BadArgument, "cannot open topology file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_topology(ss.str());
}

}  // namespace relaysim

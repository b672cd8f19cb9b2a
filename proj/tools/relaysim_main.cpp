// relaysim command-line front end.
//
// Subcommands:
//   run              one algorithm over one configuration, per-frame CSV
//   compare          EBCD and Dijkstra on a common topology/demand stream
//   sweep            axis sweep (ms_count or rs_count) of compare runs
//   validate-config  parse + validate a configuration, never simulates
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error,
// 3 sweep finished with at least one error row.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaysim/config_io.hpp"
#include "relaysim/csv.hpp"
#include "relaysim/simulator.hpp"

namespace {

using namespace relaysim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPartialSweep = 3;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string scenario;
    std::optional<int> ms;
    std::optional<int> rs;
    std::optional<int> frames;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    bool summary = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("--config", args.config_path, "configuration file (defaults when omitted)");
    cmd->add_option("--set", args.overrides, "override: section.key=value (repeatable)");
    cmd->add_option("--scenario", args.scenario, "3hop | 4hop | 5hop")
        ->check(CLI::IsMember({"3hop", "4hop", "5hop"}));
    cmd->add_option("--ms", args.ms, "mobile station count");
    cmd->add_option("--rs", args.rs, "relay station count");
    cmd->add_option("--frames", args.frames, "frames to simulate");
    cmd->add_option("--seed", args.seed, "master seed (sub-streams derive from it)");
    if (with_out) {
        cmd->add_option("--out", args.out_path, "CSV output path (stdout when omitted)");
        cmd->add_flag("--summary", args.summary, "print a human-readable summary to stdout");
    }
}

// config file -> --set overrides -> dedicated flags, last writer wins
int build_config(const CommonArgs& args, SimConfig& cfg) {
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) {
            std::cerr << "error: cannot open config file '" << args.config_path << "'\n";
            return kExitConfig;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        ParseResult parsed = parse_config(ss.str());
        if (!parsed.ok()) {
            for (const ConfigError& e : parsed.errors) std::cerr << "error: " << e.to_string() << "\n";
            return kExitConfig;
        }
        cfg = parsed.config;
    }
    for (const std::string& spec : args.overrides) {
        if (auto err = apply_override(cfg, spec)) {
            std::cerr << "error: " << err->to_string() << "\n";
            return kExitConfig;
        }
    }
    if (!args.scenario.empty()) {
        if (auto err = apply_override(cfg, "sim.scenario=" + args.scenario)) {
            std::cerr << "error: " << err->to_string() << "\n";
            return kExitConfig;
        }
    }
    if (args.ms) cfg.topology.n_ms = *args.ms;
    if (args.rs) cfg.topology.n_rs = *args.rs;
    if (args.frames) cfg.n_frames = *args.frames;
    if (args.seed) cfg.seed = *args.seed;
    const std::vector<ConfigError> errors = validate_config(cfg);
    if (!errors.empty()) {
        for (const ConfigError& e : errors) std::cerr << "error: " << e.to_string() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

class CsvSink {
  public:
    // opens the file when a path is given, stdout otherwise
    explicit CsvSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);  // binary: byte-identical across platforms
            if (!file_) throw SimError(ErrorCode::BadArgument, "cannot open '" + path + "'");
            out_ = &file_;
        } else {
            out_ = &std::cout;
        }
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) *out_ << ',';
            *out_ << cells[i];
        }
        *out_ << '\n';
    }

  private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

const std::vector<std::string> kFrameHeader = {
    "algorithm",       "frame_index",    "total_energy_mj",    "e_mr_mj",
    "e_rr_mj",         "e_rb_mj",        "slots_used",         "slots_demanded",
    "carried_over_bits", "power_capped_links"};

void write_frames(CsvSink& csv, const RunReport& report) {
    for (const FrameResult& f : report.frames) {
        csv.row({to_string(report.algorithm), format_int(f.frame_index),
                 format_double(f.total_energy_mj), format_double(f.per_class.e_mr_mj),
                 format_double(f.per_class.e_rr_mj), format_double(f.per_class.e_rb_mj),
                 format_int(f.slots_used), format_int(f.slots_demanded),
                 format_int(f.carried_over_bits), format_int(f.power_capped_links)});
    }
}

void summarize(std::ostream& os, const RunReport& r) {
    os << "  " << to_string(r.algorithm) << ": mean " << format_double(r.mean_energy_per_frame_mj)
       << " mJ/frame over " << r.frames.size() << " frames, " << r.unreachable_count
       << " unreachable MS, " << r.power_capped_total << " power-capped hop transmissions, routing "
       << format_double(r.routing_wallclock_s) << " s\n";
}

void warn_route_cap(const RunReport& r) {
    if (r.route_cap_hit)
        std::cerr << "note: per-MS candidate cap reached; shortest-distance candidates kept\n";
}

int cmd_run(const CommonArgs& args, const std::string& algo, const std::string& trace_path) {
    SimConfig cfg;
    if (int rc = build_config(args, cfg)) return rc;
    try {
        std::vector<RunReport> reports;
        if (algo == "both") {
            ComparisonReport c = compare(cfg);
            reports.push_back(std::move(c.ebcd));
            reports.push_back(std::move(c.baseline));
        } else {
            reports.push_back(run(cfg, algo == "ebcd" ? Algorithm::Ebcd : Algorithm::Dijkstra));
        }
        if (!args.summary || !args.out_path.empty()) {
            CsvSink csv(args.out_path);
            csv.row(kFrameHeader);
            for (const RunReport& r : reports) write_frames(csv, r);
        }
        if (!trace_path.empty()) {
            CsvSink trace(trace_path);
            trace.row({"iteration", "best_cost"});
            for (const RunReport& r : reports) {
                if (r.algorithm != Algorithm::Ebcd) continue;
                for (std::size_t i = 0; i < r.cost_trace.size(); ++i)
                    trace.row({format_int(static_cast<std::int64_t>(i) + 1),
                               format_double(r.cost_trace[i])});
            }
        }
        if (args.summary) {
            std::cout << "run: seed " << cfg.seed << ", " << cfg.topology.n_ms << " MS / "
                      << cfg.topology.n_rs << " RS, " << cfg.max_hops() << "-hop\n";
            for (const RunReport& r : reports) summarize(std::cout, r);
        }
        for (const RunReport& r : reports) warn_route_cap(r);
        return kExitOk;
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_compare(const CommonArgs& args) {
    SimConfig cfg;
    if (int rc = build_config(args, cfg)) return rc;
    try {
        ComparisonReport c = compare(cfg);
        if (!args.summary || !args.out_path.empty()) {
            CsvSink csv(args.out_path);
            csv.row(kFrameHeader);
            write_frames(csv, c.ebcd);
            write_frames(csv, c.baseline);
        }
        if (args.summary) {
            std::cout << "compare: seed " << cfg.seed << ", " << cfg.topology.n_ms << " MS / "
                      << cfg.topology.n_rs << " RS, " << cfg.max_hops() << "-hop\n";
            summarize(std::cout, c.ebcd);
            summarize(std::cout, c.baseline);
            std::cout << "  savings_percent = " << format_double(c.savings_percent) << "\n";
        }
        warn_route_cap(c.ebcd);
        return kExitOk;
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_sweep(const CommonArgs& args, const std::string& axis,
              const std::vector<std::int64_t>& values, int seeds_per_point) {
    SimConfig base;
    if (int rc = build_config(args, base)) return rc;
    if (values.empty()) {
        std::cerr << "error: --values must be a non-empty, strictly increasing list\n";
        return kExitConfig;
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) {
            std::cerr << "error: --values must be strictly increasing\n";
            return kExitConfig;
        }
    }
    if (seeds_per_point < 1) {
        std::cerr << "error: --seeds-per-point must be >= 1\n";
        return kExitConfig;
    }

    bool any_error = false;
    try {
        CsvSink csv(args.out_path);
        csv.row({"axis_value", "seed", "ebcd_mean_mj", "dijkstra_mean_mj", "savings_percent",
                 "power_capped", "unreachable"});
        for (std::int64_t value : values) {
            double sum_ebcd = 0, sum_base = 0, sum_savings = 0, sum_capped = 0, sum_unreach = 0;
            int ok_rows = 0;
            for (int rep = 0; rep < seeds_per_point; ++rep) {
                SimConfig cfg = base;
                if (axis == "ms_count") cfg.topology.n_ms = static_cast<int>(value);
                else cfg.topology.n_rs = static_cast<int>(value);
                const std::uint64_t point_seed =
                    derive_seed(base.seed, Stream::Sweep, static_cast<std::uint64_t>(value));
                cfg.seed = derive_seed(point_seed, Stream::Sweep,
                                       static_cast<std::uint64_t>(rep));
                try {
                    ComparisonReport c = compare(cfg);
                    const double capped = static_cast<double>(c.ebcd.power_capped_total +
                                                              c.baseline.power_capped_total);
                    csv.row({format_int(value), format_uint(cfg.seed),
                             format_double(c.ebcd.mean_energy_per_frame_mj),
                             format_double(c.baseline.mean_energy_per_frame_mj),
                             format_double(c.savings_percent), format_double(capped),
                             format_int(c.ebcd.unreachable_count)});
                    sum_ebcd += c.ebcd.mean_energy_per_frame_mj;
                    sum_base += c.baseline.mean_energy_per_frame_mj;
                    sum_savings += c.savings_percent;
                    sum_capped += capped;
                    sum_unreach += c.ebcd.unreachable_count;
                    ++ok_rows;
                } catch (const SimError& e) {
                    // error row: numeric fields empty, details on stderr
                    std::cerr << "error: sweep point " << axis << "=" << value << " rep " << rep
                              << ": " << e.what() << "\n";
                    csv.row({format_int(value), format_uint(cfg.seed), "", "", "", "", ""});
                    any_error = true;
                }
            }
            // per-axis-value mean row: seed column empty
            if (ok_rows > 0) {
                csv.row({format_int(value), "", format_double(sum_ebcd / ok_rows),
                         format_double(sum_base / ok_rows), format_double(sum_savings / ok_rows),
                         format_double(sum_capped / ok_rows),
                         format_double(sum_unreach / ok_rows)});
            } else {
                csv.row({format_int(value), "", "", "", "", "", ""});
            }
        }
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return any_error ? kExitPartialSweep : kExitOk;
}

int cmd_validate(const CommonArgs& args) {
    SimConfig cfg;
    if (int rc = build_config(args, cfg)) return rc;
    std::cout << "ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relay uplink energy simulator: bee-colony routing vs a Dijkstra baseline"};
    app.require_subcommand(1);

    CommonArgs run_args;
    std::string run_algo = "ebcd";
    std::string run_trace;
    CLI::App* run_cmd = app.add_subcommand("run", "simulate one algorithm, emit per-frame CSV");
    add_common(run_cmd, run_args);
    run_cmd->add_option("--algo", run_algo, "ebcd | dijkstra | both")
        ->check(CLI::IsMember({"ebcd", "dijkstra", "both"}));
    run_cmd->add_option("--trace", run_trace, "write the optimizer cost trace CSV here");

    CommonArgs compare_args;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "both algorithms, common topology and demands");
    add_common(compare_cmd, compare_args);

    CommonArgs sweep_args;
    std::string sweep_axis = "ms_count";
    std::vector<std::int64_t> sweep_values;
    int seeds_per_point = 1;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "compare across an axis of counts");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--axis", sweep_axis, "ms_count | rs_count")
        ->check(CLI::IsMember({"ms_count", "rs_count"}));
    sweep_cmd->add_option("--values", sweep_values, "axis values, strictly increasing")
        ->delimiter(',');
    sweep_cmd->add_option("--seeds-per-point", seeds_per_point, "independent seeds per value");

    CommonArgs validate_args;
    CLI::App* validate_cmd =
        app.add_subcommand("validate-config", "parse and validate, never simulate");
    add_common(validate_cmd, validate_args, /*with_out=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    if (run_cmd->parsed()) return cmd_run(run_args, run_algo, run_trace);
    if (compare_cmd->parsed()) return cmd_compare(compare_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, sweep_axis, sweep_values, seeds_per_point);
    if (validate_cmd->parsed()) return cmd_validate(validate_args);
    return kExitConfig;
}

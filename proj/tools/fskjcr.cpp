// Experiment driver. Every subcommand writes its outputs plus a resolved
// config (<command>_config.json) into --out-dir; feeding that file back via
// --config reruns the experiment.
//
// Exit codes: 0 success, 2 input error, 3 budget or precondition error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fskjcr/ambiguity.hpp"
#include "fskjcr/comms_sim.hpp"
#include "fskjcr/error.hpp"
#include "fskjcr/io.hpp"
#include "fskjcr/phase_optimizer.hpp"
#include "fskjcr/sidelobe_stats.hpp"
#include "fskjcr/waveform.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fskjcr;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

// Raised for missing prerequisites such as a phase table.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out_dir = "out";
    std::string config;
};

struct SpecArgs {
    int L = 4;
    int M = 2;
    double T = 1.0;
    int freq_step = 1;

    void add(CLI::App* app)
    {
        app->add_option("--L", L, "Number of sub-pulses");
        app->add_option("--M", M, "Modulation order (number of tones)");
        app->add_option("--T", T, "Sub-pulse duration in seconds");
        app->add_option("--freq-step", freq_step, "Tone spacing as a multiple of 1/T");
    }
    WaveformSpec spec() const { return make_spec(L, M, T, freq_step); }
};

struct AfArgs {
    SpecArgs spec;
    std::string waveform;
    std::string index = "0";
    std::string phase_table;
    int oversampling = 16;
};

struct SlArgs {
    SpecArgs spec;
    std::string k0_mode = "exact";
    bool paper_pmf = false;
    bool pmf = false;
    std::uint64_t mc = 0;
    bool local_maxima = false;
    int oversampling = 16;
    std::uint64_t budget = kDefaultEnumerationBudget;
};

struct OptArgs {
    SpecArgs spec;
    bool all = false;
    std::int64_t sample = -1;
    std::vector<std::string> indices;
    int restarts = 10;
    int max_iterations = 500;
    double tolerance = 1e-10;
};

struct SerArgs {
    SpecArgs spec;
    std::vector<std::string> detectors{"coherent-before", "noncoherent-after"};
    std::string channel = "awgn";
    int antennas = 1;
    double rician_k = 1.0;
    std::vector<double> snr{0, 2, 4, 6, 8, 10, 12, 14, 16};
    std::int64_t trials = 10000;
    std::string phase_table;
};

struct PaprArgs {
    SpecArgs spec;
    std::string waveform;
    std::string index = "0";
    std::string phase_table;
    double sample_rate = 0.0;
};

// Turns a JSON config into argv tokens. Keys are long option names without
// the leading dashes; "command" picks the subcommand when none is given.
std::vector<std::string> config_tokens(const json& cfg, const std::set<std::string>& skip,
                                       const std::set<std::string>& allowed)
{
    std::vector<std::string> out;
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command" || key == "config" || skip.count(key) || !allowed.count(key)) continue;
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back(flag);
            continue;
        }
        if (value.is_null()) continue;
        out.push_back(flag);
        const auto push = [&](const json& v) {
            out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        };
        if (value.is_array()) {
            for (const auto& v : value) push(v);
        } else {
            push(value);
        }
    }
    return out;
}

std::set<std::string> long_names(const CLI::App* app)
{
    std::set<std::string> names;
    for (const CLI::Option* opt : app->get_options())
        for (const auto& n : opt->get_lnames()) names.insert(n);
    return names;
}

std::set<std::string> given_on_command_line(const std::vector<std::string>& args)
{
    std::set<std::string> given;
    for (const auto& a : args) {
        if (a.rfind("--", 0) != 0) continue;
        given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    }
    return given;
}

json option_value(const CLI::Option* opt)
{
    const bool is_flag = opt->get_expected_min() == 0;
    if (is_flag) return opt->count() > 0;
    std::vector<std::string> raw = opt->count() > 0 ? opt->results() : std::vector<std::string>{};
    bool list = opt->get_expected_max() > 1;
    if (raw.empty()) {
        const std::string d = opt->get_default_str();
        if (d.empty()) return nullptr;
        if (d == "{}" || d == "[]") return json::array();
        if (d.front() == '[' && d.back() == ']') {
            // CLI11 renders vector defaults as [a,b,c]
            std::stringstream items(d.substr(1, d.size() - 2));
            for (std::string item; std::getline(items, item, ',');) raw.push_back(item);
            list = true;
        } else {
            raw.push_back(d);
        }
    }
    const auto convert = [](const std::string& s) -> json {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) {
                if (s.find_first_of(".eE") == std::string::npos && std::abs(v) < 9e15)
                    return static_cast<std::int64_t>(std::stoll(s));
                return v;
            }
        } catch (...) {
        }
        return s;
    };
    if (list || raw.size() > 1) {
        json arr = json::array();
        for (const auto& s : raw) arr.push_back(convert(s));
        return arr;
    }
    return convert(raw.front());
}

json resolved_config(const CLI::App& app, const CLI::App* sub)
{
    json cfg;
    cfg["command"] = sub->get_name();
    for (const CLI::App* a : {&app, sub})
        for (const CLI::Option* opt : a->get_options()) {
            if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" || opt->get_lnames().front() == "config")
                continue;
            cfg[opt->get_lnames().front()] = option_value(opt);
        }
    return cfg;
}

FskWaveform load_waveform(const std::string& path, const SpecArgs& spec_args, const std::string& index,
                          const std::string& phase_table)
{
    if (!path.empty()) return io::waveform_from_json(io::read_json(path));
    const WaveformSpec spec = spec_args.spec();
    FskWaveform w(spec, index_string_to_freq_sequence(spec, index));
    if (!phase_table.empty()) {
        const PhaseTable table = io::phase_table_from_json(io::read_json(phase_table));
        const auto* phases = table.find(w.freq_indices());
        if (phases == nullptr) throw io::InputError("phase table has no entry for waveform " + index);
        w = w.with_phases(*phases);
    }
    return w;
}

std::vector<double> lattice_axis(int half_count, double step)
{
    std::vector<double> axis;
    for (int i = -half_count; i <= half_count; ++i) axis.push_back(step * i);
    return axis;
}

int run_af(const Globals& g, const AfArgs& a, const fs::path& out)
{
    const FskWaveform w = load_waveform(a.waveform, a.spec, a.index, a.phase_table);
    const WaveformSpec& spec = w.spec();
    const AfSurface surface = sampled_af_surface(w, a.oversampling, true, g.threads);
    io::write_text(out / "af_surface.csv", io::surface_csv(surface));

    const auto taus = lattice_axis(surface.delay_max(), spec.subpulse_duration / a.oversampling);
    io::write_text(out / "af_zero_doppler.csv", io::cut_csv("tau_seconds", taus, zero_doppler_cut(w, taus)));
    const auto omegas = lattice_axis(surface.doppler_max(), spec.omega_step() / a.oversampling);
    io::write_text(out / "af_zero_delay.csv", io::cut_csv("omega_rad_per_s", omegas, zero_delay_cut(spec, omegas)));

    const double grid = grid_psl(w);
    const double grid_before = grid_psl(w.without_phases());
    const double local = a.oversampling >= 8 ? local_maxima_psl(surface) : std::nan("");
    json summary{{"L", spec.num_subpulses},
                 {"M", spec.mod_order},
                 {"waveform", io::waveform_to_json(w)},
                 {"grid_psl", grid},
                 {"grid_psl_zero_phases", grid_before},
                 {"local_maxima_psl", local},
                 {"papr", papr(sample_envelope(w, default_sample_rate(spec)))},
                 {"oversampling", a.oversampling},
                 {"tau_step_seconds", spec.subpulse_duration / a.oversampling},
                 {"omega_step_rad_per_s", spec.omega_step() / a.oversampling}};
    io::write_json(out / "af_summary.json", summary);
    std::cout << "grid_psl " << io::format_double(grid) << "  local_maxima_psl " << io::format_double(local) << "\n";
    return 0;
}

int run_sl_dist(const Globals& g, const SlArgs& a, const fs::path& out)
{
    const int L = a.spec.L, M = a.spec.M;
    const K0Mode mode = a.paper_pmf ? K0Mode::paper_formula : parse_k0_mode(a.k0_mode);
    const WaveformSpec spec = make_spec(L, M);

    if (a.pmf)
        for (const GridPoint& p : sidelobe_domain(spec))
            io::write_text(out / ("sl_pmf_k" + std::to_string(p.k) + "_r" + std::to_string(p.r) + ".csv"),
                           io::pmf_csv(sl_pmf(L, M, p.k, p.r, mode)));

    const DiscreteDistribution approx = approx_psl_cdf(L, M, mode);
    io::write_text(out / "approx_psl_cdf.csv", io::cdf_csv(approx));

    json summary{{"L", L}, {"M", M}, {"k0_mode", k0_mode_name(mode)}};
    std::optional<DiscreteDistribution> grid, local;
    std::uint64_t n = 0;
    if (a.mc > 0) {
        MonteCarloPslOptions o;
        o.L = L;
        o.M = M;
        o.samples = a.mc;
        o.seed = g.seed;
        o.local_oversampling = a.local_maxima ? a.oversampling : 0;
        o.threads = g.threads;
        const MonteCarloPsl mc = monte_carlo_psl(o);
        grid = mc.grid_cdf();
        if (a.local_maxima) local = mc.local_maxima_cdf();
        n = a.mc;
        summary["grid_source"] = "monte-carlo";
    } else {
        grid = exhaustive_psl_cdf(L, M, nullptr, a.budget, g.threads);
        n = spec.waveform_count();
        summary["grid_source"] = "exhaustive";
        if (a.local_maxima) throw io::InputError("--local-maxima needs --mc (surface search is sampled)");
    }
    io::write_text(out / "grid_psl_cdf.csv", io::cdf_csv(*grid));
    const double w_ga = wasserstein1(*grid, approx);
    io::write_json(out / "w1_grid_vs_approx.json", io::w1_json(w_ga, n, 0));
    summary["w1_grid_vs_approx"] = w_ga;
    summary["grid_samples"] = n;
    summary["grid_psl_mean"] = grid->mean();
    // every k=0 treatment, for comparison
    for (K0Mode m : {K0Mode::exact, K0Mode::paper_formula, K0Mode::paper_half_row})
        summary["w1_grid_vs_approx_by_k0_mode"][k0_mode_name(m)] = wasserstein1(*grid, approx_psl_cdf(L, M, m));
    if (local) {
        io::write_text(out / "local_maxima_psl_cdf.csv", io::cdf_csv(*local));
        const double w_lg = wasserstein1(*local, *grid);
        const double w_la = wasserstein1(*local, approx);
        io::write_json(out / "w1_local_vs_grid.json", io::w1_json(w_lg, n, n));
        io::write_json(out / "w1_local_vs_approx.json", io::w1_json(w_la, n, 0));
        summary["w1_local_vs_grid"] = w_lg;
        summary["w1_local_vs_approx"] = w_la;
        summary["horizontal_gap_local_vs_grid"] = horizontal_cdf_gap(*local, *grid);
        summary["oversampling"] = a.oversampling;
    }
    io::write_json(out / "sl_dist_summary.json", summary);
    std::cout << "w1(grid, approx) " << io::format_double(w_ga) << "\n";
    return 0;
}

int run_optimize(const Globals& g, const OptArgs& a, const fs::path& out)
{
    const WaveformSpec spec = a.spec.spec();
    std::vector<std::vector<int>> sequences;
    if (a.all) {
        const std::uint64_t count = spec.waveform_count();
        if (count == 0 || count > kDefaultEnumerationBudget)
            throw BudgetExceeded("--all would optimize more than 2^24 waveforms; use --sample");
        for (std::uint64_t i = 0; i < count; ++i) sequences.push_back(index_to_freq_sequence(spec, i));
    } else if (a.sample >= 0) {
        for (std::int64_t s = 0; s < a.sample; ++s)
            sequences.push_back(sample_freq_sequence(spec, g.seed, static_cast<std::uint64_t>(s)));
    } else if (!a.indices.empty()) {
        for (const auto& idx : a.indices) sequences.push_back(index_string_to_freq_sequence(spec, idx));
    } else {
        throw io::InputError("choose the waveforms with --all, --sample n or --indices");
    }

    OptimizerConfig cfg;
    cfg.restarts = a.restarts;
    cfg.max_iterations = a.max_iterations;
    cfg.tolerance = a.tolerance;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    const BatchResult batch = batch_optimize(spec, sequences, cfg);
    io::write_text(out / "optimize_batch.csv", io::batch_csv(batch));
    io::write_json(out / "phase_table.json", io::phase_table_to_json(to_phase_table(spec, batch)));
    const auto means = [](const BatchMeans& m) {
        return json{{"count", m.count}, {"mean_pre_psl", m.mean_pre}, {"mean_post_psl", m.mean_post},
                    {"mean_drop", m.mean_drop}};
    };
    io::write_json(out / "optimize_summary.json",
                   {{"L", spec.num_subpulses}, {"M", spec.mod_order}, {"all_waveforms", means(batch.all)},
                    {"without_constant_frequency", means(batch.non_constant)}});
    std::cout << "waveforms " << batch.all.count << "  mean pre " << io::format_double(batch.all.mean_pre)
              << "  mean post " << io::format_double(batch.all.mean_post) << "  mean drop "
              << io::format_double(batch.all.mean_drop) << "\n";
    return 0;
}

int run_ser(const Globals& g, const SerArgs& a, const fs::path& out)
{
    if (a.trials <= 0) throw io::InputError("--trials must be positive");
    const WaveformSpec spec = a.spec.spec();
    std::optional<PhaseTable> table;
    if (!a.phase_table.empty()) {
        if (!fs::exists(a.phase_table)) throw PreconditionError("phase table " + a.phase_table + " not found");
        table = io::phase_table_from_json(io::read_json(a.phase_table));
    }

    SerOptions base;
    base.spec = spec;
    base.channel.kind = a.channel == "rician" ? ChannelKind::rician : ChannelKind::awgn;
    if (a.channel != "rician" && a.channel != "awgn") throw io::InputError("--channel must be awgn or rician");
    base.channel.num_rx_antennas = a.antennas;
    base.channel.rician_k = a.rician_k;
    base.snr_db = a.snr;
    base.trials = static_cast<std::uint64_t>(a.trials);
    base.seed = g.seed;
    base.threads = g.threads;

    std::vector<std::pair<std::string, SerCurve>> curves;
    for (const std::string& name : a.detectors) {
        const auto dash = name.rfind('-');
        const std::string phase = dash == std::string::npos ? "" : name.substr(dash + 1);
        if (phase != "before" && phase != "after")
            throw io::InputError("detector '" + name + "' must end in -before or -after");
        SerOptions o = base;
        o.detector = parse_detector(name.substr(0, dash));
        if (phase == "after") {
            if (!table) throw PreconditionError("detector " + name + " needs --phase-table");
            o.source.table = &*table;
        } else if (table) {
            // same waveform pool, zero phases
            o.source.table = &*table;
            o.source.zero_phases = true;
        }
        SerCurve c = simulate_ser(o);
        io::write_text(out / ("ser_" + name + ".csv"), io::ser_csv(c));
        curves.emplace_back(name, std::move(c));
    }

    json gaps = json::object();
    for (const auto& [name_a, ca] : curves)
        for (const auto& [name_b, cb] : curves) {
            if (name_a == name_b || name_b != "coherent-before") continue;
            for (double target : {1e-3, 1e-4}) {
                const auto gap = snr_gap_db(ca, cb, target);
                gaps[name_a + "_vs_" + name_b][io::format_double(target)] = gap ? json(*gap) : json(nullptr);
            }
        }
    io::write_json(out / "ser_gaps.json", {{"gap_db_definition", "snr_db(first) - snr_db(second) at the target SER"},
                                           {"gaps_db", gaps}});
    for (const auto& [name, c] : curves) {
        std::cout << name << ":";
        for (const SerPoint& p : c.points) std::cout << " " << io::format_double(p.snr_db) << "dB=" << io::format_double(p.ser);
        std::cout << "\n";
    }
    return 0;
}

int run_papr(const Globals&, const PaprArgs& a, const fs::path& out)
{
    const FskWaveform w = load_waveform(a.waveform, a.spec, a.index, a.phase_table);
    const double rate = a.sample_rate > 0.0 ? a.sample_rate : default_sample_rate(w.spec());
    const SampledEnvelope env = sample_envelope(w, rate);
    const double value = papr(env);
    io::write_json(out / "papr.json", {{"papr", value}, {"papr_db", 10.0 * std::log10(value)},
                                       {"sample_rate_hz", env.sample_rate}, {"samples", env.samples.size()},
                                       {"energy", env.energy()}});
    std::cout << "papr " << io::format_double(value) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"FSK joint communications and radar waveform toolkit"};
    app.option_defaults()->always_capture_default();
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--threads", g.threads, "Worker threads (0 = available parallelism)");
    app.add_option("--out-dir", g.out_dir, "Output directory");
    app.add_option("--config", g.config, "JSON config; command-line options take precedence");

    AfArgs af;
    CLI::App* af_cmd = app.add_subcommand("af", "Ambiguity surface, cuts and PSL summary for one waveform");
    af.spec.add(af_cmd);
    af_cmd->add_option("--waveform", af.waveform, "Waveform JSON file");
    af_cmd->add_option("--index", af.index, "Waveform index (decimal) when no JSON is given");
    af_cmd->add_option("--phase-table", af.phase_table, "Apply phases from this table to --index");
    af_cmd->add_option("--oversampling", af.oversampling, "Lattice points per T and per 2*pi*df");

    SlArgs sl;
    CLI::App* sl_cmd = app.add_subcommand("sl-dist", "Sidelobe and PSL distributions with W1 distances");
    sl.spec.add(sl_cmd);
    sl_cmd->add_option("--k0-mode", sl.k0_mode, "exact | paper-formula | paper-half-row");
    sl_cmd->add_flag("--paper-pmf", sl.paper_pmf, "Shorthand for --k0-mode paper-formula");
    sl_cmd->add_flag("--pmf", sl.pmf, "Also write per-point sidelobe PMFs");
    sl_cmd->add_option("--mc", sl.mc, "Monte Carlo sample count (0 = exhaustive)");
    sl_cmd->add_flag("--local-maxima", sl.local_maxima, "Also sample the local-maxima PSL (needs --mc)");
    sl_cmd->add_option("--oversampling", sl.oversampling, "Surface oversampling for local maxima");
    sl_cmd->add_option("--budget", sl.budget, "Exhaustive enumeration budget (waveforms)");

    OptArgs opt;
    CLI::App* opt_cmd = app.add_subcommand("optimize", "Min-max phase optimization over a batch of waveforms");
    opt.spec.add(opt_cmd);
    opt_cmd->add_flag("--all", opt.all, "All M^L waveforms");
    opt_cmd->add_option("--sample", opt.sample, "Number of uniformly drawn waveforms");
    opt_cmd->add_option("--indices", opt.indices, "Explicit waveform indices")->delimiter(',');
    opt_cmd->add_option("--restarts", opt.restarts, "Random restarts per waveform");
    opt_cmd->add_option("--max-iterations", opt.max_iterations, "Iterations per smoothing stage");
    opt_cmd->add_option("--tolerance", opt.tolerance, "Objective change that ends a stage");

    SerArgs ser;
    CLI::App* ser_cmd = app.add_subcommand("ser", "Symbol error rate curves and SNR gaps");
    ser.spec.add(ser_cmd);
    ser_cmd->add_option("--detectors", ser.detectors,
                        "Any of coherent-before, noncoherent-before, noncoherent-after, joint-ml-after")
        ->delimiter(',');
    ser_cmd->add_option("--channel", ser.channel, "awgn | rician");
    ser_cmd->add_option("--antennas", ser.antennas, "Receive antennas N");
    ser_cmd->add_option("--rician-k", ser.rician_k, "Rician K factor");
    ser_cmd->add_option("--snr", ser.snr, "Per-sub-pulse SNR grid in dB")->delimiter(',');
    ser_cmd->add_option("--trials", ser.trials, "Waveforms per SNR point (>= 1000)");
    ser_cmd->add_option("--phase-table", ser.phase_table, "Optimized phase table JSON");

    PaprArgs pa;
    CLI::App* papr_cmd = app.add_subcommand("papr", "Peak-to-average power ratio of a sampled waveform");
    pa.spec.add(papr_cmd);
    papr_cmd->add_option("--waveform", pa.waveform, "Waveform JSON file");
    papr_cmd->add_option("--index", pa.index, "Waveform index (decimal) when no JSON is given");
    papr_cmd->add_option("--phase-table", pa.phase_table, "Apply phases from this table to --index");
    papr_cmd->add_option("--sample-rate", pa.sample_rate, "Sample rate in Hz (default 16 per 1/df)");

    app.require_subcommand(0, 1);

    // Merge a JSON config into the argument list before parsing.
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        std::string config_path;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
            if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
        }
        if (!config_path.empty()) {
            const json cfg = io::read_json(config_path);
            if (!cfg.is_object()) throw io::InputError("config must be a JSON object");
            const std::set<std::string> given = given_on_command_line(args);
            std::size_t sub_pos = args.size();
            CLI::App* sub = nullptr;
            for (std::size_t i = 0; i < args.size() && sub == nullptr; ++i)
                for (CLI::App* s : app.get_subcommands({}))
                    if (args[i] == s->get_name()) {
                        sub = s;
                        sub_pos = i;
                        break;
                    }
            std::vector<std::string> merged = config_tokens(cfg, given, long_names(&app));
            merged.insert(merged.end(), args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos));
            if (sub == nullptr && cfg.contains("command")) {
                sub = app.get_subcommand(cfg.at("command").get<std::string>());
                merged.push_back(sub->get_name());
            } else if (sub != nullptr) {
                merged.push_back(sub->get_name());
                ++sub_pos;
            }
            if (sub != nullptr) {
                const auto extra = config_tokens(cfg, given, long_names(sub));
                merged.insert(merged.end(), extra.begin(), extra.end());
            }
            merged.insert(merged.end(), args.begin() + static_cast<std::ptrdiff_t>(std::min(sub_pos, args.size())),
                          args.end());
            args = std::move(merged);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    const auto parsed = app.get_subcommands();
    if (parsed.empty()) {
        std::cerr << app.help();
        return kExitInput;
    }
    CLI::App* sub = parsed.front();
    const fs::path out = g.out_dir;
    try {
        fs::create_directories(out);
        const std::string name = sub->get_name();
        int rc = 0;
        if (name == "af") rc = run_af(g, af, out);
        else if (name == "sl-dist") rc = run_sl_dist(g, sl, out);
        else if (name == "optimize") rc = run_optimize(g, opt, out);
        else if (name == "ser") rc = run_ser(g, ser, out);
        else if (name == "papr") rc = run_papr(g, pa, out);
        io::write_json(out / (name + "_config.json"), resolved_config(app, sub));
        return rc;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const io::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

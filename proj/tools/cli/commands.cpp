#include "commands.hpp"

#include "pulsepsd/analytic.hpp"
#include "pulsepsd/compare.hpp"
#include "pulsepsd/error.hpp"
#include "pulsepsd/io.hpp"
#include "pulsepsd/peaks.hpp"
#include "pulsepsd/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef PULSEPSD_VERSION
#define PULSEPSD_VERSION "0.0.0"
#endif

namespace pulsepsd::cli {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct ModelFlags {
    std::string model = "transition";
    int t0 = 64;
    int delta = 0;
    double p = 0.5;
    std::string law = "paper";
    bool allow_unequal = false;

    TrainParams params() const
    {
        TrainParams tp;
        tp.variant = parse_variant(model);
        tp.t0 = t0;
        tp.delta = delta;
        tp.prob_one = p;
        tp.blank_law = parse_blank_law(law);
        tp.allow_unequal_blank = allow_unequal;
        tp.validate();
        return tp;
    }
};

struct OutputFlags {
    std::string out_dir = ".";
    std::string prefix;
    bool hz = false;
    bool svg = false;
};

struct SimFlags {
    std::size_t fft = 0;
    std::size_t symbols = 0;
    std::size_t realizations = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool truncate = false;
};

struct Options {
    ModelFlags m;
    OutputFlags o;
    SimFlags s;
    std::string config;  // consumed before parsing; registered for --help

    double fmin_norm = 0.0;
    double fmax_norm = 10.0;
    int points_per_unit = 200;
    int kmax = 0;
    double scale = 1.0;
    double k_scale = 1.0;
    CLI::Option* k_scale_opt = nullptr;

    std::string dump_signal;

    std::string analytic_csv;
    std::string simulated_csv;
    CompareBand band;
    double threshold_db = 2.0;

    std::string deltas;
    std::string source = "analytic";
    PeakWindows windows;
    int sweep_points_per_unit = 100000;
};

// Files written by one command, plus what the manifest needs.
struct Run {
    std::string command;
    std::vector<std::string> argv;
    json parameters = json::object();
    json seed = nullptr;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

fs::path output_path(const OutputFlags& o, const std::string& suffix)
{
    return fs::path(o.out_dir) / (o.prefix + suffix);
}

void emit(Run& run, const fs::path& path, const std::string& content)
{
    write_text_file(path, content);
    run.outputs.push_back(path.generic_string());
}

void write_manifest(Run& run, const OutputFlags& o, std::ostream& out)
{
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - run.start).count();
    json m;
    m["schema_version"] = kSchemaVersion;
    m["command"] = run.command;
    m["argv"] = run.argv;
    m["parameters"] = run.parameters;
    m["seed"] = run.seed;
    m["tool_version"] = PULSEPSD_VERSION;
    m["outputs"] = run.outputs;
    m["wall_clock_seconds"] = seconds;
    const fs::path path = output_path(o, "_manifest.json");
    write_text_file(path, m.dump(2) + "\n");
    for (const auto& f : run.outputs)
        out << "wrote " << f << "\n";
    out << "wrote " << path.generic_string() << "\n";
}

json model_json(const TrainParams& tp)
{
    json j;
    j["model"] = to_string(tp.variant);
    j["t0"] = tp.t0;
    j["delta"] = tp.delta;
    j["p"] = tp.prob_one;
    if (tp.variant == Variant::BlankShorten)
        j["law"] = to_string(tp.blank_law);
    return j;
}

void add_model_flags(CLI::App* app, ModelFlags& m, bool with_model)
{
    if (with_model)
        app->add_option("--model", m.model, "transition or blank")->capture_default_str();
    app->add_option("--t0", m.t0, "symbol duration in samples")->capture_default_str();
    app->add_option("--delta", m.delta, "stretch/shortening in samples")->capture_default_str();
    app->add_option("--p", m.p, "probability of a one")->capture_default_str();
    app->add_option("--law", m.law, "blank interval law: paper or generator")->capture_default_str();
    app->add_flag("--allow-unequal-blank", m.allow_unequal, "allow p != 0.5 for the blank model");
}

void add_output_flags(CLI::App* app, Options& opt)
{
    app->add_option("--out-dir", opt.o.out_dir, "output directory")->capture_default_str();
    app->add_option("--prefix", opt.o.prefix, "output file prefix")->capture_default_str();
    app->add_flag("--hz", opt.o.hz, "write frequencies in cycles/sample instead of units of 1/t0");
    app->add_option("--config", opt.config, "flat key=value file; command-line flags take precedence");
}

void add_sim_flags(CLI::App* app, SimFlags& s)
{
    app->add_option("--fft", s.fft, "FFT length (power of two)");
    app->add_option("--symbols", s.symbols, "symbols per realization");
    app->add_option("--realizations", s.realizations, "number of realizations")->capture_default_str();
    app->add_option("--seed", s.seed, "master seed")->capture_default_str();
    app->add_option("--threads", s.threads, "worker threads (0 = all cores)")->capture_default_str();
    app->add_flag("--truncate", s.truncate, "cut signals longer than the FFT instead of rejecting them");
}

void add_window_flags(CLI::App* app, PeakWindows& w)
{
    app->add_option("--peak-lo", w.peak_lo, "peak window start, units of f0")->capture_default_str();
    app->add_option("--peak-hi", w.peak_hi, "peak window end, units of f0")->capture_default_str();
    app->add_option("--lobe-lo", w.lobe_lo, "second-lobe window start, units of f0")->capture_default_str();
    app->add_option("--lobe-hi", w.lobe_hi, "second-lobe window end, units of f0")->capture_default_str();
    app->add_option("--rise-factor", w.rise_factor, "lobe boundary rise factor")->capture_default_str();
}

// Fills simulator defaults that depend on the model.
SimConfig make_sim_config(const TrainParams& tp, const SimFlags& s, int shortest_zero)
{
    SimConfig c;
    c.params = tp;
    c.n_realizations = s.realizations;
    c.seed = s.seed;
    c.threads = s.threads;
    c.policy = s.truncate ? LengthPolicy::Truncate : LengthPolicy::ZeroPad;
    if (tp.variant == Variant::TransitionStretch) {
        c.fft_size = s.fft ? s.fft : 8192;
        c.n_symbols = s.symbols ? s.symbols : c.fft_size / static_cast<std::size_t>(tp.t0);
    } else {
        c.n_symbols = s.symbols ? s.symbols : 2000;
        c.fft_size = s.fft ? s.fft : std::bit_floor(c.n_symbols * static_cast<std::size_t>(shortest_zero));
    }
    c.validate();
    return c;
}

json sim_json(const SimConfig& c)
{
    json j;
    j["fft"] = c.fft_size;
    j["symbols"] = c.n_symbols;
    j["realizations"] = c.n_realizations;
    j["seed"] = c.seed;
    j["length_policy"] = c.policy == LengthPolicy::Truncate ? "truncate" : "zero-pad";
    return j;
}

std::string spectrum_csv(const SpectrumGrid& s, bool hz)
{
    std::ostringstream os;
    write_spectrum_csv(os, s, hz);
    return os.str();
}

void maybe_svg(Run& run, const Options& opt, const SpectrumGrid& s, const std::string& title)
{
    if (!opt.o.svg)
        return;
    std::ostringstream os;
    write_svg(os, s, title, opt.o.hz);
    emit(run, output_path(opt.o, ".svg"), os.str());
}

int cmd_analytic(Options& opt, Run& run, std::ostream& out)
{
    const TrainParams tp = opt.m.params();
    const FrequencyGrid grid = FrequencyGrid::uniform_normalized(tp.t0, opt.fmin_norm, opt.fmax_norm, opt.points_per_unit);

    run.parameters = model_json(tp);
    run.parameters["fmin_norm"] = opt.fmin_norm;
    run.parameters["fmax_norm"] = opt.fmax_norm;
    run.parameters["points_per_unit"] = opt.points_per_unit;
    run.parameters["scale"] = opt.scale;
    run.parameters["hz"] = opt.o.hz;

    SpectrumGrid s;
    if (tp.variant == Variant::TransitionStretch) {
        s = continuous_psd_transition(grid, tp, opt.scale);
        const int kmax = opt.kmax > 0 ? opt.kmax : std::max(1, static_cast<int>(std::floor(opt.fmax_norm)));
        run.parameters["kmax"] = kmax;
        DiscreteLineSet lines = discrete_lines_transition(kmax, tp);
        for (auto& l : lines.lines)
            l.power *= opt.scale;
        emit(run, output_path(opt.o, "_continuous.csv"), spectrum_csv(s, opt.o.hz));
        std::ostringstream ls;
        write_lines_csv(ls, lines, opt.o.hz);
        emit(run, output_path(opt.o, "_lines.csv"), ls.str());
    } else {
        std::optional<double> k;
        if (opt.k_scale_opt->count() > 0)
            k = opt.k_scale;
        run.parameters["k_scale"] = k ? json(*k) : json("second-lobe");
        s = psd_blank_shorten(grid, tp.t0, tp.delta, tp.blank_law, k);
        emit(run, output_path(opt.o, "_continuous.csv"), spectrum_csv(s, opt.o.hz));
    }
    maybe_svg(run, opt, s, "analytic " + to_string(tp.variant));
    out << "evaluated " << s.size() << " points, skipped " << s.skipped.size() << ", clamped " << s.clamped
        << "\n";
    return kExitOk;
}

int cmd_simulate(Options& opt, Run& run, std::ostream& out)
{
    const TrainParams tp = opt.m.params();
    const SimConfig c = make_sim_config(tp, opt.s, tp.t0 - tp.delta);

    run.parameters = model_json(tp);
    run.parameters.update(sim_json(c));
    run.parameters["hz"] = opt.o.hz;
    run.seed = c.seed;

    const SpectrumGrid s = estimate_psd(c);
    emit(run, output_path(opt.o, "_simulated.csv"), spectrum_csv(s, opt.o.hz));
    if (!opt.dump_signal.empty()) {
        const SampledSignal sig = realization_signal(c, 0);
        std::string text;
        text.reserve(sig.size() * 2);
        for (auto v : sig.samples) {
            text.push_back(v ? '1' : '0');
            text.push_back('\n');
        }
        emit(run, fs::path(opt.dump_signal), text);
    }
    maybe_svg(run, opt, s, "simulated " + to_string(tp.variant));
    out << "averaged " << c.n_realizations << " realizations into " << s.size() << " bins\n";
    return kExitOk;
}

int cmd_compare(Options& opt, Run& run, std::ostream& out)
{
    SpectrumGrid analytic;
    SpectrumGrid simulated;
    double t0 = opt.m.t0;
    if (!opt.analytic_csv.empty() || !opt.simulated_csv.empty()) {
        if (opt.analytic_csv.empty() || opt.simulated_csv.empty())
            throw InvalidParameter("--analytic and --simulated must be given together");
        if (opt.m.t0 <= 0)
            throw InvalidParameter("t0 must be a positive sample count");
        std::ifstream a(opt.analytic_csv);
        std::ifstream s(opt.simulated_csv);
        if (!a)
            throw InvalidParameter("cannot read " + opt.analytic_csv);
        if (!s)
            throw InvalidParameter("cannot read " + opt.simulated_csv);
        analytic = read_spectrum_csv(a, t0);
        simulated = read_spectrum_csv(s, t0);
        run.parameters["analytic_csv"] = opt.analytic_csv;
        run.parameters["simulated_csv"] = opt.simulated_csv;
        run.parameters["t0"] = opt.m.t0;
    } else {
        const TrainParams tp = opt.m.params();
        const SimConfig c = make_sim_config(tp, opt.s, tp.t0 - tp.delta);
        run.parameters = model_json(tp);
        run.parameters.update(sim_json(c));
        run.seed = c.seed;
        const int kmax = opt.kmax > 0 ? opt.kmax : 40;
        run.parameters["kmax"] = kmax;
        analytic = analytic_reference(tp, c.fft_size, kmax, opt.windows);
        simulated = estimate_psd(c);
        if (tp.variant == Variant::BlankShorten)
            simulated = normalize_second_lobe(simulated, opt.windows);
    }
    run.parameters["band"] = {{"fn_lo", opt.band.fn_lo}, {"fn_hi", opt.band.fn_hi}, {"exclude_bins", opt.band.exclude_bins}};
    run.parameters["threshold_db"] = opt.threshold_db;
    run.parameters["hz"] = opt.o.hz;

    const ComparisonResult r = compare_spectra(analytic, simulated, t0, opt.band);

    std::ostringstream csv;
    csv << (opt.o.hz ? "f_hz" : "f_normalized") << ",analytic_db,simulated_db,diff_db\n";
    for (const auto& p : r.points)
        csv << format_number(opt.o.hz ? p.f : p.f * t0) << ',' << format_number(p.analytic_db) << ','
            << format_number(p.simulated_db) << ',' << format_number(p.diff_db) << '\n';
    emit(run, output_path(opt.o, "_joined.csv"), csv.str());

    const bool limited = r.max_abs_diff_db > opt.threshold_db;
    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["max_abs_diff_db"] = r.max_abs_diff_db;
    summary["mean_diff_db"] = r.mean_diff_db;
    summary["f_normalized_at_max"] = r.f_at_max * t0;
    summary["points_in_statistic"] = r.n_in_statistic;
    summary["band"] = run.parameters["band"];
    summary["threshold_db"] = opt.threshold_db;
    summary["resolution_limited"] = limited;
    emit(run, output_path(opt.o, "_summary.json"), summary.dump(2) + "\n");

    out << "max |diff| = " << format_number(r.max_abs_diff_db) << " dB over " << r.n_in_statistic
        << " bins in (" << opt.band.fn_lo << ", " << opt.band.fn_hi << ")·f0\n";
    if (limited)
        out << "note: resolution-limited, max |diff| exceeds " << opt.threshold_db << " dB\n";
    return kExitOk;
}

int cmd_peaks_sweep(Options& opt, Run& run, std::ostream& out)
{
    const std::vector<double> deltas = parse_deltas(opt.deltas);
    ModelFlags m = opt.m;
    m.model = "blank";
    m.delta = 0;
    const TrainParams base = m.params();

    PeakSource source;
    if (opt.source == "analytic")
        source = PeakSource::Analytic;
    else if (opt.source == "simulated")
        source = PeakSource::Simulated;
    else
        throw InvalidParameter("unknown source '" + opt.source + "' (expected analytic or simulated)");

    SweepOptions so;
    so.windows = opt.windows;
    so.points_per_unit = opt.sweep_points_per_unit;

    run.parameters = model_json(base);
    run.parameters.erase("delta");
    run.parameters["deltas"] = deltas;
    run.parameters["source"] = opt.source;
    run.parameters["windows"] = {{"peak_lo", so.windows.peak_lo},   {"peak_hi", so.windows.peak_hi},
                                 {"lobe_lo", so.windows.lobe_lo},   {"lobe_hi", so.windows.lobe_hi},
                                 {"rise_factor", so.windows.rise_factor}};

    std::optional<SimConfig> sim;
    if (source == PeakSource::Simulated) {
        if (deltas.empty() || deltas.back() >= base.t0)
            throw InvalidParameter("every delta must satisfy 0 <= delta < t0");
        const int shortest = base.t0 - static_cast<int>(std::ceil(deltas.back()));
        sim = make_sim_config(base, opt.s, std::max(shortest, 1));
        run.parameters.update(sim_json(*sim));
        run.seed = sim->seed;
    } else {
        run.parameters["points_per_unit"] = so.points_per_unit;
    }

    const std::vector<SweepRow> rows = sweep_delta(base, deltas, source, sim, so);

    std::ostringstream csv;
    csv << "delta,center_freq_norm,amplitude_linear,fwhm_norm\n";
    json jrows = json::array();
    std::vector<double> xs;
    std::vector<double> centers;
    int amplitude_increases = 0;
    int fwhm_decreases = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].report;
        csv << format_number(rows[i].delta) << ',' << format_number(r.center_freq_norm) << ','
            << format_number(r.amplitude_linear) << ',' << format_number(r.fwhm_norm) << '\n';
        jrows.push_back({{"delta", rows[i].delta},
                         {"center_freq_norm", r.center_freq_norm},
                         {"amplitude_linear", r.amplitude_linear},
                         {"fwhm_norm", r.fwhm_norm},
                         {"second_lobe_max", r.second_lobe_max},
                         {"peak_value", r.peak_value}});
        xs.push_back(rows[i].delta);
        centers.push_back(r.center_freq_norm);
        if (i > 0) {
            amplitude_increases += r.amplitude_linear > rows[i - 1].report.amplitude_linear;
            fwhm_decreases += r.fwhm_norm < rows[i - 1].report.fwhm_norm;
        }
    }
    emit(run, output_path(opt.o, ".csv"), csv.str());

    json report;
    report["schema_version"] = kSchemaVersion;
    report["provenance"] = {{"tool", "pulsepsd"}, {"tool_version", PULSEPSD_VERSION}, {"command", run.command},
                            {"argv", run.argv}};
    report["parameters"] = run.parameters;
    report["rows"] = jrows;
    json summary;
    summary["amplitude_increases"] = amplitude_increases;
    summary["fwhm_decreases"] = fwhm_decreases;
    if (rows.size() >= 3) {
        const LinearFit fit = linear_fit(xs, centers);
        summary["center_fit"] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
    }
    report["summary"] = summary;
    emit(run, output_path(opt.o, "_report.json"), report.dump(2) + "\n");

    out << "swept " << rows.size() << " delta values\n";
    return kExitOk;
}

// Moves --config out of the argument list and splices its contents in right
// after the subcommand name, so explicit flags come later and win.
std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
    std::vector<std::string> rest;
    std::vector<std::string> from_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        std::string path;
        if (a == "--config") {
            if (i + 1 >= args.size())
                throw CLI::ArgumentMismatch("--config requires a file path");
            path = args[++i];
        } else if (a.starts_with("--config=")) {
            path = a.substr(9);
        } else {
            rest.push_back(a);
            continue;
        }
        auto tokens = config_tokens(path);
        from_file.insert(from_file.end(), tokens.begin(), tokens.end());
    }
    if (from_file.empty())
        return rest;
    std::vector<std::string> merged;
    auto it = rest.begin();
    if (it != rest.end() && !it->starts_with("-"))
        merged.push_back(*it++);
    merged.insert(merged.end(), from_file.begin(), from_file.end());
    merged.insert(merged.end(), it, rest.end());
    return merged;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw CLI::FileError::Missing(path);
    std::vector<std::string> tokens;
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ConversionError(path + ":" + std::to_string(number) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.starts_with("--"))
            key = key.substr(2);
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty() || key == "config")
            throw CLI::ConversionError(path + ":" + std::to_string(number) + ": invalid key");
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

std::vector<double> parse_deltas(const std::string& text)
{
    const std::string t = trim(text);
    if (t.empty())
        throw InvalidParameter("--deltas is empty");
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v))
            throw InvalidParameter("--deltas: cannot parse '" + s + "'");
        return v;
    };
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        for (std::string part; std::getline(ss, part, ':');)
            parts.push_back(trim(part));
        if (parts.size() != 3)
            throw InvalidParameter("--deltas expects lo:hi:step");
        const double lo = number(parts[0]);
        const double hi = number(parts[1]);
        const double step = number(parts[2]);
        if (step <= 0.0 || hi < lo)
            throw InvalidParameter("--deltas needs step > 0 and hi >= lo");
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(lo + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(t);
        for (std::string part; std::getline(ss, part, ',');)
            out.push_back(number(trim(part)));
    }
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Power spectral densities of NRZ pulse trains with non-uniform symbol durations", "pulsepsd"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", PULSEPSD_VERSION);
    app.require_subcommand(1);

    Options a_opt;
    a_opt.o.prefix = "analytic";
    CLI::App* analytic = app.add_subcommand("analytic", "closed-form continuous PSD and clock lines");
    add_model_flags(analytic, a_opt.m, true);
    add_output_flags(analytic, a_opt);
    analytic->add_flag("--svg", a_opt.o.svg, "also write a minimal SVG chart");
    analytic->add_option("--fmin-norm", a_opt.fmin_norm, "lowest frequency, units of f0")->capture_default_str();
    analytic->add_option("--fmax-norm", a_opt.fmax_norm, "highest frequency, units of f0")->capture_default_str();
    analytic->add_option("--points-per-unit", a_opt.points_per_unit, "grid points per unit of f0")
        ->capture_default_str();
    analytic->add_option("--kmax", a_opt.kmax, "highest clock harmonic (default: floor of --fmax-norm)");
    analytic->add_option("--scale", a_opt.scale, "multiplier on the transition-model PSD")->capture_default_str();
    a_opt.k_scale_opt =
        analytic->add_option("--k-scale", a_opt.k_scale, "blank-model constant K (default: second-lobe normalization)");

    Options s_opt;
    s_opt.o.prefix = "simulate";
    CLI::App* simulate = app.add_subcommand("simulate", "seeded Monte Carlo averaged periodogram");
    add_model_flags(simulate, s_opt.m, true);
    add_output_flags(simulate, s_opt);
    add_sim_flags(simulate, s_opt.s);
    simulate->add_flag("--svg", s_opt.o.svg, "also write a minimal SVG chart");
    simulate->add_option("--dump-signal", s_opt.dump_signal, "write realization 0, one sample per line");

    Options c_opt;
    c_opt.o.prefix = "compare";
    CLI::App* compare = app.add_subcommand("compare", "analytic versus simulated spectrum on the FFT bins");
    add_model_flags(compare, c_opt.m, true);
    add_output_flags(compare, c_opt);
    add_sim_flags(compare, c_opt.s);
    add_window_flags(compare, c_opt.windows);
    compare->add_option("--kmax", c_opt.kmax, "highest clock harmonic (default 40)");
    compare->add_option("--analytic", c_opt.analytic_csv, "analytic spectrum CSV instead of computing it");
    compare->add_option("--simulated", c_opt.simulated_csv, "simulated spectrum CSV instead of computing it");
    compare->add_option("--band-lo", c_opt.band.fn_lo, "band start, units of f0 (exclusive)")->capture_default_str();
    compare->add_option("--band-hi", c_opt.band.fn_hi, "band end, units of f0 (exclusive)")->capture_default_str();
    compare->add_option("--exclude-bins", c_opt.band.exclude_bins, "bins left out around each harmonic")
        ->capture_default_str();
    compare->add_option("--threshold-db", c_opt.threshold_db, "max |diff| above which the run is resolution-limited")
        ->capture_default_str();

    Options p_opt;
    p_opt.o.prefix = "peaks_sweep";
    p_opt.m.t0 = 100;
    CLI::App* peaks = app.add_subcommand("peaks-sweep", "clock-peak report of the blank model over a delta sweep");
    add_model_flags(peaks, p_opt.m, false);
    add_output_flags(peaks, p_opt);
    add_sim_flags(peaks, p_opt.s);
    add_window_flags(peaks, p_opt.windows);
    peaks->add_option("--deltas", p_opt.deltas, "lo:hi:step (inclusive) or a comma list")->required();
    peaks->add_option("--source", p_opt.source, "analytic or simulated")->capture_default_str();
    peaks->add_option("--points-per-unit", p_opt.sweep_points_per_unit, "analytic grid density over (0.5, 2.5)·f0")
        ->capture_default_str();

    std::vector<std::string> tokens;
    try {
        tokens = expand_config(args);
        std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    Run run;
    run.argv = args;
    try {
        if (analytic->parsed()) {
            run.command = "analytic";
            const int rc = cmd_analytic(a_opt, run, out);
            write_manifest(run, a_opt.o, out);
            return rc;
        }
        if (simulate->parsed()) {
            run.command = "simulate";
            const int rc = cmd_simulate(s_opt, run, out);
            write_manifest(run, s_opt.o, out);
            return rc;
        }
        if (compare->parsed()) {
            run.command = "compare";
            const int rc = cmd_compare(c_opt, run, out);
            write_manifest(run, c_opt.o, out);
            return rc;
        }
        run.command = "peaks-sweep";
        const int rc = cmd_peaks_sweep(p_opt, run, out);
        write_manifest(run, p_opt.o, out);
        return rc;
    } catch (const DetectionFailure& e) {
        err << "detection failure: " << e.what() << "\n";
        return kExitDetection;
    } catch (const EvaluationError& e) {
        err << "evaluation error: " << e.what() << " (omega=" << e.omega() << ")\n";
        return kExitDetection;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace pulsepsd::cli

#include "pulsepsd/analytic.hpp"
#include "pulsepsd/charfn.hpp"
#include "pulsepsd/compare.hpp"
#include "pulsepsd/error.hpp"
#include "pulsepsd/model.hpp"
#include "pulsepsd/peaks.hpp"
#include "pulsepsd/sim.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace pulsepsd;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v)
{
    py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

template <typename T>
std::vector<T> from_array(const py::array_t<T, py::array::c_style | py::array::forcecast>& a)
{
    if (a.ndim() != 1)
        throw InvalidParameter("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

BlankLaw law_of(const std::string& s) { return parse_blank_law(s); }

py::dict peak_dict(const PeakReport& r)
{
    py::dict d;
    d["center_freq_norm"] = r.center_freq_norm;
    d["amplitude_linear"] = r.amplitude_linear;
    d["fwhm_norm"] = r.fwhm_norm;
    d["second_lobe_max"] = r.second_lobe_max;
    d["peak_value"] = r.peak_value;
    return d;
}

py::dict stats_dict(const IntervalStats& s)
{
    py::dict d;
    d["mean_tau"] = s.mean_tau;
    d["mean_l"] = s.mean_l;
    d["mean_g"] = s.mean_g;
    d["count"] = s.count;
    return d;
}

PeakWindows windows_of(double peak_lo, double peak_hi, double lobe_lo, double lobe_hi)
{
    PeakWindows w;
    w.peak_lo = peak_lo;
    w.peak_hi = peak_hi;
    w.lobe_lo = lobe_lo;
    w.lobe_hi = lobe_hi;
    return w;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Analytic and simulated power spectra of NRZ pulse trains with non-uniform symbol durations.";

    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<EmptyInput>(m, "EmptyInput", PyExc_ValueError);
    py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_ValueError);
    py::register_exception<GridMismatch>(m, "GridMismatch", PyExc_ValueError);
    py::register_exception<DetectionFailure>(m, "DetectionFailure", PyExc_RuntimeError);
    py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);

    py::enum_<Variant>(m, "Variant")
        .value("TransitionStretch", Variant::TransitionStretch)
        .value("BlankShorten", Variant::BlankShorten);
    py::enum_<BlankLaw>(m, "BlankLaw")
        .value("PaperKDelta", BlankLaw::PaperKDelta)
        .value("GeneratorKMinusOneDelta", BlankLaw::GeneratorKMinusOneDelta);

    py::class_<TrainParams>(m, "TrainParams")
        .def_static("transition", &TrainParams::transition, py::arg("t0"), py::arg("delta"), py::arg("p"))
        .def_static(
            "blank", [](int t0, int delta, const std::string& law) { return TrainParams::blank(t0, delta, law_of(law)); },
            py::arg("t0"), py::arg("delta"), py::arg("law") = "paper")
        .def_readwrite("variant", &TrainParams::variant)
        .def_readwrite("t0", &TrainParams::t0)
        .def_readwrite("delta", &TrainParams::delta)
        .def_readwrite("prob_one", &TrainParams::prob_one)
        .def_readwrite("blank_law", &TrainParams::blank_law)
        .def_readwrite("allow_unequal_blank", &TrainParams::allow_unequal_blank)
        .def("validate", &TrainParams::validate)
        .def("__repr__", [](const TrainParams& p) {
            return "TrainParams(" + to_string(p.variant) + ", t0=" + std::to_string(p.t0) +
                   ", delta=" + std::to_string(p.delta) + ", p=" + std::to_string(p.prob_one) + ")";
        });

    py::class_<SpectrumGrid>(m, "Spectrum")
        .def(py::init([](py::array_t<double, py::array::c_style | py::array::forcecast> f,
                         py::array_t<double, py::array::c_style | py::array::forcecast> psd, double t0) {
                 SpectrumGrid s;
                 s.grid = FrequencyGrid(from_array(f));
                 s.psd = from_array(psd);
                 if (s.psd.size() != s.grid.size())
                     throw InvalidParameter("f and psd differ in length");
                 s.t0 = t0;
                 return s;
             }),
             py::arg("f"), py::arg("psd"), py::arg("t0"))
        .def_property_readonly("f", [](const SpectrumGrid& s) { return to_array(s.grid.values()); })
        .def_property_readonly("f_normalized",
                               [](const SpectrumGrid& s) {
                                   std::vector<double> fn(s.size());
                                   for (std::size_t i = 0; i < s.size(); ++i)
                                       fn[i] = s.f_normalized(i);
                                   return to_array(fn);
                               })
        .def_property_readonly("psd", [](const SpectrumGrid& s) { return to_array(s.psd); })
        .def_property_readonly("kind", [](const SpectrumGrid& s) { return to_string(s.kind); })
        .def_readonly("t0", &SpectrumGrid::t0)
        .def_readonly("skipped", &SpectrumGrid::skipped)
        .def_readonly("clamped", &SpectrumGrid::clamped)
        .def_readonly("normalization", &SpectrumGrid::normalization)
        .def("__len__", &SpectrumGrid::size);

    m.def(
        "gen_bits",
        [](std::size_t n, double p, std::uint64_t seed) { return to_array(gen_bits(n, p, seed).bits); },
        py::arg("n_symbols"), py::arg("p"), py::arg("seed"));

    m.def(
        "synthesize",
        [](py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> bits, const TrainParams& params) {
            BitStream b;
            b.bits = from_array(bits);
            return to_array(synthesize(b, params).samples);
        },
        py::arg("bits"), py::arg("params"));

    m.def(
        "interval_stats", [](const TrainParams& p) { return stats_dict(interval_stats(p)); }, py::arg("params"));
    m.def(
        "measure_intervals",
        [](py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> samples) {
            const auto v = from_array(samples);
            return stats_dict(measure_intervals(std::span<const std::uint8_t>(v)));
        },
        py::arg("samples"));

    m.def("theta1", &theta1, py::arg("omega"), py::arg("params"));
    m.def("theta2", &theta2, py::arg("omega"), py::arg("params"));
    m.def(
        "theta_blank",
        [](double omega, double t0, double delta, const std::string& law) {
            return theta_blank(omega, t0, delta, law_of(law));
        },
        py::arg("omega"), py::arg("t0"), py::arg("delta"), py::arg("law") = "paper");

    m.def(
        "uniform_grid",
        [](double t0, double fn_min, double fn_max, int ppu) {
            return to_array(FrequencyGrid::uniform_normalized(t0, fn_min, fn_max, ppu).values());
        },
        py::arg("t0"), py::arg("fn_min"), py::arg("fn_max"), py::arg("points_per_unit"));
    m.def(
        "fft_bins", [](std::size_t n) { return to_array(FrequencyGrid::fft_bins(n).values()); }, py::arg("fft_size"));

    m.def(
        "continuous_psd",
        [](const TrainParams& params, py::array_t<double, py::array::c_style | py::array::forcecast> f, double scale) {
            return continuous_psd_transition(FrequencyGrid(from_array(f)), params, scale);
        },
        py::arg("params"), py::arg("f"), py::arg("scale") = 1.0);

    m.def(
        "discrete_lines",
        [](const TrainParams& params, int k_max) {
            const DiscreteLineSet ls = discrete_lines_transition(k_max, params);
            std::vector<int> k;
            std::vector<double> f;
            std::vector<double> power;
            for (const auto& l : ls.lines) {
                k.push_back(l.k);
                f.push_back(l.freq);
                power.push_back(l.power);
            }
            py::dict d;
            d["k"] = to_array(k);
            d["f"] = to_array(f);
            d["power"] = to_array(power);
            return d;
        },
        py::arg("params"), py::arg("k_max"));

    m.def(
        "psd_blank_shorten",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> f, double t0, double delta,
           const std::string& law, std::optional<double> k_scale) {
            return psd_blank_shorten(FrequencyGrid(from_array(f)), t0, delta, law_of(law), k_scale);
        },
        py::arg("f"), py::arg("t0"), py::arg("delta"), py::arg("law") = "paper", py::arg("k_scale") = py::none());

    m.def("bin_power", &bin_power, py::arg("spectrum"));

    m.def(
        "analytic_reference",
        [](const TrainParams& params, std::size_t fft_size, int k_max) {
            return analytic_reference(params, fft_size, k_max);
        },
        py::arg("params"), py::arg("fft_size"), py::arg("k_max") = 40);

    m.def(
        "periodogram",
        [](py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> samples, std::size_t fft_size,
           bool truncate) {
            SampledSignal s;
            s.samples = from_array(samples);
            return periodogram(s, fft_size, truncate ? LengthPolicy::Truncate : LengthPolicy::ZeroPad);
        },
        py::arg("samples"), py::arg("fft_size"), py::arg("truncate") = false);

    m.def(
        "estimate_psd",
        [](const TrainParams& params, std::size_t n_symbols, std::size_t n_realizations, std::size_t fft_size,
           std::uint64_t seed, bool truncate, unsigned threads) {
            SimConfig c;
            c.params = params;
            c.n_symbols = n_symbols;
            c.n_realizations = n_realizations;
            c.fft_size = fft_size;
            c.seed = seed;
            c.policy = truncate ? LengthPolicy::Truncate : LengthPolicy::ZeroPad;
            c.threads = threads;
            py::gil_scoped_release release;
            return estimate_psd(c);
        },
        py::arg("params"), py::arg("n_symbols"), py::arg("n_realizations"), py::arg("fft_size"), py::arg("seed") = 0,
        py::arg("truncate") = false, py::arg("threads") = 0);

    m.def(
        "find_clock_peak",
        [](const SpectrumGrid& s, double t0, double peak_lo, double peak_hi, double lobe_lo, double lobe_hi) {
            return peak_dict(find_clock_peak(s, t0, windows_of(peak_lo, peak_hi, lobe_lo, lobe_hi)));
        },
        py::arg("spectrum"), py::arg("t0"), py::arg("peak_lo") = 0.8, py::arg("peak_hi") = 1.3,
        py::arg("lobe_lo") = 1.0, py::arg("lobe_hi") = 2.0);

    m.def(
        "normalize_second_lobe", [](const SpectrumGrid& s) { return normalize_second_lobe(s); }, py::arg("spectrum"));

    m.def(
        "sweep_delta",
        [](int t0, const std::vector<double>& deltas, const std::string& law, int points_per_unit) {
            SweepOptions o;
            o.points_per_unit = points_per_unit;
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = sweep_delta(TrainParams::blank(t0, 0, law_of(law)), deltas, PeakSource::Analytic,
                                   std::nullopt, o);
            }
            py::list out;
            for (const auto& r : rows) {
                py::dict d = peak_dict(r.report);
                d["delta"] = r.delta;
                out.append(d);
            }
            return out;
        },
        py::arg("t0"), py::arg("deltas"), py::arg("law") = "paper", py::arg("points_per_unit") = 100000);

    m.def(
        "compare",
        [](const SpectrumGrid& analytic, const SpectrumGrid& simulated, double t0, double fn_lo, double fn_hi,
           double exclude_bins) {
            const ComparisonResult r = compare_spectra(analytic, simulated, t0, CompareBand{fn_lo, fn_hi, exclude_bins});
            std::vector<double> f;
            std::vector<double> diff;
            for (const auto& p : r.points) {
                f.push_back(p.f);
                diff.push_back(p.diff_db);
            }
            py::dict d;
            d["f"] = to_array(f);
            d["diff_db"] = to_array(diff);
            d["max_abs_diff_db"] = r.max_abs_diff_db;
            d["mean_diff_db"] = r.mean_diff_db;
            d["f_at_max"] = r.f_at_max;
            d["n_in_statistic"] = r.n_in_statistic;
            return d;
        },
        py::arg("analytic"), py::arg("simulated"), py::arg("t0"), py::arg("fn_lo") = 0.1, py::arg("fn_hi") = 10.0,
        py::arg("exclude_bins") = 2.0);
}

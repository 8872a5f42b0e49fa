#include "pulsepsd/sim.hpp"

#include "pulsepsd/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

namespace pulsepsd {

namespace {

// FFTW's planner is not thread-safe; execution with a private plan is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n)
    {
        in_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
        out_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
        if (!in_ || !out_) {
            release();
            throw std::bad_alloc();
        }
        std::lock_guard lock(planner_mutex());
        // FFTW_ESTIMATE keeps the chosen algorithm, and thus the rounding, run-invariant.
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;
    ~RealFft() { release(); }

    double* input() { return in_; }
    const fftw_complex* output() const { return out_; }
    void execute() { fftw_execute(plan_); }
    std::size_t size() const { return n_; }

private:
    void release()
    {
        if (plan_) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        if (in_)
            fftw_free(in_);
        if (out_)
            fftw_free(out_);
        plan_ = nullptr;
        in_ = nullptr;
        out_ = nullptr;
    }

    std::size_t n_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

// Loads mean-removed samples into the FFT input and transforms. Returns L.
std::size_t transform(RealFft& fft, std::span<const std::uint8_t> samples, LengthPolicy policy)
{
    if (samples.empty())
        throw EmptyInput("periodogram: empty signal");
    const std::size_t n = fft.size();
    if (samples.size() > n && policy == LengthPolicy::ZeroPad)
        throw InvalidParameter("periodogram: signal length " + std::to_string(samples.size()) +
                               " exceeds fft_size " + std::to_string(n) + " with zero-padding policy");
    const std::size_t len = std::min(samples.size(), n);

    std::size_t ones = 0;
    for (std::size_t i = 0; i < len; ++i)
        ones += samples[i] ? 1 : 0;
    const double mean = static_cast<double>(ones) / static_cast<double>(len);

    double* in = fft.input();
    for (std::size_t i = 0; i < len; ++i)
        in[i] = (samples[i] ? 1.0 : 0.0) - mean;
    std::fill(in + len, in + n, 0.0);
    fft.execute();
    return len;
}

void accumulate_one_sided(const RealFft& fft, std::size_t len, std::vector<double>& acc)
{
    const double scale = 1.0 / static_cast<double>(len);
    const fftw_complex* out = fft.output();
    for (std::size_t k = 1; k <= fft.size() / 2; ++k) {
        const double re = out[k][0] * scale;
        const double im = out[k][1] * scale;
        acc[k - 1] += re * re + im * im;
    }
}

std::string echo(const SimConfig& c)
{
    std::ostringstream os;
    os << "model=" << to_string(c.params.variant) << " t0=" << c.params.t0 << " delta=" << c.params.delta
       << " p=" << c.params.prob_one << " symbols=" << c.n_symbols << " realizations=" << c.n_realizations
       << " fft=" << c.fft_size << " seed=" << c.seed;
    return os.str();
}

}  // namespace

void SimConfig::validate() const
{
    params.validate();
    if (n_symbols == 0)
        throw InvalidParameter("n_symbols must be positive");
    if (n_realizations == 0)
        throw InvalidParameter("n_realizations must be positive");
    if (fft_size < 2 || !std::has_single_bit(fft_size))
        throw InvalidParameter("fft_size must be a power of two (got " + std::to_string(fft_size) + ")");
    if (params.variant == Variant::TransitionStretch && policy == LengthPolicy::ZeroPad &&
        fft_size < n_symbols * static_cast<std::size_t>(params.t0))
        throw InvalidParameter("fft_size >= n_symbols * t0 violated (" + std::to_string(fft_size) + " < " +
                               std::to_string(n_symbols * static_cast<std::size_t>(params.t0)) +
                               "); enable truncation or enlarge the FFT");
}

std::vector<double> periodogram_two_sided(std::span<const std::uint8_t> samples, std::size_t fft_size,
                                          LengthPolicy policy)
{
    if (fft_size < 2)
        throw InvalidParameter("fft_size must be at least 2");
    RealFft fft(fft_size);
    const std::size_t len = transform(fft, samples, policy);
    const double scale = 1.0 / static_cast<double>(len);
    std::vector<double> full(fft_size);
    const fftw_complex* out = fft.output();
    for (std::size_t k = 0; k <= fft_size / 2; ++k) {
        const double re = out[k][0] * scale;
        const double im = out[k][1] * scale;
        full[k] = re * re + im * im;
        if (k != 0 && k != fft_size - k)
            full[fft_size - k] = full[k];
    }
    return full;
}

SpectrumGrid periodogram(const SampledSignal& signal, std::size_t fft_size, LengthPolicy policy)
{
    if (fft_size < 2 || fft_size % 2 != 0)
        throw InvalidParameter("fft_size must be even and at least 2");
    RealFft fft(fft_size);
    const std::size_t len = transform(fft, signal.samples, policy);

    SpectrumGrid out;
    out.kind = SpectrumKind::Simulated;
    out.grid = FrequencyGrid::fft_bins(fft_size);
    out.psd.assign(fft_size / 2, 0.0);
    out.normalization = "|X/L|^2";
    accumulate_one_sided(fft, len, out.psd);
    return out;
}

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SampledSignal realization_signal(const SimConfig& config, std::size_t index)
{
    const std::uint64_t seed = realization_seed(config.seed, index);
    const TrainParams& p = config.params;
    if (p.variant == Variant::TransitionStretch)
        return synth_transition_stretch(gen_bits(config.n_symbols, p.prob_one, seed), p);

    const auto zero_len = static_cast<std::size_t>(p.t0 - p.delta);
    const std::size_t needed = (config.fft_size + zero_len - 1) / zero_len;
    SampledSignal sig = synth_blank_shorten(gen_bits(std::max(config.n_symbols, needed), p.prob_one, seed), p);
    sig.samples.resize(config.fft_size);
    return sig;
}

unsigned resolve_worker_count(unsigned requested)
{
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PULSEPSD_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0)
            n = std::min(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

SpectrumGrid estimate_psd(const SimConfig& config)
{
    config.validate();
    const std::size_t bins = config.fft_size / 2;
    const std::size_t n_blocks = (config.n_realizations + kReductionBlock - 1) / kReductionBlock;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_worker_count(config.threads), n_blocks));

    std::vector<std::vector<double>> block_sums(n_blocks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        try {
            RealFft fft(config.fft_size);
            for (std::size_t b = next++; b < n_blocks; b = next++) {
                std::vector<double> acc(bins, 0.0);
                const std::size_t first = b * kReductionBlock;
                const std::size_t last = std::min(first + kReductionBlock, config.n_realizations);
                for (std::size_t r = first; r < last; ++r) {
                    const SampledSignal sig = realization_signal(config, r);
                    const std::size_t len = transform(fft, sig.samples, config.policy);
                    accumulate_one_sided(fft, len, acc);
                }
                block_sums[b] = std::move(acc);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = n_blocks;
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);

    SpectrumGrid out;
    out.kind = SpectrumKind::Simulated;
    out.t0 = config.params.t0;
    out.grid = FrequencyGrid::fft_bins(config.fft_size);
    out.psd.assign(bins, 0.0);
    out.normalization = "|X/L|^2 ensemble mean";
    out.params_echo = echo(config);
    for (const auto& block : block_sums)
        for (std::size_t k = 0; k < bins; ++k)
            out.psd[k] += block[k];
    const double inv = 1.0 / static_cast<double>(config.n_realizations);
    for (double& v : out.psd)
        v *= inv;
    return out;
}

}  // namespace pulsepsd

#include "pulsepsd/spectrum.hpp"

#include "pulsepsd/error.hpp"

#include <algorithm>
#include <cmath>

namespace pulsepsd {

FrequencyGrid::FrequencyGrid(std::vector<double> values) : values_(std::move(values))
{
    if (values_.empty())
        throw EmptyInput("frequency grid is empty");
    if (!(values_.front() > 0.0))
        throw InvalidParameter("frequency grid must start above 0 (f = 0 is excluded)");
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (!(values_[i] > values_[i - 1]))
            throw InvalidParameter("frequency grid must be strictly increasing");
}

FrequencyGrid FrequencyGrid::uniform_normalized(double t0, double fn_min, double fn_max,
                                                int points_per_unit)
{
    if (!(t0 > 0.0) || points_per_unit <= 0 || !(fn_max > fn_min) || fn_min < 0.0)
        throw InvalidParameter("uniform grid needs t0 > 0, points_per_unit > 0, 0 <= fn_min < fn_max");
    const double step = 1.0 / points_per_unit;
    const auto n = static_cast<std::size_t>(std::floor((fn_max - fn_min) * points_per_unit));
    std::vector<double> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        v.push_back((fn_min + (static_cast<double>(i) + 0.5) * step) / t0);
    return FrequencyGrid(std::move(v));
}

FrequencyGrid FrequencyGrid::fft_bins(std::size_t fft_size)
{
    if (fft_size < 2)
        throw InvalidParameter("fft_size must be at least 2");
    std::vector<double> v(fft_size / 2);
    for (std::size_t k = 1; k <= fft_size / 2; ++k)
        v[k - 1] = static_cast<double>(k) / static_cast<double>(fft_size);
    return FrequencyGrid(std::move(v));
}

std::string to_string(SpectrumKind kind)
{
    switch (kind) {
    case SpectrumKind::Continuous: return "continuous";
    case SpectrumKind::Binned: return "binned";
    case SpectrumKind::Line: return "line";
    case SpectrumKind::Combined: return "combined";
    case SpectrumKind::Simulated: return "simulated";
    }
    return "unknown";
}

std::size_t nearest_index(const std::vector<double>& sorted, double f)
{
    if (sorted.empty())
        throw EmptyInput("nearest_index on empty axis");
    auto it = std::lower_bound(sorted.begin(), sorted.end(), f);
    if (it == sorted.begin())
        return 0;
    if (it == sorted.end())
        return sorted.size() - 1;
    const auto hi = static_cast<std::size_t>(it - sorted.begin());
    return (f - sorted[hi - 1] <= sorted[hi] - f) ? hi - 1 : hi;
}

}  // namespace pulsepsd

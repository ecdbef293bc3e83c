// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#include "cogmimo/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace cogmimo {

double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 8) {
        double acc = 0;
        for (double v : values)
            acc += v;
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("mean of an empty sample");
    return pairwise_sum(values) / static_cast<double>(values.size());
}

MeanEstimate mean_with_stderr(std::span<const double> values)
{
    MeanEstimate out;
    out.mean = mean(values);
    const std::size_t n = values.size();
    if (n < 2)
        return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i)
        sq[i] = (values[i] - out.mean) * (values[i] - out.mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    out.std_error = std::sqrt(var / static_cast<double>(n));
    return out;
}

} // namespace cogmimo

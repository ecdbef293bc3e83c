// SPDX-License-Identifier: Apache-2.0
//
// cogmimo: effective capacity of cognitive MIMO links
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

namespace cogmimo {

// Pairwise (tree) summation; the reduction order depends only on the length.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

struct MeanEstimate {
    double mean = 0;
    double std_error = 0;
};

MeanEstimate mean_with_stderr(std::span<const double> values);

// SplitMix64; satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Independent stream for item `index` of a run seeded by `seed`.
inline SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t index)
{
    SplitMix64 mix(seed);
    const std::uint64_t base = mix();
    SplitMix64 scramble(base ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return SplitMix64(scramble());
}

// Runs fn(i) for i in [0, n) over `workers` threads in contiguous blocks.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn)
{
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const std::size_t count = std::min<std::size_t>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t begin = n * w / count;
        const std::size_t end = n * (w + 1) / count;
        pool.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i)
                fn(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

} // namespace cogmimo

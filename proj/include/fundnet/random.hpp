#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fundnet
{
    /// Seeded 64-bit Mersenne Twister with portable uniform/exponential draws.
    ///
    /// The std:: distribution adaptors are implementation-defined, so draws are
    /// built directly from raw engine output to keep results identical across
    /// standard libraries.
    class RandomStream
    {
    public:
        explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

        /// Sub-stream `index` of `master_seed`. Streams for distinct (master,
        /// domain, index) triples are seeded through std::seed_seq.
        static RandomStream substream(std::uint64_t master_seed, std::uint64_t domain, std::uint64_t index)
        {
            std::seed_seq seq{
                static_cast<std::uint32_t>(master_seed),
                static_cast<std::uint32_t>(master_seed >> 32),
                static_cast<std::uint32_t>(domain),
                static_cast<std::uint32_t>(domain >> 32),
                static_cast<std::uint32_t>(index),
                static_cast<std::uint32_t>(index >> 32),
            };
            return RandomStream(seq);
        }

        /// Uniform on [0, 1) with 53 bits of resolution.
        double uniform()
        {
            return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        }

        /// Exponential with the given mean.
        double exponential(double mean)
        {
            return -mean * std::log1p(-uniform());
        }

        bool bernoulli(double p)
        {
            return uniform() < p;
        }

    private:
        explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

        std::mt19937_64 engine_;
    };
}

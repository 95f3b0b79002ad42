#pragma once

#include <cstdint>
#include <random>

namespace mdens {

// splitmix64 finalizer, used to derive engine seeds from (master, stream).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Reproducible random stream keyed by (master_seed, stream_id). Realization i
// of every estimator uses stream_id = i, so results do not depend on how
// realizations are split across workers.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_(master_seed), stream_(stream_id), engine_(mix64(mix64(master_seed) ^ stream_id)) {}

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_id() const { return stream_; }

    // Independent child stream (e.g. the single-grain draw of a realization).
    RngStream substream(std::uint64_t key) const {
        return RngStream(mix64(master_ ^ mix64(key + 0x632be59bd9b4e019ULL)), stream_);
    }

    // Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

    // Number of failures before the first success.
    std::uint64_t geometric(double p) { return std::geometric_distribution<std::uint64_t>(p)(engine_); }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t master_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace mdens

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace molfate {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key) noexcept {
        constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
        constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }
};

/// What a stream is used for. Streams with different purposes never share
/// counters, so enabling one consumer does not perturb another.
enum class StreamPurpose : std::uint32_t {
    Reactions = 1,
    Tracking = 2,
    SingleMolecule = 3,
    InitialStatus = 4,
    Poisson = 5,
    Clock = 1024,  // Clock + k for the unit Poisson clock of channel k
};

constexpr StreamPurpose clock_purpose(std::uint32_t channel) noexcept {
    return static_cast<StreamPurpose>(static_cast<std::uint32_t>(StreamPurpose::Clock) + channel);
}

/// Sequential view of the Philox stream keyed by (seed, trajectory, purpose).
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t trajectory, StreamPurpose purpose) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          purpose_(static_cast<std::uint32_t>(purpose)),
          trajectory_(trajectory) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (used_ == 2) refill();
        const result_type v = (static_cast<result_type>(buffer_[2 * used_]) << 32) | buffer_[2 * used_ + 1];
        ++used_;
        return v;
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Exp(1) variate.
    double exponential() noexcept { return -std::log(uniform()); }

    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    void refill() noexcept {
        buffer_ = Philox4x32::block({block_, purpose_, static_cast<std::uint32_t>(trajectory_),
                                     static_cast<std::uint32_t>(trajectory_ >> 32)},
                                    key_);
        ++block_;
        used_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t purpose_;
    std::uint64_t trajectory_;
    std::uint32_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int used_ = 2;
};

}  // namespace molfate

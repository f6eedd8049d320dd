#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace levylab {

/// Identifies one independent random stream.
///
/// The (experiment, replica) pair selects a Philox key; the component index
/// selects a disjoint region of that key's counter space. Equal keys give
/// bit-identical streams, so results never depend on which worker draws them.
struct StreamKey {
    std::uint64_t experiment_id = 0;
    std::uint64_t replica = 0;
    std::uint64_t component = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit tag for a named sub-experiment (FNV-1a folded with the seed).
std::uint64_t derive_experiment_id(std::uint64_t seed, std::string_view tag);

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                         std::array<std::uint32_t, 2> key);

/// Counter-based generator bound to one StreamKey. Cheap to construct; holds
/// no shared state. Models UniformRandomBitGenerator.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit Stream(const StreamKey& key);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return next_u64(); }
    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();
    /// Uniform on (0, 1].
    double uniform_left_open() { return 1.0 - uniform_right_open(); }
    /// Uniform on [0, 1).
    double uniform_right_open();

    double normal();
    double exponential(double rate);

    const StreamKey& key() const { return key_; }

private:
    void refill();

    StreamKey key_;
    std::array<std::uint32_t, 2> philox_key_{};
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_words_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_normal_ = false;
};

}  // namespace levylab

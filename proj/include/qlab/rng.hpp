#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace qlab {

/// splitmix64 step; used for seeding and for deriving stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with explicit, serializable state.  Hand-rolled so that
/// trajectories are bit-reproducible across platforms and toolchains
/// (std distributions carry no such guarantee).
class Xoshiro256pp {
  public:
    using State = std::array<std::uint64_t, 4>;

    Xoshiro256pp() : Xoshiro256pp(0) {}
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }
    explicit Xoshiro256pp(const State& s) : s_(s) {}

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    const State& state() const { return s_; }
    void set_state(const State& s) { s_ = s; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    State s_;
};

/// Per-trajectory random streams: one substream for action sampling, one for
/// environment transitions.  Keeping them separate lets the direct algorithm
/// loop and its stochastic-approximation embedding consume randomness in
/// lockstep.
struct RngPair {
    Xoshiro256pp action;
    Xoshiro256pp state;

    static RngPair for_trajectory(std::uint64_t seed) {
        std::uint64_t sa = seed ^ 0xa5a5a5a5a5a5a5a5ULL;
        std::uint64_t ss = seed ^ 0x5151515151515151ULL;
        return RngPair{Xoshiro256pp(splitmix64(sa)), Xoshiro256pp(splitmix64(ss))};
    }

    /// Seed for the k-th member of a fan-out (seed list entry or derived).
    static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
        std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
        return splitmix64(s);
    }
};

/// Inverse-CDF draw over a probability row with a fixed index ordering.
/// Returns the first index whose cumulative mass exceeds u; falls back to the
/// last index so that rounding in the row sum cannot escape the support.
inline int sample_index(std::span<const double> probs, double u) {
    double cum = 0.0;
    const int n = static_cast<int>(probs.size());
    for (int i = 0; i < n; ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return n - 1;
}

}  // namespace qlab

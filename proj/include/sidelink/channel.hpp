#pragma once

#include <cstdint>

#include "sidelink/scenario.hpp"
#include "sidelink/types.hpp"

namespace sidelink {

// Time-frequency layout of the shared band: a window of `n_subframes`
// subframes, each offering `n_subchannels` parallel subchannels of
// `bandwidth_hz` each. Global subchannel indices are 1-based and run
// subframe by subframe: subchannels 1..K live in subframe 1,
// K+1..2K in subframe 2, and so on.
class ChannelGrid {
public:
    static constexpr double kMaxBandHz = 10.0e6;

    ChannelGrid(int n_subframes,
                int n_subchannels,
                double bandwidth_hz = 1.26e6,
                double subframe_duration_s = 1.0e-3);

    int n_subframes() const { return n_subframes_; }
    int n_subchannels() const { return n_subchannels_; }
    double bandwidth_hz() const { return bandwidth_hz_; }
    double subframe_duration_s() const { return subframe_duration_s_; }

    // Total number of global subchannels, K * L.
    int total_subchannels() const { return n_subframes_ * n_subchannels_; }

    // Subframe (1-based) hosting global subchannel k (1-based).
    int subframe_of(int k) const;

    friend bool operator==(const ChannelGrid& a, const ChannelGrid& b) {
        return a.n_subframes_ == b.n_subframes_ &&
               a.n_subchannels_ == b.n_subchannels_ &&
               a.bandwidth_hz_ == b.bandwidth_hz_ &&
               a.subframe_duration_s_ == b.subframe_duration_s_;
    }

private:
    int n_subframes_;
    int n_subchannels_;
    double bandwidth_hz_;
    double subframe_duration_s_;
};

// How synthetic per-subchannel SINR samples are drawn: independent
// uniform values in [sinr_min_db, sinr_max_db] dB, reproducible from
// the seed.
struct ChannelModelParams {
    double sinr_min_db = 0.0;
    double sinr_max_db = 20.0;
    std::uint64_t seed = 0;
};

// Per-vehicle, per-subchannel achievable rates in bit/s, tied to the
// grid they were generated for so consumers can reject mismatched
// combinations.
struct CapacityMap {
    ChannelGrid grid;
    // Row i-1: vehicle i; column k-1: global subchannel k.
    Matrix rates;

    CapacityMap(ChannelGrid g, Matrix r);
};

// Shannon capacity in bit/s of one subchannel of width `bandwidth_hz`
// at the given linear (not dB) signal-to-interference-and-noise ratio.
double capacity_of(double sinr_linear, double bandwidth_hz);

// One independent SINR draw per (vehicle, subchannel), vehicles in id
// order and subchannels in global order, so the seed pins the whole
// matrix bit for bit.
CapacityMap generate_capacities(const Scenario& scenario,
                                const ChannelGrid& grid,
                                const ChannelModelParams& params);

} // namespace sidelink
